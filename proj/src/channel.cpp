#include "marisec/channel.hpp"

#include <stdexcept>

namespace marisec::channel {

void LinkBudget::validate() const {
    if (!(d_ref_m > 0.0)) throw std::invalid_argument("reference distance must be positive");
    if (!(rician_k >= 0.0)) throw std::invalid_argument("Rician factor must be non-negative");
    if (!(w_s > 0.0) || !(w_u > 0.0)) throw std::invalid_argument("path loss exponents must be positive");
    for (double v : {p_sat_dbm, g_sat_dbi, g_vessel_sat_dbi, g_uav_dbi, g_eve_uav_dbi, noise_dbm, c_s, c_u,
                     sigma_shadow_s2v_db, sigma_shadow_u2v_db}) {
        if (!std::isfinite(v)) throw std::invalid_argument("link budget fields must be finite");
    }
}

ChannelDraw sample_draw(const LinkBudget& budget, std::mt19937_64& rng) {
    std::normal_distribution<double> n01(0.0, 1.0);
    ChannelDraw d;
    d.shadow_s2v_db = budget.sigma_shadow_s2v_db * n01(rng);
    d.scatter = std::complex<double>(n01(rng), n01(rng)) / std::sqrt(2.0);
    d.shadow_u2v_db = budget.sigma_shadow_u2v_db * n01(rng);
    // Rician amplitude with K = F_S, normalized to unit mean power.
    const double k = budget.rician_k;
    const std::complex<double> los(std::sqrt(k / (1.0 + k)), 0.0);
    const std::complex<double> nlos =
        std::complex<double>(n01(rng), n01(rng)) * std::sqrt(1.0 / (2.0 * (1.0 + k)));
    d.rician_amp = std::abs(los + nlos);
    return d;
}

double pathloss_s2v_db(const LinkBudget& budget, double d_m, const ChannelDraw& draw) {
    if (!(d_m > 0.0)) throw std::invalid_argument("distance must be positive");
    return budget.c_s + 10.0 * budget.w_s * std::log10(d_m) + draw.shadow_s2v_db;
}

std::complex<double> channel_gain_s2v(const LinkBudget& budget, double d_m, const ChannelDraw& draw) {
    const double pl_db = pathloss_s2v_db(budget, d_m, draw);
    // attenuation convention: sqrt(10^(-PL/10)) multiplies the fading term
    const double amp = std::sqrt(db_to_lin(-pl_db));
    const double k = budget.rician_k;
    const std::complex<double> fading =
        std::sqrt(k / (1.0 + k)) + std::sqrt(1.0 / (1.0 + k)) * draw.scatter;
    return amp * fading;
}

double pathloss_u2v_db(const LinkBudget& budget, double d_m, const ChannelDraw& draw) {
    if (!(d_m > 0.0)) throw std::invalid_argument("distance must be positive");
    return budget.c_u + 10.0 * budget.w_u * std::log10(d_m / budget.d_ref_m) + draw.shadow_u2v_db;
}

double channel_gain_u2v(const LinkBudget& budget, double d_m, const ChannelDraw& draw) {
    const double pl_db = pathloss_u2v_db(budget, d_m, draw);
    return draw.rician_amp * draw.rician_amp / db_to_lin(pl_db);
}

double rate_alice(const LinkBudget& budget, std::complex<double> h_sa, double h_ua, double p_uav_w) {
    if (p_uav_w < 0.0) throw std::invalid_argument("UAV power must be non-negative");
    const double signal = budget.p_sat_w() * budget.g_sat() * budget.g_vessel_sat() * std::norm(h_sa);
    const double interference = p_uav_w * budget.g_uav() * h_ua;
    return std::log2(1.0 + signal / (interference + budget.noise_w()));
}

double rate_eve(const LinkBudget& budget, std::complex<double> h_se, double h_ue, double p_uav_w) {
    if (p_uav_w < 0.0) throw std::invalid_argument("UAV power must be non-negative");
    const double signal = budget.p_sat_w() * budget.g_sat() * budget.g_vessel_sat() * std::norm(h_se);
    const double interference = p_uav_w * budget.g_uav() * budget.g_eve_uav() * h_ue;
    return std::log2(1.0 + signal / (interference + budget.noise_w()));
}

double secrecy_rate(double r_alice, double r_eve) {
    return std::max(0.0, r_alice - r_eve);
}

} // namespace marisec::channel
