#pragma once

#include <cmath>
#include <complex>
#include <random>

namespace marisec::channel {

inline double db_to_lin(double db) { return std::pow(10.0, db / 10.0); }
inline double lin_to_db(double lin) { return 10.0 * std::log10(lin); }
inline double dbm_to_w(double dbm) { return std::pow(10.0, (dbm - 30.0) / 10.0); }

/// Deterministic link constants. dB/dBm values are kept as configured and
/// converted once here; the rate equations below run entirely in linear
/// watts / unitless gains.
struct LinkBudget {
    // satellite-to-vessel link
    double p_sat_dbm = 49.03;
    double g_sat_dbi = 52.0;
    double g_vessel_sat_dbi = 30.0;
    double c_s = 46.4;
    double w_s = 2.0;
    double rician_k = 31.3;
    double sigma_shadow_s2v_db = 4.0;
    // UAV-to-vessel link
    double g_uav_dbi = 8.0;
    double g_eve_uav_dbi = 8.0;
    double c_u = 116.7;
    double w_u = 1.5;
    double d_ref_m = 2600.0;
    double sigma_shadow_u2v_db = 2.0;
    // receiver
    double noise_dbm = -107.0;

    void validate() const;

    double p_sat_w() const { return dbm_to_w(p_sat_dbm); }
    double g_sat() const { return db_to_lin(g_sat_dbi); }
    double g_vessel_sat() const { return db_to_lin(g_vessel_sat_dbi); }
    double g_uav() const { return db_to_lin(g_uav_dbi); }
    double g_eve_uav() const { return db_to_lin(g_eve_uav_dbi); }
    double noise_w() const { return dbm_to_w(noise_dbm); }
};

/// One stochastic realization of the fading/shadowing terms for a single
/// vessel's pair of links (its satellite downlink and the UAV jamming link).
struct ChannelDraw {
    double shadow_s2v_db = 0.0;
    double shadow_u2v_db = 0.0;
    std::complex<double> scatter{0.0, 0.0}; // M ~ CN(0,1)
    double rician_amp = 1.0;                // unit mean power fading amplitude

    static ChannelDraw deterministic() { return ChannelDraw{}; }
};

/// Samples draws from a caller-owned stream. The draw order is fixed so that
/// rng consumption is identical regardless of what the policy does.
ChannelDraw sample_draw(const LinkBudget& budget, std::mt19937_64& rng);

/// Eq.-(5)-style log-distance loss with lognormal shadowing, dB.
double pathloss_s2v_db(const LinkBudget& budget, double d_m, const ChannelDraw& draw);

/// Composite Rician/scatter amplitude including the path loss attenuation.
std::complex<double> channel_gain_s2v(const LinkBudget& budget, double d_m, const ChannelDraw& draw);

/// Reference-distance log-distance loss for the jamming link, dB.
double pathloss_u2v_db(const LinkBudget& budget, double d_m, const ChannelDraw& draw);

/// Power gain of the jamming link: squared fading amplitude over the linear
/// path loss.
double channel_gain_u2v(const LinkBudget& budget, double d_m, const ChannelDraw& draw);

/// Achievable downlink rate at Alice under UAV interference, bits/s/Hz.
double rate_alice(const LinkBudget& budget, std::complex<double> h_sa, double h_ua, double p_uav_w);

/// Achievable rate at Eve; the jamming term additionally carries Eve's
/// receive gain toward the UAV.
double rate_eve(const LinkBudget& budget, std::complex<double> h_se, double h_ue, double p_uav_w);

/// Non-negative secrecy rate.
double secrecy_rate(double r_alice, double r_eve);

} // namespace marisec::channel
