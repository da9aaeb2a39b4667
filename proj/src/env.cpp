#include "marisec/env.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace marisec::env {

double EnvParams::mu2_effective() const {
    if (mu2 > 0.0) return mu2;
    return 1.0 / (rotor.hover_power_w() * slot_s);
}

void EnvParams::validate() const {
    sat.validate();
    budget.validate();
    rotor.validate();
    vessel_dyn.validate();
    if (!(x_min_m < x_max_m) || !(y_min_m < y_max_m) || !(z_min_m < z_max_m))
        throw std::invalid_argument("flight bounds must be ordered");
    if (!(p_min_w <= p_max_w) || p_min_w < 0.0)
        throw std::invalid_argument("power bounds must satisfy 0 <= P_min <= P_max");
    if (!(e0_j > 0.0)) throw std::invalid_argument("energy budget must be positive");
    if (!(slots > 0) || !(slot_s > 0.0)) throw std::invalid_argument("episode layout must be positive");
    if (!(v_h_max_ms > 0.0) || !(v_v_max_ms > 0.0)) throw std::invalid_argument("speed caps must be positive");
}

ActionVector project_action(const EnvParams& params, const ActionVector& raw) {
    ActionVector a = raw;
    const double h_cap = params.v_h_max_ms * params.slot_s;
    const double h = std::hypot(a.dx_m, a.dy_m);
    if (h > h_cap) {
        a.dx_m *= h_cap / h;
        a.dy_m *= h_cap / h;
    }
    a.dz_m = std::clamp(a.dz_m, -params.v_v_max_ms * params.slot_s, params.v_v_max_ms * params.slot_s);
    a.p_uav_w = std::clamp(a.p_uav_w, params.p_min_w, params.p_max_w);
    return a;
}

double scalarize(const RewardVector& reward, double tau1, double tau2) {
    if (!(tau1 >= 0.0) || !(tau2 >= 0.0) || std::abs(tau1 + tau2 - 1.0) > 1e-9)
        throw std::invalid_argument("weights must lie on the unit simplex");
    return tau1 * reward.r_secrecy + tau2 * reward.r_energy;
}

Environment::Environment(const EnvParams& params, std::uint64_t seed) : params_(params) {
    params_.validate();
    reset_rng_ = make_stream(seed, StreamTag::EnvReset);
    channel_rng_ = make_stream(seed, StreamTag::Channel);
    alice_rng_ = make_stream(seed, StreamTag::VesselAlice);
    eve_rng_ = make_stream(seed, StreamTag::VesselEve);
    do_reset();
}

EnvState Environment::reset(std::uint64_t seed) {
    reset_rng_ = make_stream(seed, StreamTag::EnvReset);
    channel_rng_ = make_stream(seed, StreamTag::Channel);
    alice_rng_ = make_stream(seed, StreamTag::VesselAlice);
    eve_rng_ = make_stream(seed, StreamTag::VesselEve);
    return do_reset();
}

EnvState Environment::reset() { return do_reset(); }

EnvState Environment::do_reset() {
    std::uniform_real_distribution<double> u01(0.0, 1.0);

    state_ = EnvState{};
    state_.uav_pos.x_m = params_.x_min_m + u01(reset_rng_) * (params_.x_max_m - params_.x_min_m);
    state_.uav_pos.y_m = params_.y_min_m + u01(reset_rng_) * (params_.y_max_m - params_.y_min_m);
    state_.uav_pos.z_m = params_.z_min_m + u01(reset_rng_) * (params_.z_max_m - params_.z_min_m);

    episode_argp0_deg_ = 360.0 * u01(reset_rng_);

    auto init_vessel = [&](const VesselInit& init, vessel::VesselParams& vp) {
        vessel::VesselState s;
        const double jx = (2.0 * u01(reset_rng_) - 1.0) * params_.start_jitter_m;
        const double jy = (2.0 * u01(reset_rng_) - 1.0) * params_.start_jitter_m;
        const double yaw = geo::deg2rad(init.heading_deg);
        s.eta(0) = init.x0_m + jx;
        s.eta(1) = init.y0_m + jy;
        s.eta(5) = yaw;
        s.nu(0) = init.speed_ms;
        vp = params_.vessel_dyn;
        vp.plan.mode = vessel::ThrustPlan::Mode::Waypoint;
        vp.plan.cruise_speed_ms = init.speed_ms;
        vp.plan.surge_feedforward_n = vp.damping_diag(0) * init.speed_ms;
        vp.plan.waypoint_x_m = s.eta(0) + 2e4 * std::cos(yaw);
        vp.plan.waypoint_y_m = s.eta(1) + 2e4 * std::sin(yaw);
        return s;
    };
    state_.alice = init_vessel(params_.alice_init, alice_params_);
    state_.eve = init_vessel(params_.eve_init, eve_params_);

    geo::OrbitalElements el = params_.sat;
    el.argp0_deg = episode_argp0_deg_;
    state_.sat_pos = geo::propagate_satellite(el, 0.0);
    return state_;
}

std::tuple<EnvState, RewardVector, bool, StepInfo> Environment::step(const ActionVector& action) {
    if (state_.done) throw std::logic_error("cannot step a finished episode");

    const ActionVector a = project_action(params_, action);

    // C1-C3: clamp the target position; the boundary flag records whether
    // the commanded move would have left the service area.
    const double tx = state_.uav_pos.x_m + a.dx_m;
    const double ty = state_.uav_pos.y_m + a.dy_m;
    const double tz = state_.uav_pos.z_m + a.dz_m;
    const bool inside = tx >= params_.x_min_m && tx <= params_.x_max_m && ty >= params_.y_min_m &&
                        ty <= params_.y_max_m && tz >= params_.z_min_m && tz <= params_.z_max_m;

    const double z_old = state_.uav_pos.z_m;
    geo::Position3D new_pos{std::clamp(tx, params_.x_min_m, params_.x_max_m),
                            std::clamp(ty, params_.y_min_m, params_.y_max_m),
                            std::clamp(tz, params_.z_min_m, params_.z_max_m)};
    const double dt = params_.slot_s;
    const double v_h = std::hypot(new_pos.x_m - state_.uav_pos.x_m, new_pos.y_m - state_.uav_pos.y_m) / dt;
    const double v_v = std::abs(new_pos.z_m - z_old) / dt;
    const double v_f = std::sqrt(v_h * v_h + v_v * v_v);
    state_.uav_pos = new_pos;

    // per-slot energy: propulsion plus kinetic/potential deltas, floored at
    // zero so decelerating slots cannot emit negative consumption
    const double e_raw = energy::propulsion_power(params_.rotor, v_h) * dt +
                         0.5 * params_.rotor.mass_kg * (v_f * v_f - state_.v_f_prev_ms * state_.v_f_prev_ms) +
                         params_.rotor.mass_kg * params_.rotor.gravity_ms2 * (new_pos.z_m - z_old);
    const double e_u = std::max(0.0, e_raw);
    state_.v_f_prev_ms = v_f;

    state_.alice = vessel::step_vessel(state_.alice, alice_params_, alice_rng_, dt);
    state_.eve = vessel::step_vessel(state_.eve, eve_params_, eve_rng_, dt);

    state_.t_slot += 1;
    geo::OrbitalElements el = params_.sat;
    el.argp0_deg = episode_argp0_deg_;
    state_.sat_pos = geo::propagate_satellite(el, state_.t_slot * dt);

    StepInfo info;
    info.snap.sat_pos = state_.sat_pos;
    info.snap.alice_x_m = state_.alice.x();
    info.snap.alice_y_m = state_.alice.y();
    info.snap.eve_x_m = state_.eve.x();
    info.snap.eve_y_m = state_.eve.y();
    info.snap.draw_alice = params_.fading ? channel::sample_draw(params_.budget, channel_rng_)
                                          : channel::ChannelDraw::deterministic();
    info.snap.draw_eve = params_.fading ? channel::sample_draw(params_.budget, channel_rng_)
                                        : channel::ChannelDraw::deterministic();

    const double h_ant = params_.antenna_height_m;
    const geo::Position3D alice_ecef =
        geo::local_to_ecef(params_.anchor, state_.alice.x(), state_.alice.y(), h_ant);
    const geo::Position3D eve_ecef =
        geo::local_to_ecef(params_.anchor, state_.eve.x(), state_.eve.y(), h_ant);
    const double d_sa = geo::distance(state_.sat_pos, alice_ecef);
    const double d_se = geo::distance(state_.sat_pos, eve_ecef);
    const geo::Position3D alice_local{state_.alice.x(), state_.alice.y(), h_ant};
    const geo::Position3D eve_local{state_.eve.x(), state_.eve.y(), h_ant};
    const double d_ua = geo::distance(state_.uav_pos, alice_local);
    const double d_ue = geo::distance(state_.uav_pos, eve_local);

    const auto& b = params_.budget;
    const std::complex<double> h_sa = channel::channel_gain_s2v(b, d_sa, info.snap.draw_alice);
    const std::complex<double> h_se = channel::channel_gain_s2v(b, d_se, info.snap.draw_eve);
    const double h_ua = channel::channel_gain_u2v(b, d_ua, info.snap.draw_alice);
    const double h_ue = channel::channel_gain_u2v(b, d_ue, info.snap.draw_eve);

    info.rate_a = channel::rate_alice(b, h_sa, h_ua, a.p_uav_w);
    info.rate_e = channel::rate_eve(b, h_se, h_ue, a.p_uav_w);
    info.r_sec = channel::secrecy_rate(info.rate_a, info.rate_e);
    info.e_u = e_u;
    info.p_uav_w = a.p_uav_w;
    info.v_h_ms = v_h;
    info.v_v_ms = v_v;

    info.jam_alice_w = a.p_uav_w * b.g_uav() * h_ua;
    info.jam_eve_w = a.p_uav_w * b.g_uav() * b.g_eve_uav() * h_ue;
    const double i0 = params_.i0_w();
    info.c_ok[5] = info.jam_alice_w <= i0; // C6
    info.c_ok[6] = info.jam_eve_w <= i0;   // C7
    info.w1 = info.c_ok[5] ? 1.0 : params_.w_pen;
    info.w2 = info.c_ok[6] ? 1.0 : params_.w_pen;
    info.k = inside ? 1 : 0;

    state_.p_uav_w = a.p_uav_w;
    state_.cum_tx_j += a.p_uav_w * dt;
    info.c_ok[4] = state_.cum_tx_j <= params_.e0_j; // C5
    // C1-C4 hold by projection
    info.c_ok[0] = info.c_ok[1] = info.c_ok[2] = info.c_ok[3] = true;

    const double wc = info.w1 * info.w2;
    RewardVector reward;
    if (info.k == 1) {
        reward.r_secrecy = params_.mu1 * wc * info.r_sec;
        reward.r_energy = -params_.mu2_effective() * wc * e_u;
    } else {
        reward.r_secrecy = params_.mu1 * params_.rho1 * wc * info.r_sec;
        reward.r_energy = -params_.mu2_effective() * params_.rho2 * wc * e_u;
    }

    state_.done = state_.t_slot >= params_.slots || state_.cum_tx_j > params_.e0_j;
    return {state_, reward, state_.done, info};
}

std::string Environment::rng_state() const {
    std::ostringstream os;
    os << reset_rng_ << '\n' << channel_rng_ << '\n' << alice_rng_ << '\n' << eve_rng_;
    return os.str();
}

void Environment::restore_rng(const std::string& text) {
    std::istringstream is(text);
    is >> reset_rng_ >> channel_rng_ >> alice_rng_ >> eve_rng_;
    if (!is) throw std::runtime_error("corrupt environment rng state");
}

Eigen::VectorXd Environment::observation() const {
    Eigen::VectorXd obs(kObsDim);
    obs.segment<6>(0) = state_.alice.eta;
    obs.segment<6>(6) = state_.alice.nu;
    obs.segment<6>(12) = state_.eve.eta;
    obs.segment<6>(18) = state_.eve.nu;
    obs(24) = state_.p_uav_w;
    obs(25) = state_.uav_pos.x_m;
    obs(26) = state_.uav_pos.y_m;
    obs(27) = state_.uav_pos.z_m;
    obs(28) = state_.sat_pos.x_m;
    obs(29) = state_.sat_pos.y_m;
    obs(30) = state_.sat_pos.z_m;
    return obs;
}

Eigen::VectorXd Environment::observation_normalized() const {
    Eigen::VectorXd o = observation();
    const double ps = params_.arena_scale_m;
    const double cx = 0.5 * (params_.x_min_m + params_.x_max_m);
    const double cy = 0.5 * (params_.y_min_m + params_.y_max_m);
    auto norm_vessel = [&](int base) {
        o(base + 0) = (o(base + 0) - cx) / ps;
        o(base + 1) = (o(base + 1) - cy) / ps;
        o(base + 2) /= ps;
        o(base + 3) /= geo::kPi;
        o(base + 4) /= geo::kPi;
        o(base + 5) /= geo::kPi;
        for (int i = 6; i < 12; ++i) o(base + i) /= 10.0;
    };
    norm_vessel(0);
    norm_vessel(12);
    o(24) /= params_.p_max_w;
    o(25) = (o(25) - cx) / ps;
    o(26) = (o(26) - cy) / ps;
    o(27) /= ps;
    const double ls = params_.sat.orbit_radius_m();
    o(28) /= ls;
    o(29) /= ls;
    o(30) /= ls;
    return o;
}

} // namespace marisec::env
