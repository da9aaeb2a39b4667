#include "marisec/baselines.hpp"

#include <cmath>
#include <stdexcept>

namespace marisec::baselines {

env::ActionVector non_uav_policy() { return env::ActionVector{0.0, 0.0, 0.0, 0.0}; }

env::ActionVector random_policy(const env::EnvParams& params, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u01(0.0, 1.0);
    env::ActionVector a;
    const double h = params.v_h_max_ms * params.slot_s;
    const double v = params.v_v_max_ms * params.slot_s;
    a.dx_m = (2.0 * u01(rng) - 1.0) * h;
    a.dy_m = (2.0 * u01(rng) - 1.0) * h;
    a.dz_m = (2.0 * u01(rng) - 1.0) * v;
    a.p_uav_w = params.p_min_w + u01(rng) * (params.p_max_w - params.p_min_w);
    return env::project_action(params, a);
}

double optimal_secrecy_bound(const env::EnvParams& params, const env::ChannelSnapshot& snap,
                             double grid_m) {
    if (!(grid_m > 0.0)) throw std::invalid_argument("grid resolution must be positive");
    const auto& b = params.budget;
    const double h_ant = params.antenna_height_m;

    const geo::Position3D alice_ecef =
        geo::local_to_ecef(params.anchor, snap.alice_x_m, snap.alice_y_m, h_ant);
    const geo::Position3D eve_ecef = geo::local_to_ecef(params.anchor, snap.eve_x_m, snap.eve_y_m, h_ant);
    const double d_sa = geo::distance(snap.sat_pos, alice_ecef);
    const double d_se = geo::distance(snap.sat_pos, eve_ecef);

    const std::complex<double> h_sa = channel::channel_gain_s2v(b, d_sa, snap.draw_alice);
    const std::complex<double> h_se = channel::channel_gain_s2v(b, d_se, snap.draw_eve);

    // closest feasible point to Eve, then the sweep grid
    const geo::Position3D eve_local{snap.eve_x_m, snap.eve_y_m, h_ant};
    double best_d = geo::distance(
        geo::Position3D{std::clamp(snap.eve_x_m, params.x_min_m, params.x_max_m),
                        std::clamp(snap.eve_y_m, params.y_min_m, params.y_max_m), params.z_min_m},
        eve_local);
    for (double x = params.x_min_m; x <= params.x_max_m + 1e-9; x += grid_m) {
        for (double y = params.y_min_m; y <= params.y_max_m + 1e-9; y += grid_m) {
            for (double z = params.z_min_m; z <= params.z_max_m + 1e-9; z += grid_m) {
                best_d = std::min(best_d, geo::distance(geo::Position3D{x, y, z}, eve_local));
            }
        }
    }

    const double h_ue = channel::channel_gain_u2v(b, best_d, snap.draw_eve);
    const double r_a = channel::rate_alice(b, h_sa, 0.0, 0.0);
    const double r_e = channel::rate_eve(b, h_se, h_ue, params.p_max_w);
    return channel::secrecy_rate(r_a, r_e);
}

std::vector<double> optimal_secrecy_oracle(const env::EnvParams& params,
                                           std::span<const env::StepInfo> trace, double grid_m) {
    if (trace.empty()) throw std::invalid_argument("episode trace must be non-empty");
    std::vector<double> bounds;
    bounds.reserve(trace.size());
    for (const auto& info : trace) bounds.push_back(optimal_secrecy_bound(params, info.snap, grid_m));
    return bounds;
}

} // namespace marisec::baselines
