#include "marisec/vessel.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace marisec::vessel {

namespace {

constexpr double kPi = 3.14159265358979323846;

double wrap_pi(double a) {
    a = std::fmod(a + kPi, 2.0 * kPi);
    if (a < 0.0) a += 2.0 * kPi;
    return a - kPi;
}

} // namespace

VesselParams::VesselParams() {
    mass_diag << 1.2e6, 1.8e6, 1.8e6, 8e8, 8e8, 8e8;
    damping_diag << 1.2e5, 6e5, 6e5, 6e8, 6e8, 6e8;
}

void VesselParams::validate() const {
    for (int i = 0; i < 6; ++i) {
        if (!(mass_diag(i) > 0.0)) throw std::invalid_argument("vessel mass matrix must be positive definite");
        if (!(damping_diag(i) >= 0.0)) throw std::invalid_argument("vessel damping must be non-negative");
    }
    if (!(v_max_ms > 0.0)) throw std::invalid_argument("vessel speed cap must be positive");
}

Vec6 ThrustPlan::thrust(const VesselState& state) const {
    if (mode == Mode::Constant) return constant_tau;
    Vec6 tau = Vec6::Zero();
    const double yaw_des = std::atan2(waypoint_y_m - state.y(), waypoint_x_m - state.x());
    const double err = wrap_pi(yaw_des - state.yaw());
    tau(0) = std::clamp(surge_feedforward_n + gain_surge * (cruise_speed_ms - state.surge()),
                        -max_surge_n, max_surge_n);
    tau(5) = std::clamp(gain_yaw * err - gain_yaw_rate * state.yaw_rate(), -max_yaw_nm, max_yaw_nm);
    return tau;
}

Eigen::Matrix3d rotation_matrix(const Eigen::Vector3d& theta) {
    for (int i = 0; i < 3; ++i) {
        if (!std::isfinite(theta(i))) throw std::invalid_argument("Euler angles must be finite");
    }
    const double cr = std::cos(theta(0)), sr = std::sin(theta(0));
    const double cp = std::cos(theta(1)), sp = std::sin(theta(1));
    const double cy = std::cos(theta(2)), sy = std::sin(theta(2));
    Eigen::Matrix3d rz, ry, rx;
    rz << cy, -sy, 0, sy, cy, 0, 0, 0, 1;
    ry << cp, 0, sp, 0, 1, 0, -sp, 0, cp;
    rx << 1, 0, 0, 0, cr, -sr, 0, sr, cr;
    return rz * ry * rx;
}

VesselState step_vessel(const VesselState& state, const VesselParams& params, std::mt19937_64& rng,
                        double dt_s) {
    if (!(dt_s > 0.0)) throw std::invalid_argument("time step must be positive");
    params.validate();

    Vec6 tau = params.plan.thrust(state);
    std::normal_distribution<double> n01(0.0, 1.0);
    for (double sigma : {params.disturbance.sigma_wind_n, params.disturbance.sigma_current_n,
                         params.disturbance.sigma_wave_n}) {
        tau(0) += sigma * n01(rng);
        tau(1) += sigma * n01(rng);
        tau(5) += sigma * params.disturbance.lever_m * n01(rng);
    }

    Vec6 coriolis = Vec6::Zero();
    if (params.coriolis_enabled) {
        const double mu = params.mass_diag(0), mv = params.mass_diag(1);
        const double u = state.nu(0), v = state.nu(1), r = state.nu(5);
        coriolis(0) = -mv * v * r;
        coriolis(1) = mu * u * r;
        coriolis(5) = (mv - mu) * u * v;
    }

    VesselState next = state;
    for (int i = 0; i < 6; ++i) {
        const double force = tau(i) - coriolis(i) - params.damping_diag(i) * state.nu(i) - params.restoring(i);
        next.nu(i) = state.nu(i) + dt_s * force / params.mass_diag(i);
    }
    if (params.surface_mode) {
        next.nu(2) = next.nu(3) = next.nu(4) = 0.0;
    }
    const double speed = std::hypot(next.nu(0), next.nu(1));
    if (speed > params.v_max_ms) {
        const double scale = params.v_max_ms / speed;
        next.nu(0) *= scale;
        next.nu(1) *= scale;
    }

    // pose integration with the updated body velocities
    const Eigen::Vector3d theta(next.eta(3), next.eta(4), next.eta(5));
    next.eta.head<3>() += dt_s * rotation_matrix(theta) * next.nu.head<3>();
    next.eta(5) = wrap_pi(next.eta(5) + dt_s * next.nu(5));
    if (params.surface_mode) {
        next.eta(2) = next.eta(3) = next.eta(4) = 0.0;
    } else {
        next.eta(3) = wrap_pi(next.eta(3) + dt_s * next.nu(3));
        next.eta(4) = wrap_pi(next.eta(4) + dt_s * next.nu(4));
    }
    return next;
}

} // namespace marisec::vessel
