#pragma once

#include <Eigen/Dense>
#include <random>

namespace marisec::vessel {

using Vec6 = Eigen::Matrix<double, 6, 1>;

/// Pose eta = [x, y, z, roll, pitch, yaw] and body velocity
/// nu = [u, v, w, p, q, r]. In surface mode z, roll, pitch and the
/// corresponding rates stay identically zero.
struct VesselState {
    Vec6 eta = Vec6::Zero();
    Vec6 nu = Vec6::Zero();

    double x() const { return eta(0); }
    double y() const { return eta(1); }
    double yaw() const { return eta(5); }
    double surge() const { return nu(0); }
    double sway() const { return nu(1); }
    double yaw_rate() const { return nu(5); }
};

/// Piecewise-constant thruster command. Waypoint mode produces a
/// heading-hold controller toward a fixed target so routes are reproducible.
struct ThrustPlan {
    enum class Mode { Constant, Waypoint };
    Mode mode = Mode::Constant;
    Vec6 constant_tau = Vec6::Zero();
    double waypoint_x_m = 0.0;
    double waypoint_y_m = 0.0;
    double cruise_speed_ms = 0.0;
    double surge_feedforward_n = 0.0; // cancels linear damping at cruise
    double gain_surge = 2e5;       // N per (m/s) of speed error
    double gain_yaw = 2e8;         // N*m per rad of heading error
    double gain_yaw_rate = 4e8;    // N*m per (rad/s)
    double max_surge_n = 2e6;
    double max_yaw_nm = 2e9;

    Vec6 thrust(const VesselState& state) const;
};

/// Standard deviations of the zero-mean Gaussian environmental forces,
/// redrawn each step. The lever arm scales force noise into yaw moments.
struct DisturbanceModel {
    double sigma_wind_n = 4e4;
    double sigma_current_n = 4e4;
    double sigma_wave_n = 8e4;
    double lever_m = 15.0;
};

struct VesselParams {
    Vec6 mass_diag;    // rigid-body plus added mass, diagonal
    Vec6 damping_diag; // linear damping, diagonal
    bool coriolis_enabled = false;
    Vec6 restoring = Vec6::Zero();
    ThrustPlan plan;
    DisturbanceModel disturbance;
    double v_max_ms = 10.0;
    bool surface_mode = true;

    VesselParams();
    void validate() const;
};

/// Proper rotation matrix for Euler angles (roll, pitch, yaw), ZYX order.
Eigen::Matrix3d rotation_matrix(const Eigen::Vector3d& theta);

/// One semi-implicit Euler step of the reduced surface dynamics:
/// body accelerations from the force balance, velocity update, then pose
/// integration with the updated velocities and re-projection of the
/// surface constraints.
VesselState step_vessel(const VesselState& state, const VesselParams& params, std::mt19937_64& rng,
                        double dt_s);

} // namespace marisec::vessel
