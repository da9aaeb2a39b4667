#pragma once

#include <span>

namespace marisec::energy {

/// Rotary-wing propulsion constants. Defaults follow the canonical
/// rotorcraft parameter set used throughout the UAV energy literature;
/// aircraft mass is the configured airframe value.
struct RotorcraftParams {
    double p_induced_w = 88.63;
    double p_blade_w = 79.86;
    double v_tip_ms = 120.0;
    double v_induced_hover_ms = 4.03;
    double drag_ratio = 0.6;
    double rotor_solidity = 0.05;
    double rotor_area_m2 = 0.503;
    double air_density = 1.225;
    double mass_kg = 2.0;
    double gravity_ms2 = 9.8;

    void validate() const;
    double hover_power_w() const { return p_induced_w + p_blade_w; }
};

/// Propulsion power at horizontal speed v_h (m/s): induced + blade profile
/// + parasite terms. Collapses to P_I + P_B at hover.
double propulsion_power(const RotorcraftParams& params, double v_h_ms);

/// One per-slot sample of the flown path: position plus the horizontal and
/// vertical speeds held during the slot.
struct PathPoint {
    double x_m = 0.0;
    double y_m = 0.0;
    double z_m = 0.0;
    double v_h_ms = 0.0;
    double v_v_ms = 0.0;

    double forward_speed_ms() const;
};

/// Total trajectory energy: left-Riemann propulsion sum plus the kinetic and
/// potential deltas between the first and last path points.
double trajectory_energy(const RotorcraftParams& params, std::span<const PathPoint> path, double dt_s);

} // namespace marisec::energy
