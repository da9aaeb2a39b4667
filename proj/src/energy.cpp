#include "marisec/energy.hpp"

#include <cmath>
#include <stdexcept>

namespace marisec::energy {

void RotorcraftParams::validate() const {
    for (double v : {p_induced_w, p_blade_w, v_tip_ms, v_induced_hover_ms, drag_ratio, rotor_solidity,
                     rotor_area_m2, air_density, mass_kg, gravity_ms2}) {
        if (!(v > 0.0)) throw std::invalid_argument("rotorcraft parameters must be strictly positive");
    }
}

double propulsion_power(const RotorcraftParams& params, double v_h_ms) {
    if (!(v_h_ms >= 0.0)) throw std::invalid_argument("speed must be non-negative");
    const double vi2 = params.v_induced_hover_ms * params.v_induced_hover_ms;
    const double x = v_h_ms * v_h_ms / (2.0 * vi2);
    const double induced = params.p_induced_w * std::sqrt(std::sqrt(1.0 + x * x) - x);
    const double blade =
        params.p_blade_w * (1.0 + 3.0 * v_h_ms * v_h_ms / (params.v_tip_ms * params.v_tip_ms));
    const double parasite = 0.5 * params.drag_ratio * params.rotor_solidity * params.rotor_area_m2 *
                            params.air_density * v_h_ms * v_h_ms * v_h_ms;
    return induced + blade + parasite;
}

double PathPoint::forward_speed_ms() const {
    return std::sqrt(v_h_ms * v_h_ms + v_v_ms * v_v_ms);
}

double trajectory_energy(const RotorcraftParams& params, std::span<const PathPoint> path, double dt_s) {
    if (path.empty()) throw std::invalid_argument("trajectory must be non-empty");
    if (!(dt_s > 0.0)) throw std::invalid_argument("slot duration must be positive");
    double propulsion = 0.0;
    for (const PathPoint& p : path) propulsion += propulsion_power(params, p.v_h_ms) * dt_s;
    const double vf0 = path.front().forward_speed_ms();
    const double vfT = path.back().forward_speed_ms();
    const double kinetic = 0.5 * params.mass_kg * (vfT * vfT - vf0 * vf0);
    const double potential = params.mass_kg * params.gravity_ms2 * (path.back().z_m - path.front().z_m);
    return propulsion + kinetic + potential;
}

} // namespace marisec::energy
