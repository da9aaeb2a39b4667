#include "marisec/geo.hpp"

#include <stdexcept>

namespace marisec::geo {

void OrbitalElements::validate() const {
    if (!(altitude_m > 0.0)) throw std::invalid_argument("orbit altitude must be positive");
    if (!(earth_radius_m > 0.0)) throw std::invalid_argument("earth radius must be positive");
    if (!(period_s > 0.0)) throw std::invalid_argument("orbital period must be positive");
    if (!std::isfinite(inclination_deg) || !std::isfinite(raan_deg) || !std::isfinite(argp0_deg))
        throw std::invalid_argument("orbital angles must be finite");
}

double argument_of_periapsis(const OrbitalElements& elements, double t_s) {
    if (!std::isfinite(t_s) || t_s < 0.0) throw std::invalid_argument("time must be finite and non-negative");
    const double frac = t_s / elements.period_s - std::floor(t_s / elements.period_s);
    double w = deg2rad(elements.argp0_deg) + 2.0 * kPi * frac;
    w = std::fmod(w, 2.0 * kPi);
    if (w < 0.0) w += 2.0 * kPi;
    return w;
}

Position3D propagate_satellite(const OrbitalElements& elements, double t_s) {
    elements.validate();
    const double w = argument_of_periapsis(elements, t_s);
    const double beta = deg2rad(elements.inclination_deg);
    const double raan = deg2rad(elements.raan_deg);
    const double l = elements.orbit_radius_m();

    const double cw = std::cos(w), sw = std::sin(w);
    const double cb = std::cos(beta);
    const double cr = std::cos(raan), sr = std::sin(raan);

    return Position3D{
        l * (cw * cr - sw * cb * sr),
        l * (cw * sr + sw * cb * cr),
        l * (sw * std::sin(beta)),
    };
}

Position3D local_to_ecef(const Anchor& anchor, double east_m, double north_m, double up_m) {
    const double lat = deg2rad(anchor.lat_deg);
    const double lon = deg2rad(anchor.lon_deg);
    const double cl = std::cos(lat), sl = std::sin(lat);
    const double co = std::cos(lon), so = std::sin(lon);
    const double r = anchor.earth_radius_m;

    // columns of the ENU->ECEF rotation
    const double ex = -so, ey = co, ez = 0.0;
    const double nx = -sl * co, ny = -sl * so, nz = cl;
    const double ux = cl * co, uy = cl * so, uz = sl;

    return Position3D{
        r * ux + east_m * ex + north_m * nx + up_m * ux,
        r * uy + east_m * ey + north_m * ny + up_m * uy,
        r * uz + east_m * ez + north_m * nz + up_m * uz,
    };
}

} // namespace marisec::geo
