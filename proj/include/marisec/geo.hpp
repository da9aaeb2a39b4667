#pragma once

#include <cmath>

namespace marisec::geo {

inline constexpr double kPi = 3.14159265358979323846;

inline double deg2rad(double d) { return d * kPi / 180.0; }
inline double rad2deg(double r) { return r * 180.0 / kPi; }

/// Cartesian position in the shared Earth-centered frame (meters).
struct Position3D {
    double x_m = 0.0;
    double y_m = 0.0;
    double z_m = 0.0;

    double norm() const { return std::sqrt(x_m * x_m + y_m * y_m + z_m * z_m); }
};

inline double distance(const Position3D& a, const Position3D& b) {
    const double dx = a.x_m - b.x_m, dy = a.y_m - b.y_m, dz = a.z_m - b.z_m;
    return std::sqrt(dx * dx + dy * dy + dz * dz);
}

/// Circular-orbit Keplerian description: eccentricity and true anomaly are
/// identically zero, the semi-major axis equals the orbital radius.
struct OrbitalElements {
    double inclination_deg = 80.0;
    double raan_deg = 70.0;
    double argp0_deg = 0.0;
    double altitude_m = 900e3;
    double earth_radius_m = 6371e3;
    double period_s = 6000.0;

    double orbit_radius_m() const { return altitude_m + earth_radius_m; }
    void validate() const;
};

/// Argument of periapsis advanced linearly from its epoch value,
/// wrapped to [0, 2*pi). Periodic in t with the orbital period.
double argument_of_periapsis(const OrbitalElements& elements, double t_s);

/// Satellite position at time t; the returned vector has norm equal to the
/// orbital radius up to floating rounding.
Position3D propagate_satellite(const OrbitalElements& elements, double t_s);

/// Reference point on the spherical Earth surface that anchors the local
/// east/north/up frame shared by vessels and the UAV.
struct Anchor {
    double lat_deg = 0.0;
    double lon_deg = 70.0;
    double earth_radius_m = 6371e3;
};

/// Maps local (east, north, up) coordinates into the Earth-centered frame.
Position3D local_to_ecef(const Anchor& anchor, double east_m, double north_m, double up_m);

} // namespace marisec::geo
