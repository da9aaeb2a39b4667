#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "marisec/geo.hpp"

#include <cmath>
#include <random>

using namespace marisec::geo;

namespace {
OrbitalElements table_elements() {
    OrbitalElements e;
    e.inclination_deg = 80;
    e.raan_deg = 70;
    e.argp0_deg = 0;
    e.altitude_m = 900e3;
    e.earth_radius_m = 6371e3;
    e.period_s = 6000;
    return e;
}
} // namespace

TEST_CASE("argument of periapsis progression") {
    OrbitalElements e = table_elements();
    CHECK(argument_of_periapsis(e, 0.0) == doctest::Approx(0.0));
    CHECK(argument_of_periapsis(e, 1500.0) == doctest::Approx(kPi / 2));
    CHECK(argument_of_periapsis(e, 6000.0) == doctest::Approx(0.0).epsilon(1e-12));
    e.argp0_deg = 45;
    CHECK(argument_of_periapsis(e, 0.0) == doctest::Approx(kPi / 4));
    CHECK_THROWS(argument_of_periapsis(e, -1.0));
    CHECK_THROWS(argument_of_periapsis(e, std::nan("")));
}

TEST_CASE("propagation collapses to axis-aligned positions") {
    OrbitalElements e = table_elements();
    e.raan_deg = 0;
    const double l = e.orbit_radius_m();

    auto p = propagate_satellite(e, 0.0);
    CHECK(p.x_m == doctest::Approx(l));
    CHECK(p.y_m == doctest::Approx(0.0));
    CHECK(p.z_m == doctest::Approx(0.0));

    e.inclination_deg = 90;
    e.argp0_deg = 90;
    p = propagate_satellite(e, 0.0);
    CHECK(p.x_m == doctest::Approx(0.0).epsilon(1e-9));
    CHECK(std::abs(p.y_m) < 1e-6);
    CHECK(p.z_m == doctest::Approx(l));
}

TEST_CASE("configured orbit radius") {
    auto p = propagate_satellite(table_elements(), 123.0);
    CHECK(p.norm() == doctest::Approx(7271000.0).epsilon(1e-12));
}

TEST_CASE("norm preservation and periodicity over random elements") {
    std::mt19937_64 rng(42);
    std::uniform_real_distribution<double> ang(0, 360), alt(400e3, 2000e3), t(0, 1e6);
    for (int i = 0; i < 2000; ++i) {
        OrbitalElements e;
        e.inclination_deg = ang(rng);
        e.raan_deg = ang(rng);
        e.argp0_deg = ang(rng);
        e.altitude_m = alt(rng);
        e.period_s = 6000;
        const double l = e.orbit_radius_m();
        const double tt = t(rng);
        auto p = propagate_satellite(e, tt);
        CHECK(std::abs(p.norm() / l - 1.0) < 1e-12);
        auto q = propagate_satellite(e, tt + e.period_s);
        CHECK(std::abs(p.x_m - q.x_m) < 1e-9 * l);
        CHECK(std::abs(p.y_m - q.y_m) < 1e-9 * l);
        CHECK(std::abs(p.z_m - q.z_m) < 1e-9 * l);
    }
}

TEST_CASE("equatorial orbit stays in the plane") {
    OrbitalElements e = table_elements();
    e.inclination_deg = 0;
    for (double tt : {0.0, 700.0, 2400.0, 5999.0}) {
        CHECK(propagate_satellite(e, tt).z_m == doctest::Approx(0.0));
    }
}

TEST_CASE("local frame anchoring") {
    Anchor a{0.0, 0.0, 6371e3};
    auto origin = local_to_ecef(a, 0, 0, 0);
    CHECK(origin.x_m == doctest::Approx(6371e3));
    CHECK(origin.y_m == doctest::Approx(0.0));
    CHECK(origin.z_m == doctest::Approx(0.0));

    // up adds radially, north adds +z, east adds +y at (0, 0)
    auto up = local_to_ecef(a, 0, 0, 100);
    CHECK(up.x_m == doctest::Approx(6371e3 + 100));
    auto north = local_to_ecef(a, 0, 50, 0);
    CHECK(north.z_m == doctest::Approx(50));
    auto east = local_to_ecef(a, 50, 0, 0);
    CHECK(east.y_m == doctest::Approx(50));

    // local displacements preserve Euclidean distance
    auto p1 = local_to_ecef(Anchor{12, 34, 6371e3}, 10, 20, 30);
    auto p2 = local_to_ecef(Anchor{12, 34, 6371e3}, -5, 7, 90);
    const double d = distance(p1, p2);
    CHECK(d == doctest::Approx(std::sqrt(15.0 * 15 + 13 * 13 + 60 * 60)));
}

TEST_CASE("invalid elements rejected") {
    OrbitalElements e = table_elements();
    e.altitude_m = -1;
    CHECK_THROWS(propagate_satellite(e, 0.0));
    e = table_elements();
    e.period_s = 0;
    CHECK_THROWS(propagate_satellite(e, 0.0));
}
