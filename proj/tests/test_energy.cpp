#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "marisec/energy.hpp"

#include <cmath>
#include <random>
#include <vector>

using namespace marisec::energy;

TEST_CASE("hover collapses to induced plus blade power") {
    RotorcraftParams p;
    CHECK(propulsion_power(p, 0.0) == doctest::Approx(168.49).epsilon(1e-12));

    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(0.5, 300.0);
    for (int i = 0; i < 100; ++i) {
        RotorcraftParams q;
        q.p_induced_w = u(rng);
        q.p_blade_w = u(rng);
        q.v_induced_hover_ms = u(rng) * 0.05 + 1.0;
        q.v_tip_ms = u(rng) + 60.0;
        CHECK(propulsion_power(q, 0.0) == doctest::Approx(q.p_induced_w + q.p_blade_w).epsilon(1e-14));
    }
}

TEST_CASE("parasite term dominates at speed and scales cubically") {
    RotorcraftParams p;
    auto induced = [&](double v) {
        const double x = v * v / (2.0 * p.v_induced_hover_ms * p.v_induced_hover_ms);
        return p.p_induced_w * std::sqrt(std::sqrt(1.0 + x * x) - x);
    };
    auto blade = [&](double v) {
        return p.p_blade_w * (1.0 + 3.0 * v * v / (p.v_tip_ms * p.v_tip_ms));
    };
    const double para30 = propulsion_power(p, 30.0) - induced(30.0) - blade(30.0);
    const double para60 = propulsion_power(p, 60.0) - induced(60.0) - blade(60.0);
    CHECK(para60 / para30 == doctest::Approx(8.0).epsilon(1e-9));
    CHECK(para30 == doctest::Approx(0.5 * p.drag_ratio * p.rotor_solidity * p.rotor_area_m2 *
                                    p.air_density * 27000.0));
}

TEST_CASE("power slope vanishes at hover") {
    RotorcraftParams p;
    const double h = 1e-5;
    const double fd = (propulsion_power(p, h) - propulsion_power(p, 0.0)) / h;
    CHECK(std::abs(fd) < 1e-3);
    CHECK_THROWS(propulsion_power(p, -1.0));
}

TEST_CASE("hover trajectory energy") {
    RotorcraftParams p;
    std::vector<PathPoint> path(40);
    for (int i = 0; i < 40; ++i) path[std::size_t(i)] = PathPoint{0, 0, 60, 0, 0};
    CHECK(trajectory_energy(p, path, 1.0) == doctest::Approx(40.0 * 168.49));
}

TEST_CASE("climb adds the potential term") {
    RotorcraftParams p; // mass 2 kg, g 9.8
    std::vector<PathPoint> path;
    path.push_back(PathPoint{0, 0, 50, 0, 0});
    for (int i = 1; i <= 20; ++i) path.push_back(PathPoint{0, 0, 50.0 + i, 0, 1});
    path.push_back(PathPoint{0, 0, 70, 0, 0}); // back at rest
    const double e = trajectory_energy(p, path, 1.0);
    const double propulsion = 168.49 * double(path.size());
    CHECK(e - propulsion == doctest::Approx(2.0 * 9.8 * 20.0));
}

TEST_CASE("steady level flight is pure propulsion") {
    RotorcraftParams p;
    std::vector<PathPoint> path(25);
    for (int i = 0; i < 25; ++i) path[std::size_t(i)] = PathPoint{double(i) * 12, 0, 55, 12, 0};
    CHECK(trajectory_energy(p, path, 1.0) == doctest::Approx(25.0 * propulsion_power(p, 12.0)));
}

TEST_CASE("energy is additive over matched concatenation") {
    RotorcraftParams p;
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> u(0.0, 18.0);
    std::vector<PathPoint> path;
    double z = 55;
    for (int i = 0; i < 30; ++i) {
        z += u(rng) * 0.1 - 0.9;
        path.push_back(PathPoint{u(rng), u(rng), z, u(rng), u(rng) * 0.2});
    }
    const double whole = trajectory_energy(p, path, 1.0);
    // split anywhere; the shared boundary point closes both pieces
    for (std::size_t cut : {5ul, 12ul, 22ul}) {
        std::vector<PathPoint> a(path.begin(), path.begin() + long(cut) + 1);
        std::vector<PathPoint> b(path.begin() + long(cut), path.end());
        const double sum = trajectory_energy(p, a, 1.0) + trajectory_energy(p, b, 1.0);
        // the boundary slot's propulsion is counted twice by construction
        const double overlap = propulsion_power(p, path[cut].v_h_ms) * 1.0;
        CHECK(sum - overlap == doctest::Approx(whole).epsilon(1e-12));
    }
}

TEST_CASE("per-slot propulsion has a hover floor") {
    RotorcraftParams p;
    for (double v : {0.0, 1.0, 4.03, 10.0, 25.0, 60.0}) {
        CHECK(propulsion_power(p, v) * 1.0 > 0.0);
    }
    double lo = 1e18;
    for (double v = 0.0; v <= 30.0; v += 0.25) lo = std::min(lo, propulsion_power(p, v));
    CHECK(lo > 0.0);
}

TEST_CASE("validation rejects non-positive parameters and empty paths") {
    RotorcraftParams p;
    p.mass_kg = 0;
    CHECK_THROWS(p.validate());
    RotorcraftParams ok;
    std::vector<PathPoint> empty;
    CHECK_THROWS(trajectory_energy(ok, empty, 1.0));
    std::vector<PathPoint> one{PathPoint{}};
    CHECK_THROWS(trajectory_energy(ok, one, 0.0));
}
