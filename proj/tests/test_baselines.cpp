#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "marisec/baselines.hpp"
#include "marisec/harness.hpp"

#include <cmath>

using namespace marisec;

namespace {
env::EnvParams default_params() { return harness::RunConfig::load(Config{}).env_params; }
} // namespace

TEST_CASE("non-UAV policy is the zero action") {
    auto a = baselines::non_uav_policy();
    CHECK(a.dx_m == 0.0);
    CHECK(a.dy_m == 0.0);
    CHECK(a.dz_m == 0.0);
    CHECK(a.p_uav_w == 0.0);
}

TEST_CASE("random policy respects the projected boxes and reproduces") {
    auto p = default_params();
    auto rng1 = make_stream(3, StreamTag::Baseline);
    auto rng2 = make_stream(3, StreamTag::Baseline);
    for (int i = 0; i < 2000; ++i) {
        auto a = baselines::random_policy(p, rng1);
        auto b = baselines::random_policy(p, rng2);
        CHECK(a.dx_m == b.dx_m);
        CHECK(a.p_uav_w == b.p_uav_w);
        CHECK(std::hypot(a.dx_m, a.dy_m) <= p.v_h_max_ms * p.slot_s + 1e-12);
        CHECK(std::abs(a.dz_m) <= p.v_v_max_ms * p.slot_s);
        CHECK(a.p_uav_w >= p.p_min_w);
        CHECK(a.p_uav_w <= p.p_max_w);
    }
}

TEST_CASE("oracle dominates random policies slot by slot") {
    auto p = default_params();
    env::Environment e(p, 1);
    auto rng = make_stream(17, StreamTag::Baseline);
    for (int episode = 0; episode < 12; ++episode) {
        e.reset(100 + std::uint64_t(episode));
        std::vector<env::StepInfo> trace;
        std::vector<double> achieved;
        bool done = false;
        while (!done) {
            auto [st, r, d, info] = e.step(baselines::random_policy(p, rng));
            trace.push_back(info);
            achieved.push_back(info.r_sec);
            done = d;
        }
        auto bounds = baselines::optimal_secrecy_oracle(p, trace, 5.0);
        REQUIRE(bounds.size() == achieved.size());
        for (std::size_t i = 0; i < bounds.size(); ++i) {
            CHECK(achieved[i] <= bounds[i] + 1e-9);
            CHECK(bounds[i] >= 0.0);
        }
    }
}

TEST_CASE("oracle ignores reward shaping entirely") {
    auto p = default_params();
    env::Environment e(p, 2);
    e.reset(55);
    std::vector<env::StepInfo> trace;
    for (int i = 0; i < 10; ++i) trace.push_back(std::get<3>(e.step(env::ActionVector{})));

    auto p2 = p;
    p2.mu1 = 17.0;
    p2.mu2 = 0.4;
    p2.rho1 = p2.rho2 = 1.0;
    p2.w_pen = 0.01;
    auto b1 = baselines::optimal_secrecy_oracle(p, trace, 10.0);
    auto b2 = baselines::optimal_secrecy_oracle(p2, trace, 10.0);
    CHECK(b1 == b2);
}

TEST_CASE("oracle degenerates to the undisturbed link when jamming is disabled") {
    auto p = default_params();
    p.fading = false;
    env::Environment e(p, 3);
    e.reset(9);
    std::vector<env::StepInfo> trace;
    for (int i = 0; i < 5; ++i) trace.push_back(std::get<3>(e.step(baselines::non_uav_policy())));

    auto pz = p;
    pz.p_max_w = 0.0; // no jamming power available anywhere
    auto bounds = baselines::optimal_secrecy_oracle(pz, trace, 5.0);
    for (std::size_t i = 0; i < trace.size(); ++i) {
        CHECK(bounds[i] == doctest::Approx(trace[i].r_sec).epsilon(1e-12));
    }
}

TEST_CASE("finer grids only tighten the bound") {
    auto p = default_params();
    env::Environment e(p, 4);
    e.reset(123);
    std::vector<env::StepInfo> trace;
    for (int i = 0; i < 8; ++i) trace.push_back(std::get<3>(e.step(env::ActionVector{})));
    auto coarse = baselines::optimal_secrecy_oracle(p, trace, 20.0);
    auto fine = baselines::optimal_secrecy_oracle(p, trace, 4.0);
    for (std::size_t i = 0; i < trace.size(); ++i) {
        // both include the analytic closest point, so they agree
        CHECK(fine[i] == doctest::Approx(coarse[i]).epsilon(1e-12));
    }
    std::vector<env::StepInfo> empty;
    CHECK_THROWS(baselines::optimal_secrecy_oracle(p, empty, 5.0));
}
