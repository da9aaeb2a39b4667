#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "marisec/mab.hpp"
#include "marisec/rng.hpp"

#include <algorithm>
#include <vector>

using namespace marisec::mab;

TEST_CASE("default grid spans the unit interval") {
    auto b = BanditState::make_default(9, 0.1);
    CHECK(b.arm_count() == 9);
    CHECK(b.tau1(0) == doctest::Approx(0.1));
    CHECK(b.tau1(8) == doctest::Approx(0.9));
    CHECK_THROWS(BanditState::make_default(0, 0.1));
    CHECK_THROWS(BanditState({}, 0.1));
}

TEST_CASE("pure exploitation picks the argmax, ties to lowest index") {
    auto b = BanditState::make_default(3, 0.0);
    b.restore({1.0, 3.0, 2.0}, {1, 1, 1});
    auto rng = marisec::make_stream(1, marisec::StreamTag::Bandit);
    for (int i = 0; i < 20; ++i) CHECK(b.select_arm(rng) == 1);

    b.restore({2.0, 2.0, 2.0}, {1, 1, 1});
    for (int i = 0; i < 20; ++i) CHECK(b.select_arm(rng) == 0);
}

TEST_CASE("full exploration is uniform") {
    auto b = BanditState::make_default(4, 1.0);
    auto rng = marisec::make_stream(3, marisec::StreamTag::Bandit);
    std::vector<int> counts(4, 0);
    const int n = 100000;
    for (int i = 0; i < n; ++i) counts[std::size_t(b.select_arm(rng))]++;
    const double expect = n / 4.0;
    const double sigma = std::sqrt(n * 0.25 * 0.75);
    for (int c : counts) CHECK(std::abs(c - expect) < 3.0 * sigma);
}

TEST_CASE("incremental mean matches the reward history") {
    auto b = BanditState::make_default(2, 0.0);
    b.update_arm(0, 5.0);
    CHECK(b.estimate(0) == doctest::Approx(5.0));
    CHECK(b.pulls(0) == 1);

    auto c = BanditState::make_default(2, 0.0);
    for (double r : {2.0, 4.0, 6.0}) c.update_arm(1, r);
    CHECK(c.estimate(1) == doctest::Approx(4.0));

    // one explicit step of the running-mean rule
    auto d = BanditState::make_default(2, 0.0);
    d.restore({4.0, 0.0}, {1, 0});
    d.update_arm(0, 6.0);
    CHECK(d.pulls(0) == 2);
    CHECK(d.estimate(0) == doctest::Approx(5.0));

    CHECK_THROWS(d.update_arm(5, 1.0));
}

TEST_CASE("incremental estimate equals the batch mean") {
    auto rng = marisec::make_stream(8, marisec::StreamTag::Bandit);
    std::normal_distribution<double> n01(0.0, 1.0);
    auto b = BanditState::make_default(1, 0.0);
    double sum = 0.0;
    for (int i = 1; i <= 5000; ++i) {
        const double r = 3.0 + n01(rng);
        sum += r;
        b.update_arm(0, r);
        CHECK(std::abs(b.estimate(0) - sum / i) < 1e-12 * std::max(1.0, std::abs(sum / i)));
    }
}

TEST_CASE("epsilon-greedy locks onto the better arm") {
    // two arms, means 1.0 and 0.0, unit noise; single-seed smoke version of
    // the acceptance experiment
    auto rng = marisec::make_stream(21, marisec::StreamTag::Bandit);
    std::normal_distribution<double> n01(0.0, 1.0);
    auto b = BanditState::make_default(2, 0.1);
    int best_late = 0;
    for (int pull = 0; pull < 5000; ++pull) {
        const int arm = b.select_arm(rng);
        const double mean = arm == 0 ? 1.0 : 0.0;
        b.update_arm(arm, mean + n01(rng));
        if (pull >= 4000 && arm == 0) ++best_late;
    }
    CHECK(best_late >= 800);
}
