#pragma once

#include <random>
#include <vector>

namespace marisec::mab {

/// Epsilon-greedy bandit over a discrete grid of secrecy-vs-energy weights.
/// Arm a carries tau1 = arms[a]; tau2 is the complement. Value estimates are
/// incremental means of the rewards fed back for that arm.
class BanditState {
public:
    BanditState() = default;
    BanditState(std::vector<double> tau1_arms, double epsilon);

    /// Uniform random arm with probability epsilon, otherwise the argmax of
    /// the value estimates with ties broken by lowest index.
    int select_arm(std::mt19937_64& rng) const;

    /// Incremental-mean update; the pull count is incremented first, so the
    /// estimate equals the arithmetic mean of all rewards seen by the arm.
    void update_arm(int arm, double reward);

    double tau1(int arm) const { return arms_.at(size_t(arm)); }
    int arm_count() const { return int(arms_.size()); }
    double estimate(int arm) const { return estimates_.at(size_t(arm)); }
    std::uint64_t pulls(int arm) const { return counts_.at(size_t(arm)); }
    double epsilon() const { return epsilon_; }

    const std::vector<double>& arms() const { return arms_; }
    const std::vector<double>& estimates() const { return estimates_; }
    const std::vector<std::uint64_t>& counts() const { return counts_; }
    void restore(std::vector<double> estimates, std::vector<std::uint64_t> counts);

    /// Default nine-arm grid tau1 in {0.1, ..., 0.9}.
    static BanditState make_default(int arm_count, double epsilon);

private:
    std::vector<double> arms_;
    std::vector<double> estimates_;
    std::vector<std::uint64_t> counts_;
    double epsilon_ = 0.1;
};

} // namespace marisec::mab
