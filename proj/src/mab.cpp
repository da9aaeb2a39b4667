#include "marisec/mab.hpp"

#include <stdexcept>

namespace marisec::mab {

BanditState::BanditState(std::vector<double> tau1_arms, double epsilon)
    : arms_(std::move(tau1_arms)), epsilon_(epsilon) {
    if (arms_.empty()) throw std::invalid_argument("bandit needs at least one arm");
    if (!(epsilon >= 0.0 && epsilon <= 1.0)) throw std::invalid_argument("epsilon must be in [0,1]");
    for (double t : arms_) {
        if (!(t >= 0.0 && t <= 1.0)) throw std::invalid_argument("weights must be in [0,1]");
    }
    estimates_.assign(arms_.size(), 0.0);
    counts_.assign(arms_.size(), 0);
}

int BanditState::select_arm(std::mt19937_64& rng) const {
    if (arms_.empty()) throw std::logic_error("empty arm set");
    std::uniform_real_distribution<double> u01(0.0, 1.0);
    if (u01(rng) < epsilon_) {
        std::uniform_int_distribution<int> pick(0, int(arms_.size()) - 1);
        return pick(rng);
    }
    int best = 0;
    for (int i = 1; i < int(arms_.size()); ++i) {
        if (estimates_[size_t(i)] > estimates_[size_t(best)]) best = i;
    }
    return best;
}

void BanditState::update_arm(int arm, double reward) {
    if (arm < 0 || arm >= int(arms_.size())) throw std::out_of_range("arm index");
    counts_[size_t(arm)] += 1; // N(a) first, then the running mean
    const double old = estimates_[size_t(arm)];
    estimates_[size_t(arm)] = old + (reward - old) / double(counts_[size_t(arm)]);
}

void BanditState::restore(std::vector<double> estimates, std::vector<std::uint64_t> counts) {
    if (estimates.size() != arms_.size() || counts.size() != arms_.size())
        throw std::invalid_argument("bandit state size mismatch");
    estimates_ = std::move(estimates);
    counts_ = std::move(counts);
}

BanditState BanditState::make_default(int arm_count, double epsilon) {
    if (arm_count < 1) throw std::invalid_argument("bandit needs at least one arm");
    std::vector<double> arms;
    for (int i = 1; i <= arm_count; ++i) arms.push_back(double(i) / double(arm_count + 1));
    return BanditState(std::move(arms), epsilon);
}

} // namespace marisec::mab
