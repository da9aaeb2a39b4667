#pragma once

#include "marisec/env.hpp"

#include <random>
#include <span>
#include <vector>

namespace marisec::baselines {

/// No jamming, no movement: the satellite link is left on its own.
env::ActionVector non_uav_policy();

/// Uniform draw over the projected action box.
env::ActionVector random_policy(const env::EnvParams& params, std::mt19937_64& rng);

/// Per-slot theoretical secrecy-rate upper bound: Alice undisturbed, Eve
/// jammed at maximum power from the feasible UAV placement that maximizes
/// received jamming. The placement search runs on a grid over the C1-C3 box
/// plus the analytic closest feasible point, so the bound dominates every
/// constraint-respecting policy under the same channel draws.
double optimal_secrecy_bound(const env::EnvParams& params, const env::ChannelSnapshot& snap,
                             double grid_m = 5.0);

/// Bound applied to every slot of an episode trace.
std::vector<double> optimal_secrecy_oracle(const env::EnvParams& params,
                                           std::span<const env::StepInfo> trace, double grid_m = 5.0);

} // namespace marisec::baselines
