#pragma once

#include <cstdint>
#include <random>

namespace marisec {

/// Splits one master seed into independent substreams. Every stochastic
/// component (env channels, each vessel, agent init, bandit, ...) gets its
/// own tagged stream so that consumption in one component never shifts the
/// draws of another.
inline std::uint64_t splitmix64(std::uint64_t& state) {
    state += 0x9E3779B97F4A7C15ULL;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

inline std::mt19937_64 make_stream(std::uint64_t master_seed, std::uint64_t tag) {
    std::uint64_t s = master_seed ^ (0xA5A5A5A5DEADBEEFULL * (tag + 1));
    std::seed_seq seq{static_cast<std::uint32_t>(splitmix64(s)),
                      static_cast<std::uint32_t>(splitmix64(s) >> 32),
                      static_cast<std::uint32_t>(splitmix64(s)),
                      static_cast<std::uint32_t>(splitmix64(s) >> 32)};
    return std::mt19937_64(seq);
}

// Stream tags. Keep stable across versions: checkpoints store raw engine
// state keyed by these roles.
enum class StreamTag : std::uint64_t {
    EnvReset = 1,
    Channel = 2,
    VesselAlice = 3,
    VesselEve = 4,
    AgentInit = 5,
    AgentAction = 6,
    ReplaySample = 7,
    Bandit = 8,
    Baseline = 9,
};

inline std::mt19937_64 make_stream(std::uint64_t master_seed, StreamTag tag) {
    return make_stream(master_seed, static_cast<std::uint64_t>(tag));
}

} // namespace marisec
