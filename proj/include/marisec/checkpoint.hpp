#pragma once

#include "marisec/agent.hpp"
#include "marisec/env.hpp"

#include <cstdint>
#include <string>

namespace marisec::harness {

struct CheckpointMeta {
    std::uint64_t config_hash = 0;
    std::uint64_t seed = 0;
    std::int64_t step = 0;
    std::int64_t episode = 0;
};

/// Versioned binary container with every parameter array, optimizer state,
/// bandit state and rng stream. Written atomically (temp file + rename).
void save_checkpoint(const std::string& path, const CheckpointMeta& meta, agent::Agent& agent,
                     const env::Environment& env);

/// Reads the header only.
CheckpointMeta peek_checkpoint(const std::string& path);

/// Restores everything into an agent/environment built from the same config.
CheckpointMeta load_checkpoint(const std::string& path, agent::Agent& agent, env::Environment& env);

} // namespace marisec::harness
