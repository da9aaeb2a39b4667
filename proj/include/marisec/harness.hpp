#pragma once

#include "marisec/agent.hpp"
#include "marisec/config.hpp"
#include "marisec/env.hpp"

#include <optional>
#include <string>
#include <vector>

namespace marisec::harness {

/// Typed view of the full run configuration. The schema in load() is the
/// single authority for key names and defaults; unknown keys are rejected.
struct RunConfig {
    Config raw;
    std::uint64_t seed = 1;
    std::int64_t steps = 200000;
    std::string out_dir = "out";
    std::int64_t checkpoint_every = 50000;
    double oracle_grid_m = 5.0;

    env::EnvParams env_params;
    agent::AgentSettings agent_settings;

    std::uint64_t config_hash = 0;
    std::string canonical_text;

    static RunConfig load(const Config& cfg);
};

/// Raised for faults that map to exit code 2.
class RuntimeFault : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct TrainResult {
    std::string metrics_path;
    std::string checkpoint_path;
    std::int64_t steps = 0;
};

TrainResult run_train(const RunConfig& rc, const std::string& resume_path = "");

struct EvalEpisode {
    double secrecy_mean = 0; // f1 per episode
    double energy_mean = 0;  // f2 per episode (J per slot)
    double oracle_mean = 0;
    double oracle_ratio = 0;
    int c6_violations = 0;
    int c7_violations = 0;
    int slots = 0;
};

struct EvalSummary {
    std::string policy;
    int episodes = 0;
    double secrecy_mean = 0, secrecy_std = 0;
    double energy_mean = 0, energy_std = 0;
    double oracle_ratio_mean = 0;
    double c6_rate = 0, c7_rate = 0;
    std::vector<EvalEpisode> per_episode;

    std::string table_row() const;
    static std::string table_header();
};

/// Deterministic-policy evaluation over shared-seed episodes.
/// policy: transsac | sac | nonuav | random. The agent policies need a
/// checkpoint; its config hash must match unless verify_hash is off (the
/// constraint-sweep axes legitimately alter the config).
EvalSummary run_eval(const RunConfig& rc, const std::string& policy, const std::string& checkpoint_path,
                     int episodes, std::uint64_t eval_seed, bool verify_hash = true,
                     const std::string& trace_csv_path = "");

struct SweepPoint {
    double axis_value = 0;
    EvalSummary summary;
};

struct SweepResult {
    std::string axis;
    std::vector<SweepPoint> points;
    std::string csv_path;
};

/// Trains (or evaluates an existing checkpoint) per grid point with shared
/// seeds and writes the per-point objective values.
SweepResult run_sweep(const RunConfig& rc, const std::string& axis, const std::vector<double>& grid,
                      bool train, const std::string& checkpoint_path, int episodes, int jobs);

/// Runs scripted-policy episodes and dumps per-step environment and vessel
/// trajectory traces.
std::vector<std::string> run_sim(const RunConfig& rc, const std::string& policy, int episodes);

/// Renders figures for the given metrics/sweep/trace CSVs.
std::vector<std::string> run_plot(const std::vector<std::string>& csv_paths, const std::string& out_dir);

/// One-sided sign test: P[Binomial(n, 1/2) >= wins].
double sign_test_p(int wins, int n);

std::string out_path(const RunConfig& rc, const std::string& filename);

} // namespace marisec::harness
