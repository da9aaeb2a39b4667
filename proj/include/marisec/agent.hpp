#pragma once

#include "marisec/env.hpp"
#include "marisec/mab.hpp"
#include "marisec/nn.hpp"
#include "marisec/rng.hpp"

#include <cstdint>
#include <deque>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace marisec::agent {

using Scalar = float;
using MatX = nn::Mat<Scalar>;
using VecX = nn::Vec<Scalar>;

struct AgentSettings {
    bool use_transformer = true;
    int d_model = 64;
    int heads = 8;
    int ffn_mult = 8;
    int window = 8;
    int enc_layers = 1;
    double varpi = 10000.0;

    int hidden = 128;
    double gamma = 0.9;
    double kappa = 0.005;
    double alpha = 0.2;
    double lr = 0.003;
    double lr_enc = -1.0; // <= 0 means: use lr
    int batch = 128;
    int replay_capacity = 100000;
    int warmup_steps = 1000;
    int grad_every = 1;
    int eval_every = 80;

    bool mab_enabled = true;
    int mab_arms = 9;
    double mab_epsilon = 0.1;
    bool mab_per_step = false;
    double mab_secrecy_scale = 10.0;
    double mab_energy_scale = 1.0;
    double fixed_tau1 = 0.5;

    std::int64_t total_steps = 200000;
    std::uint64_t seed = 1;
};

/// One replayed step plus the completed-token history needed to rebuild the
/// encoder windows for both endpoints of the transition.
struct Transition {
    std::vector<Scalar> hist;  // (window-1) tokens of (state, action), flattened
    std::vector<int> hist_pos; // slot index per history token
    VecX s;
    VecX a; // squashed action in [-1, 1]^4
    Scalar r1 = 0, r2 = 0;
    VecX s_next;
    bool done = false;
    int t_slot = 0;
};

class ReplayBuffer {
public:
    ReplayBuffer(int capacity, std::uint64_t seed)
        : capacity_(capacity), rng_(make_stream(seed, StreamTag::ReplaySample)) {}

    void push(Transition t);
    std::size_t size() const { return data_.size(); }
    const Transition& at(std::size_t i) const { return data_[i]; }

    /// Uniform without replacement within the batch; deterministic per seed.
    std::vector<std::size_t> sample_indices(int batch);

    std::mt19937_64& rng() { return rng_; }

private:
    int capacity_;
    std::vector<Transition> data_;
    std::size_t next_ = 0;
    std::mt19937_64 rng_;
};

/// Bootstrap target for the soft Q regression; done transitions drop the
/// bootstrap term.
inline double q_target(double reward, double gamma, double v_next, bool done) {
    return reward + (done ? 0.0 : gamma * v_next);
}

/// Exponential tracking update for target parameters.
template <class S>
void soft_update(std::vector<nn::Param<S>*> target, std::vector<nn::Param<S>*> main, double kappa) {
    if (!(kappa > 0.0 && kappa <= 1.0)) throw std::invalid_argument("soft-update rate must be in (0,1]");
    if (target.size() != main.size()) throw std::invalid_argument("parameter list mismatch");
    for (std::size_t i = 0; i < target.size(); ++i) {
        target[i]->value = S(kappa) * main[i]->value + S(1.0 - kappa) * target[i]->value;
    }
}

struct LossReport {
    double q1 = 0, q2 = 0, v1 = 0, v2 = 0, pi = 0;
    bool finite() const;
};

struct EpisodeStats {
    double secrecy_sum = 0;
    double energy_sum = 0;
    double r1_sum = 0;
    double r2_sum = 0;
    int c6_violations = 0;
    int c7_violations = 0;
    int steps = 0;
};

struct MetricsRow {
    std::int64_t step = 0;
    std::int64_t episode = 0;
    double tau1 = 0.5;
    LossReport losses;
    double ep_secrecy_mean = 0;
    double ep_energy_mean = 0;
    int c6_violations = 0;
    int c7_violations = 0;
};

using MetricsSink = std::function<void(const MetricsRow&)>;

/// Raised when a training update produces a non-finite loss; the harness
/// checkpoints the run before exiting.
class TrainingFault : public std::runtime_error {
public:
    TrainingFault(const std::string& what, std::int64_t step) : std::runtime_error(what), step(step) {}
    std::int64_t step;
};

/// Multi-objective soft actor-critic with per-objective critics and value
/// networks, an optional window-encoder front end, and bandit-selected
/// scalarization weights.
class Agent {
public:
    Agent(const env::EnvParams& env_params, const AgentSettings& settings);

    // optimizers hold pointers into the network members
    Agent(const Agent&) = delete;
    Agent& operator=(const Agent&) = delete;
    Agent(Agent&&) = delete;
    Agent& operator=(Agent&&) = delete;

    // --- acting ---
    void begin_episode(const Eigen::VectorXd& obs0);
    /// Samples a squashed-Gaussian action in [-1,1]^4 (mean action when
    /// deterministic). Returns the action and its log-probability.
    std::pair<VecX, double> act(const Eigen::VectorXd& obs, int t_slot, bool deterministic);
    /// Completes the current slot's token after the action executed.
    void observe(const Eigen::VectorXd& obs, const VecX& u, int t_slot);
    env::ActionVector to_env_action(const VecX& u) const;

    // --- training ---
    /// Runs the full training loop against the environment. Metrics rows are
    /// emitted every eval_every steps. A resumed run continues the restored
    /// streams instead of re-seeding the environment.
    void train(env::Environment& env, const MetricsSink& sink, bool resume = false);
    /// One gradient step on a sampled batch under the given weights.
    LossReport update(double tau1);

    ReplayBuffer& buffer() { return *buffer_; }
    mab::BanditState& bandit() { return bandit_; }
    const AgentSettings& settings() const { return settings_; }
    std::int64_t steps_done() const { return steps_done_; }
    std::int64_t episodes_done() const { return episodes_done_; }
    double current_tau1() const { return tau1_; }

    // --- persistence (used by the checkpoint container) ---
    std::vector<std::pair<std::string, nn::Param<Scalar>*>> named_params();
    std::vector<std::pair<std::string, nn::Adam<Scalar>*>> named_optimizers();
    std::string rng_state() const;
    void restore_rng(const std::string& text);
    void set_counters(std::int64_t steps, std::int64_t episodes);

    // exposed for the gradient-contract tests
    nn::WindowEncoder<Scalar>& encoder() { return enc_; }
    nn::Mlp<Scalar>& policy_net() { return policy_; }
    nn::Mlp<Scalar>& q1_net() { return q1_; }
    nn::Mlp<Scalar>& q2_net() { return q2_; }

    int feature_dim() const { return feat_dim_; }

    /// Enhanced features for a batch of windows (transformer path) or the raw
    /// normalized states (ablation path). tokens layout: (B*window) x token_dim.
    MatX encode_batch(const MatX& tokens, const std::vector<int>& positions);

private:
    friend struct AgentTestAccess;

    struct PolicySample {
        MatX u;       // squashed actions
        VecX logp;    // per row
        MatX mu, logstd, eps, std;
    };
    PolicySample sample_policy(const MatX& features, bool deterministic, std::mt19937_64* rng);
    void policy_backward(const PolicySample& ps, const MatX& dL_du, const VecX& dL_dlogp);

    MatX features_for(const Eigen::VectorXd& obs, int t_slot);
    void build_windows(const std::vector<std::size_t>& idx, bool next, MatX& tokens,
                       std::vector<int>& positions) const;
    MatX batch_features(const std::vector<std::size_t>& idx, bool next);

    // window token buffers must outlive the encoder's backward pass
    MatX win_tokens_s_, win_tokens_next_, act_tokens_;
    std::vector<int> win_pos_s_, win_pos_next_, act_pos_;

    env::EnvParams env_params_;
    AgentSettings settings_;
    int token_dim_ = 0;
    int feat_dim_ = 0;

    nn::WindowEncoder<Scalar> enc_;
    nn::Mlp<Scalar> policy_, q1_, q2_, v1_, v2_, v1_target_, v2_target_;
    nn::Adam<Scalar> opt_enc_, opt_policy_, opt_q1_, opt_q2_, opt_v1_, opt_v2_;

    std::unique_ptr<ReplayBuffer> buffer_;
    mab::BanditState bandit_;
    std::mt19937_64 action_rng_;
    std::mt19937_64 bandit_rng_;

    // rolling completed-token history of the current episode
    std::deque<std::pair<std::vector<Scalar>, int>> episode_hist_;
    std::vector<Scalar> first_token_;
    int first_token_pos_ = 0;

    std::int64_t steps_done_ = 0;
    std::int64_t episodes_done_ = 0;
    double tau1_ = 0.5;
    int current_arm_ = -1;
};

} // namespace marisec::agent
