#include "marisec/agent.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

namespace marisec::agent {

bool LossReport::finite() const {
    return std::isfinite(q1) && std::isfinite(q2) && std::isfinite(v1) && std::isfinite(v2) &&
           std::isfinite(pi);
}

// ---------------------------------------------------------------------------
// replay buffer
// ---------------------------------------------------------------------------

void ReplayBuffer::push(Transition t) {
    if (data_.size() < std::size_t(capacity_)) {
        data_.push_back(std::move(t));
    } else {
        data_[next_] = std::move(t); // FIFO eviction
        next_ = (next_ + 1) % std::size_t(capacity_);
    }
}

std::vector<std::size_t> ReplayBuffer::sample_indices(int batch) {
    if (std::size_t(batch) > data_.size()) throw std::logic_error("batch larger than buffer");
    // Floyd's sampling: distinct indices, uniform over the buffer
    std::set<std::size_t> chosen;
    const std::size_t n = data_.size();
    for (std::size_t i = n - std::size_t(batch); i < n; ++i) {
        std::uniform_int_distribution<std::size_t> pick(0, i);
        std::size_t j = pick(rng_);
        if (!chosen.insert(j).second) chosen.insert(i);
    }
    return {chosen.begin(), chosen.end()};
}

// ---------------------------------------------------------------------------
// agent
// ---------------------------------------------------------------------------

Agent::Agent(const env::EnvParams& env_params, const AgentSettings& settings)
    : env_params_(env_params),
      settings_(settings),
      bandit_(mab::BanditState::make_default(settings.mab_arms, settings.mab_epsilon)) {
    token_dim_ = env::kObsDim + env::kActDim;
    feat_dim_ = settings_.use_transformer ? settings_.d_model : env::kObsDim;

    if (settings_.use_transformer) {
        nn::WindowEncoder<Scalar>::Settings es;
        es.token_dim = token_dim_;
        es.d_model = settings_.d_model;
        es.heads = settings_.heads;
        es.ffn_mult = settings_.ffn_mult;
        es.window = settings_.window;
        es.layers = settings_.enc_layers;
        es.varpi = settings_.varpi;
        es.max_position = env_params_.slots + 2;
        enc_ = nn::WindowEncoder<Scalar>(es);
    }

    const std::vector<Eigen::Index> hidden{settings_.hidden, settings_.hidden};
    policy_ = nn::Mlp<Scalar>("pi", feat_dim_, hidden, 2 * env::kActDim);
    q1_ = nn::Mlp<Scalar>("q1", feat_dim_ + env::kActDim, hidden, 1);
    q2_ = nn::Mlp<Scalar>("q2", feat_dim_ + env::kActDim, hidden, 1);
    v1_ = nn::Mlp<Scalar>("v1", feat_dim_, hidden, 1);
    v2_ = nn::Mlp<Scalar>("v2", feat_dim_, hidden, 1);
    v1_target_ = nn::Mlp<Scalar>("v1t", feat_dim_, hidden, 1);
    v2_target_ = nn::Mlp<Scalar>("v2t", feat_dim_, hidden, 1);

    auto init_rng = make_stream(settings_.seed, StreamTag::AgentInit);
    if (settings_.use_transformer) enc_.init(init_rng);
    policy_.init(init_rng);
    q1_.init(init_rng);
    q2_.init(init_rng);
    v1_.init(init_rng);
    v2_.init(init_rng);
    soft_update(v1_target_.params(), v1_.params(), 1.0);
    soft_update(v2_target_.params(), v2_.params(), 1.0);

    const double lr_enc = settings_.lr_enc > 0.0 ? settings_.lr_enc : settings_.lr;
    if (settings_.use_transformer) opt_enc_ = nn::Adam<Scalar>(enc_.params(), lr_enc);
    opt_policy_ = nn::Adam<Scalar>(policy_.params(), settings_.lr);
    opt_q1_ = nn::Adam<Scalar>(q1_.params(), settings_.lr);
    opt_q2_ = nn::Adam<Scalar>(q2_.params(), settings_.lr);
    opt_v1_ = nn::Adam<Scalar>(v1_.params(), settings_.lr);
    opt_v2_ = nn::Adam<Scalar>(v2_.params(), settings_.lr);

    buffer_ = std::make_unique<ReplayBuffer>(settings_.replay_capacity, settings_.seed);
    action_rng_ = make_stream(settings_.seed, StreamTag::AgentAction);
    bandit_rng_ = make_stream(settings_.seed, StreamTag::Bandit);
    tau1_ = settings_.fixed_tau1;
}

void Agent::begin_episode(const Eigen::VectorXd& obs0) {
    episode_hist_.clear();
    first_token_.assign(std::size_t(token_dim_), Scalar(0));
    for (int i = 0; i < env::kObsDim; ++i) first_token_[std::size_t(i)] = Scalar(obs0(i));
    first_token_pos_ = 0;
}

env::ActionVector Agent::to_env_action(const VecX& u) const {
    env::ActionVector a;
    a.dx_m = double(u(0)) * env_params_.v_h_max_ms * env_params_.slot_s;
    a.dy_m = double(u(1)) * env_params_.v_h_max_ms * env_params_.slot_s;
    a.dz_m = double(u(2)) * env_params_.v_v_max_ms * env_params_.slot_s;
    a.p_uav_w = env_params_.p_min_w +
                (double(u(3)) + 1.0) * 0.5 * (env_params_.p_max_w - env_params_.p_min_w);
    return a;
}

MatX Agent::features_for(const Eigen::VectorXd& obs, int t_slot) {
    if (!settings_.use_transformer) {
        MatX f(1, env::kObsDim);
        for (int i = 0; i < env::kObsDim; ++i) f(0, i) = Scalar(obs(i));
        return f;
    }
    const int w = settings_.window;
    act_tokens_.resize(w, token_dim_);
    act_pos_.assign(std::size_t(w), 0);
    const int pads = w - 1 - int(episode_hist_.size());
    int row = 0;
    for (int i = 0; i < pads; ++i, ++row) {
        for (int c = 0; c < token_dim_; ++c) act_tokens_(row, c) = first_token_[std::size_t(c)];
        act_pos_[std::size_t(row)] = first_token_pos_;
    }
    for (const auto& [tok, pos] : episode_hist_) {
        for (int c = 0; c < token_dim_; ++c) act_tokens_(row, c) = tok[std::size_t(c)];
        act_pos_[std::size_t(row)] = pos;
        ++row;
    }
    for (int i = 0; i < env::kObsDim; ++i) act_tokens_(row, i) = Scalar(obs(i));
    act_tokens_.block(row, env::kObsDim, 1, env::kActDim).setZero();
    act_pos_[std::size_t(row)] = t_slot;
    return enc_.forward(act_tokens_, act_pos_);
}

std::pair<VecX, double> Agent::act(const Eigen::VectorXd& obs, int t_slot, bool deterministic) {
    MatX feat = features_for(obs, t_slot);
    PolicySample ps = sample_policy(feat, deterministic, deterministic ? nullptr : &action_rng_);
    if (!ps.u.allFinite())
        throw TrainingFault("policy emitted a non-finite action", steps_done_);
    return {ps.u.row(0).transpose(), deterministic ? 0.0 : double(ps.logp(0))};
}

void Agent::observe(const Eigen::VectorXd& obs, const VecX& u, int t_slot) {
    if (!settings_.use_transformer) return;
    std::vector<Scalar> tok(std::size_t(token_dim_), Scalar(0));
    for (int i = 0; i < env::kObsDim; ++i) tok[std::size_t(i)] = Scalar(obs(i));
    for (int i = 0; i < env::kActDim; ++i) tok[std::size_t(env::kObsDim + i)] = u(i);
    episode_hist_.emplace_back(std::move(tok), t_slot);
    while (int(episode_hist_.size()) > settings_.window - 1) episode_hist_.pop_front();
}

Agent::PolicySample Agent::sample_policy(const MatX& features, bool deterministic,
                                         std::mt19937_64* rng) {
    MatX out = policy_.forward(features);
    const Eigen::Index b = out.rows();
    MatX eps = MatX::Zero(b, env::kActDim);
    if (!deterministic) {
        std::normal_distribution<double> n01(0.0, 1.0);
        for (Eigen::Index i = 0; i < b; ++i)
            for (Eigen::Index j = 0; j < env::kActDim; ++j) eps(i, j) = Scalar(n01(*rng));
    }
    nn::SquashedGaussian<Scalar> g = nn::squashed_gaussian(out, eps);
    PolicySample ps;
    ps.u = std::move(g.u);
    ps.logp = std::move(g.logp);
    ps.mu = std::move(g.mu);
    ps.logstd = std::move(g.logstd);
    ps.eps = std::move(g.eps);
    ps.std = std::move(g.std);
    return ps;
}

void Agent::policy_backward(const PolicySample& ps, const MatX& dL_du, const VecX& dL_dlogp) {
    nn::SquashedGaussian<Scalar> g{ps.mu, ps.logstd, ps.std, ps.eps, ps.u, ps.logp};
    policy_.backward(nn::squashed_gaussian_backward(g, dL_du, dL_dlogp));
}

void Agent::build_windows(const std::vector<std::size_t>& idx, bool next, MatX& tokens,
                          std::vector<int>& positions) const {
    const int w = settings_.window;
    const Eigen::Index b = Eigen::Index(idx.size());
    tokens.resize(b * w, token_dim_);
    positions.assign(std::size_t(b * w), 0);
    for (Eigen::Index bi = 0; bi < b; ++bi) {
        const Transition& tr = buffer_->at(idx[std::size_t(bi)]);
        const Eigen::Index base = bi * w;
        auto put_hist = [&](int dst_row, int hist_idx) {
            for (int c = 0; c < token_dim_; ++c)
                tokens(base + dst_row, c) = tr.hist[std::size_t(hist_idx * token_dim_ + c)];
            positions[std::size_t(base + dst_row)] = tr.hist_pos[std::size_t(hist_idx)];
        };
        if (!next) {
            for (int r = 0; r < w - 1; ++r) put_hist(r, r);
            for (int c = 0; c < env::kObsDim; ++c) tokens(base + w - 1, c) = tr.s(c);
            tokens.block(base + w - 1, env::kObsDim, 1, env::kActDim).setZero();
            positions[std::size_t(base + w - 1)] = tr.t_slot;
        } else {
            for (int r = 0; r < w - 2; ++r) put_hist(r, r + 1);
            for (int c = 0; c < env::kObsDim; ++c) tokens(base + w - 2, c) = tr.s(c);
            for (int c = 0; c < env::kActDim; ++c) tokens(base + w - 2, env::kObsDim + c) = tr.a(c);
            positions[std::size_t(base + w - 2)] = tr.t_slot;
            for (int c = 0; c < env::kObsDim; ++c) tokens(base + w - 1, c) = tr.s_next(c);
            tokens.block(base + w - 1, env::kObsDim, 1, env::kActDim).setZero();
            positions[std::size_t(base + w - 1)] = tr.t_slot + 1;
        }
    }
}

MatX Agent::encode_batch(const MatX& tokens, const std::vector<int>& positions) {
    return enc_.forward(tokens, positions);
}

MatX Agent::batch_features(const std::vector<std::size_t>& idx, bool next) {
    const Eigen::Index b = Eigen::Index(idx.size());
    if (settings_.use_transformer) {
        MatX& tokens = next ? win_tokens_next_ : win_tokens_s_;
        std::vector<int>& positions = next ? win_pos_next_ : win_pos_s_;
        build_windows(idx, next, tokens, positions);
        return enc_.forward(tokens, positions);
    }
    MatX f(b, env::kObsDim);
    for (Eigen::Index i = 0; i < b; ++i) {
        const Transition& tr = buffer_->at(idx[std::size_t(i)]);
        f.row(i) = (next ? tr.s_next : tr.s).transpose();
    }
    return f;
}

LossReport Agent::update(double tau1) {
    const double tau2 = 1.0 - tau1;
    const int batch = settings_.batch;
    const auto idx = buffer_->sample_indices(batch);
    const Eigen::Index b = Eigen::Index(idx.size());
    const Scalar inv_b = Scalar(1.0 / double(b));

    VecX r1(b), r2(b), done(b);
    MatX a(b, env::kActDim);
    for (Eigen::Index i = 0; i < b; ++i) {
        const Transition& tr = buffer_->at(idx[std::size_t(i)]);
        r1(i) = tr.r1;
        r2(i) = tr.r2;
        done(i) = tr.done ? Scalar(1) : Scalar(0);
        a.row(i) = tr.a.transpose();
    }

    // next-state features first so the encoder caches stay on the s path
    MatX feat_next = batch_features(idx, true);
    MatX feat = batch_features(idx, false);

    // fresh policy sample at s, shared by the value targets and policy loss
    PolicySample ps = sample_policy(feat, false, &action_rng_);

    MatX qin_pi(b, feat_dim_ + env::kActDim);
    qin_pi << feat, ps.u;
    VecX q1_pi = q1_.forward(qin_pi).col(0);
    VecX q2_pi = q2_.forward(qin_pi).col(0);

    LossReport report;
    const Scalar alpha = Scalar(settings_.alpha);

    // state-value regressions toward E[Q - alpha log pi]
    auto value_step = [&](nn::Mlp<Scalar>& v, nn::Adam<Scalar>& opt, const VecX& q_pi) {
        opt.zero_grad();
        VecX val = v.forward(feat).col(0);
        VecX target = q_pi - alpha * ps.logp;
        VecX diff = val - target;
        MatX dv = (diff * inv_b).matrix();
        v.backward(dv);
        opt.step();
        return 0.5 * double(diff.squaredNorm()) / double(b);
    };
    report.v1 = value_step(v1_, opt_v1_, q1_pi);
    report.v2 = value_step(v2_, opt_v2_, q2_pi);

    soft_update(v1_target_.params(), v1_.params(), settings_.kappa);
    soft_update(v2_target_.params(), v2_.params(), settings_.kappa);

    // soft Q regressions toward r + gamma V_target(s')
    VecX vt1 = v1_target_.forward(feat_next).col(0);
    VecX vt2 = v2_target_.forward(feat_next).col(0);
    const Scalar gamma = Scalar(settings_.gamma);
    VecX qhat1 = r1 + gamma * (VecX::Ones(b) - done).cwiseProduct(vt1);
    VecX qhat2 = r2 + gamma * (VecX::Ones(b) - done).cwiseProduct(vt2);

    MatX qin(b, feat_dim_ + env::kActDim);
    qin << feat, a;

    opt_q1_.zero_grad();
    VecX q1v = q1_.forward(qin).col(0);
    VecX d1 = q1v - qhat1;
    MatX din1 = q1_.backward((d1 * inv_b).matrix());
    report.q1 = 0.5 * double(d1.squaredNorm()) / double(b);

    opt_q2_.zero_grad();
    VecX q2v = q2_.forward(qin).col(0);
    VecX d2 = q2v - qhat2;
    MatX din2 = q2_.backward((d2 * inv_b).matrix());
    report.q2 = 0.5 * double(d2.squaredNorm()) / double(b);

    opt_q1_.step();
    opt_q2_.step();

    if (settings_.use_transformer) {
        // the encoder learns from both objectives' critics
        MatX dfeat = din1.leftCols(feat_dim_) + din2.leftCols(feat_dim_);
        opt_enc_.zero_grad();
        enc_.backward(dfeat);
        opt_enc_.step();
    }

    // weighted policy loss: alpha log pi - sum_m tau_m Q_m at reparameterized
    // actions; gradients flow through the sampled action only
    opt_policy_.zero_grad();
    q1_.forward(qin_pi);
    MatX seed1 = MatX::Constant(b, 1, Scalar(-tau1) * inv_b);
    MatX du1 = q1_.backward(seed1);
    q2_.forward(qin_pi);
    MatX seed2 = MatX::Constant(b, 1, Scalar(-tau2) * inv_b);
    MatX du2 = q2_.backward(seed2);
    MatX dL_du = du1.rightCols(env::kActDim) + du2.rightCols(env::kActDim);
    VecX dL_dlogp = VecX::Constant(b, alpha * inv_b);
    policy_backward(ps, dL_du, dL_dlogp);
    opt_policy_.step();

    report.pi = double((alpha * ps.logp - Scalar(tau1) * q1_pi - Scalar(tau2) * q2_pi).mean());

    if (!report.finite()) throw TrainingFault("non-finite training loss", steps_done_);
    return report;
}

void Agent::train(env::Environment& env, const MetricsSink& sink, bool resume) {
    if (resume)
        env.reset();
    else
        env.reset(settings_.seed);
    Eigen::VectorXd obs = env.observation_normalized();
    begin_episode(obs);

    if (settings_.mab_enabled) {
        current_arm_ = bandit_.select_arm(bandit_rng_);
        tau1_ = bandit_.tau1(current_arm_);
    } else {
        tau1_ = settings_.fixed_tau1;
    }

    EpisodeStats ep, last_ep;
    LossReport losses;
    std::uniform_real_distribution<double> u11(-1.0, 1.0);

    while (steps_done_ < settings_.total_steps) {
        if (settings_.mab_enabled && settings_.mab_per_step) {
            current_arm_ = bandit_.select_arm(bandit_rng_);
            tau1_ = bandit_.tau1(current_arm_);
        }
        const int t = env.state().t_slot;

        VecX u(env::kActDim);
        if (steps_done_ < settings_.warmup_steps) {
            for (int i = 0; i < env::kActDim; ++i) u(i) = Scalar(u11(action_rng_));
        } else {
            u = act(obs, t, false).first;
        }

        Transition tr;
        if (settings_.use_transformer) {
            const int w = settings_.window;
            tr.hist.resize(std::size_t((w - 1) * token_dim_));
            tr.hist_pos.resize(std::size_t(w - 1));
            const int pads = w - 1 - int(episode_hist_.size());
            int r = 0;
            for (int i = 0; i < pads; ++i, ++r) {
                std::copy(first_token_.begin(), first_token_.end(),
                          tr.hist.begin() + r * token_dim_);
                tr.hist_pos[std::size_t(r)] = first_token_pos_;
            }
            for (const auto& [tok, pos] : episode_hist_) {
                std::copy(tok.begin(), tok.end(), tr.hist.begin() + r * token_dim_);
                tr.hist_pos[std::size_t(r)] = pos;
                ++r;
            }
        }
        tr.s = VecX(env::kObsDim);
        for (int i = 0; i < env::kObsDim; ++i) tr.s(i) = Scalar(obs(i));
        tr.a = u;
        tr.t_slot = t;

        auto [st, reward, done, info] = env.step(to_env_action(u));
        Eigen::VectorXd obs_next = env.observation_normalized();
        observe(obs, u, t);

        tr.r1 = Scalar(reward.r_secrecy);
        tr.r2 = Scalar(reward.r_energy);
        tr.s_next = VecX(env::kObsDim);
        for (int i = 0; i < env::kObsDim; ++i) tr.s_next(i) = Scalar(obs_next(i));
        tr.done = done;
        buffer_->push(std::move(tr));

        ep.secrecy_sum += info.r_sec;
        ep.energy_sum += info.e_u;
        ep.r1_sum += reward.r_secrecy;
        ep.r2_sum += reward.r_energy;
        ep.c6_violations += info.c_ok[5] ? 0 : 1;
        ep.c7_violations += info.c_ok[6] ? 0 : 1;
        ep.steps += 1;

        obs = obs_next;
        steps_done_ += 1;

        if (steps_done_ >= settings_.warmup_steps && buffer_->size() >= std::size_t(settings_.batch) &&
            steps_done_ % settings_.grad_every == 0) {
            losses = update(tau1_);
        }

        if (done) {
            episodes_done_ += 1;
            if (settings_.mab_enabled && ep.steps > 0) {
                const double g1 = ep.r1_sum / double(ep.steps) / settings_.mab_secrecy_scale;
                const double g2 = ep.r2_sum / double(ep.steps) / settings_.mab_energy_scale;
                bandit_.update_arm(current_arm_, tau1_ * g1 + (1.0 - tau1_) * g2);
            }
            last_ep = ep;
            ep = EpisodeStats{};
            env.reset();
            obs = env.observation_normalized();
            begin_episode(obs);
            if (settings_.mab_enabled && !settings_.mab_per_step) {
                current_arm_ = bandit_.select_arm(bandit_rng_);
                tau1_ = bandit_.tau1(current_arm_);
            }
        }

        if (sink && steps_done_ % settings_.eval_every == 0) {
            MetricsRow row;
            row.step = steps_done_;
            row.episode = episodes_done_;
            row.tau1 = tau1_;
            row.losses = losses;
            if (last_ep.steps > 0) {
                row.ep_secrecy_mean = last_ep.secrecy_sum / last_ep.steps;
                row.ep_energy_mean = last_ep.energy_sum / last_ep.steps;
                row.c6_violations = last_ep.c6_violations;
                row.c7_violations = last_ep.c7_violations;
            }
            sink(row);
        }
    }
}

std::vector<std::pair<std::string, nn::Param<Scalar>*>> Agent::named_params() {
    std::vector<std::pair<std::string, nn::Param<Scalar>*>> out;
    auto add = [&](std::vector<nn::Param<Scalar>*> ps) {
        for (auto* p : ps) out.emplace_back(p->name, p);
    };
    if (settings_.use_transformer) add(enc_.params());
    add(policy_.params());
    add(q1_.params());
    add(q2_.params());
    add(v1_.params());
    add(v2_.params());
    add(v1_target_.params());
    add(v2_target_.params());
    return out;
}

std::vector<std::pair<std::string, nn::Adam<Scalar>*>> Agent::named_optimizers() {
    std::vector<std::pair<std::string, nn::Adam<Scalar>*>> out;
    if (settings_.use_transformer) out.emplace_back("opt.enc", &opt_enc_);
    out.emplace_back("opt.pi", &opt_policy_);
    out.emplace_back("opt.q1", &opt_q1_);
    out.emplace_back("opt.q2", &opt_q2_);
    out.emplace_back("opt.v1", &opt_v1_);
    out.emplace_back("opt.v2", &opt_v2_);
    return out;
}

std::string Agent::rng_state() const {
    std::ostringstream os;
    os << action_rng_ << '\n' << bandit_rng_ << '\n' << buffer_->rng();
    return os.str();
}

void Agent::restore_rng(const std::string& text) {
    std::istringstream is(text);
    is >> action_rng_ >> bandit_rng_ >> buffer_->rng();
    if (!is) throw std::runtime_error("corrupt rng state");
}

void Agent::set_counters(std::int64_t steps, std::int64_t episodes) {
    steps_done_ = steps;
    episodes_done_ = episodes;
}

} // namespace marisec::agent
