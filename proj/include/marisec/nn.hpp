#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

namespace marisec::nn {

template <class S>
using Mat = Eigen::Matrix<S, Eigen::Dynamic, Eigen::Dynamic>;
template <class S>
using Vec = Eigen::Matrix<S, Eigen::Dynamic, 1>;

/// Trainable matrix with its gradient accumulator.
template <class S>
struct Param {
    std::string name;
    Mat<S> value;
    Mat<S> grad;

    Param() = default;
    Param(std::string n, Eigen::Index rows, Eigen::Index cols)
        : name(std::move(n)), value(Mat<S>::Zero(rows, cols)), grad(Mat<S>::Zero(rows, cols)) {}

    void zero_grad() { grad.setZero(); }
};

template <class S>
void xavier_init(Param<S>& p, std::mt19937_64& rng) {
    const double limit = std::sqrt(6.0 / double(p.value.rows() + p.value.cols()));
    std::uniform_real_distribution<double> u(-limit, limit);
    for (Eigen::Index j = 0; j < p.value.cols(); ++j)
        for (Eigen::Index i = 0; i < p.value.rows(); ++i) p.value(i, j) = static_cast<S>(u(rng));
}

// ---------------------------------------------------------------------------
// layers
//
// forward()/backward() return references into persistent member buffers so the
// training loop runs allocation-free once warm. Lifetime contract: an input
// passed to forward() must stay alive and unchanged until the matching
// backward() ran, and each returned reference is valid until the next call on
// the same object.
// ---------------------------------------------------------------------------

template <class S>
class Linear {
public:
    Linear() = default;
    Linear(std::string name, Eigen::Index in, Eigen::Index out, bool bias = true)
        : w_(name + ".w", in, out), b_(name + ".b", 1, out), has_bias_(bias) {}

    void init(std::mt19937_64& rng) { xavier_init(w_, rng); b_.value.setZero(); }

    const Mat<S>& forward(const Mat<S>& x) {
        x_ = &x;
        y_.noalias() = x * w_.value;
        if (has_bias_) y_.rowwise() += b_.value.row(0);
        return y_;
    }

    const Mat<S>& backward(const Mat<S>& dy) {
        w_.grad.noalias() += x_->transpose() * dy;
        if (has_bias_) b_.grad.row(0) += dy.colwise().sum();
        dx_.noalias() = dy * w_.value.transpose();
        return dx_;
    }

    std::vector<Param<S>*> params() {
        if (has_bias_) return {&w_, &b_};
        return {&w_};
    }

    Eigen::Index in_dim() const { return w_.value.rows(); }
    Eigen::Index out_dim() const { return w_.value.cols(); }
    const Mat<S>& last_output() const { return y_; }
    Param<S>& weight() { return w_; }
    Param<S>& bias() { return b_; }

private:
    Param<S> w_, b_;
    const Mat<S>* x_ = nullptr;
    Mat<S> y_, dx_;
    bool has_bias_ = true;
};

template <class S>
class ReLU {
public:
    const Mat<S>& forward(const Mat<S>& x) {
        mask_ = (x.array() > S(0)).template cast<S>().matrix();
        y_ = x.cwiseMax(S(0));
        return y_;
    }
    const Mat<S>& backward(const Mat<S>& dy) {
        dx_ = dy.cwiseProduct(mask_);
        return dx_;
    }

private:
    Mat<S> mask_, y_, dx_;
};

/// Per-row normalization with learned affine scale/shift.
template <class S>
class LayerNorm {
public:
    LayerNorm() = default;
    explicit LayerNorm(std::string name, Eigen::Index dim)
        : gamma_(name + ".gamma", 1, dim), beta_(name + ".beta", 1, dim) {
        gamma_.value.setOnes();
        beta_.value.setZero();
    }

    const Mat<S>& forward(const Mat<S>& x) {
        const Eigen::Index n = x.cols();
        y_.resize(x.rows(), n);
        inv_std_.resize(x.rows());
        for (Eigen::Index i = 0; i < x.rows(); ++i) {
            const S mean = x.row(i).mean();
            const S var = (x.row(i).array() - mean).square().sum() / S(n);
            const S inv = S(1) / std::sqrt(var + S(1e-10));
            y_.row(i) = ((x.row(i).array() - mean) * inv).matrix();
            inv_std_(i) = inv;
        }
        out_ = (y_.array().rowwise() * gamma_.value.row(0).array()).matrix();
        out_.rowwise() += beta_.value.row(0);
        return out_;
    }

    const Mat<S>& backward(const Mat<S>& dout) {
        const Eigen::Index n = y_.cols();
        gamma_.grad.row(0) += (dout.array() * y_.array()).colwise().sum().matrix();
        beta_.grad.row(0) += dout.colwise().sum();
        dx_.resize(y_.rows(), n);
        for (Eigen::Index i = 0; i < y_.rows(); ++i) {
            Eigen::Array<S, 1, Eigen::Dynamic> dy = dout.row(i).array() * gamma_.value.row(0).array();
            const S m1 = dy.mean();
            const S m2 = (dy * y_.row(i).array()).mean();
            dx_.row(i) = (inv_std_(i) * (dy - m1 - y_.row(i).array() * m2)).matrix();
        }
        return dx_;
    }

    std::vector<Param<S>*> params() { return {&gamma_, &beta_}; }

    /// rows normalized before the affine map; used by the variance contract
    const Mat<S>& normalized() const { return y_; }

private:
    Param<S> gamma_, beta_;
    Mat<S> y_, out_, dx_;
    Vec<S> inv_std_;
};

// ---------------------------------------------------------------------------
// attention
// ---------------------------------------------------------------------------

/// Sinusoidal temporal encoding: even dims sin(P / base^(2i/d)), odd dims the
/// matching cosine. d must be even so the sin/cos dims pair up.
template <class S>
Mat<S> positional_encoding(const std::vector<double>& positions, Eigen::Index d_model, double base) {
    if (d_model % 2 != 0) throw std::invalid_argument("embedding dimension must be even");
    if (!(base > 0.0)) throw std::invalid_argument("encoding base must be positive");
    Mat<S> e(static_cast<Eigen::Index>(positions.size()), d_model);
    for (Eigen::Index p = 0; p < e.rows(); ++p) {
        for (Eigen::Index i = 0; i < d_model / 2; ++i) {
            const double div = std::pow(base, 2.0 * double(i) / double(d_model));
            e(p, 2 * i) = static_cast<S>(std::sin(positions[size_t(p)] / div));
            e(p, 2 * i + 1) = static_cast<S>(std::cos(positions[size_t(p)] / div));
        }
    }
    return e;
}

template <class S>
void softmax_rows(Eigen::Ref<Mat<S>, 0, Eigen::OuterStride<>> m) {
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        const S mx = m.row(i).maxCoeff();
        m.row(i) = (m.row(i).array() - mx).exp().matrix();
        m.row(i) /= m.row(i).sum();
    }
}

/// Scaled dot-product attention, softmax(Q K^T / sqrt(d_K)) V.
template <class S>
Mat<S> self_attention(const Mat<S>& q, const Mat<S>& k, const Mat<S>& v) {
    if (q.cols() != k.cols() || k.rows() != v.rows() || q.rows() != k.rows())
        throw std::invalid_argument("attention shape mismatch");
    Mat<S> scores = q * k.transpose() / std::sqrt(S(k.cols()));
    softmax_rows<S>(scores);
    return scores * v;
}

/// Multi-head self-attention over a token window. Projections are packed:
/// head h owns columns [h*d_k, (h+1)*d_k) of the fused Q/K/V weights.
/// Operates on a batch of B independent windows flattened to (B*L) x d rows.
template <class S>
class MultiHeadAttention {
public:
    MultiHeadAttention() = default;
    MultiHeadAttention(std::string name, Eigen::Index d_model, int heads)
        : wq_(name + ".wq", d_model, d_model, false),
          wk_(name + ".wk", d_model, d_model, false),
          wv_(name + ".wv", d_model, d_model, false),
          wo_(name + ".wo", d_model, d_model, false),
          d_model_(d_model),
          heads_(heads) {
        if (heads <= 0 || d_model % heads != 0)
            throw std::invalid_argument("head count must divide the model width");
    }

    void init(std::mt19937_64& rng) {
        wq_.init(rng);
        wk_.init(rng);
        wv_.init(rng);
        wo_.init(rng);
    }

    const Mat<S>& forward(const Mat<S>& x, Eigen::Index window) {
        window_ = window;
        const Mat<S>& q = wq_.forward(x);
        const Mat<S>& k = wk_.forward(x);
        const Mat<S>& v = wv_.forward(x);
        const Eigen::Index dk = d_model_ / heads_;
        const Eigen::Index batch = x.rows() / window;
        attn_.resize(batch * heads_ * window, window);
        concat_.resize(x.rows(), d_model_);
        const S scale = S(1) / std::sqrt(S(dk));
        for (Eigen::Index b = 0; b < batch; ++b) {
            for (int h = 0; h < heads_; ++h) {
                auto qh = q.block(b * window, h * dk, window, dk);
                auto kh = k.block(b * window, h * dk, window, dk);
                auto vh = v.block(b * window, h * dk, window, dk);
                auto scores = attn_.middleRows((b * heads_ + h) * window, window);
                scores.noalias() = qh * kh.transpose() * scale;
                softmax_rows<S>(scores);
                concat_.block(b * window, h * dk, window, dk).noalias() = scores * vh;
            }
        }
        return wo_.forward(concat_);
    }

    const Mat<S>& backward(const Mat<S>& dout) {
        const Eigen::Index dk = d_model_ / heads_;
        const Eigen::Index batch = dout.rows() / window_;
        const S scale = S(1) / std::sqrt(S(dk));
        const Mat<S>& dconcat = wo_.backward(dout);
        const Mat<S>& q = wq_.last_output();
        const Mat<S>& k = wk_.last_output();
        const Mat<S>& v = wv_.last_output();
        dq_.resize(dout.rows(), d_model_);
        dgk_.resize(dout.rows(), d_model_);
        dgv_.resize(dout.rows(), d_model_);
        ds_.resize(window_, window_);
        da_.resize(window_, window_);
        for (Eigen::Index b = 0; b < batch; ++b) {
            for (int h = 0; h < heads_; ++h) {
                auto a = attn_.middleRows((b * heads_ + h) * window_, window_);
                auto qh = q.block(b * window_, h * dk, window_, dk);
                auto kh = k.block(b * window_, h * dk, window_, dk);
                auto vh = v.block(b * window_, h * dk, window_, dk);
                auto dh = dconcat.block(b * window_, h * dk, window_, dk);
                da_.noalias() = dh * vh.transpose();
                for (Eigen::Index i = 0; i < window_; ++i) {
                    const S dot = da_.row(i).dot(a.row(i));
                    ds_.row(i) = (a.row(i).array() * (da_.row(i).array() - dot)).matrix() * scale;
                }
                dq_.block(b * window_, h * dk, window_, dk).noalias() = ds_ * kh;
                dgk_.block(b * window_, h * dk, window_, dk).noalias() = ds_.transpose() * qh;
                dgv_.block(b * window_, h * dk, window_, dk).noalias() = a.transpose() * dh;
            }
        }
        dx_ = wq_.backward(dq_);
        dx_ += wk_.backward(dgk_);
        dx_ += wv_.backward(dgv_);
        return dx_;
    }

    std::vector<Param<S>*> params() {
        std::vector<Param<S>*> p;
        for (auto* l : {&wq_, &wk_, &wv_, &wo_})
            for (auto* q : l->params()) p.push_back(q);
        return p;
    }

    int heads() const { return heads_; }

private:
    // Q/K/V stay live in their projection outputs between forward and backward
    Linear<S> wq_, wk_, wv_, wo_;
    Eigen::Index d_model_ = 0;
    int heads_ = 0;
    Eigen::Index window_ = 0;
    Mat<S> attn_, concat_, dq_, dgk_, dgv_, ds_, da_, dx_;
};

/// Two affine maps with a rectifier between them.
template <class S>
class FeedForward {
public:
    FeedForward() = default;
    FeedForward(std::string name, Eigen::Index d_model, Eigen::Index hidden)
        : l1_(name + ".l1", d_model, hidden), l2_(name + ".l2", hidden, d_model) {}

    void init(std::mt19937_64& rng) {
        l1_.init(rng);
        l2_.init(rng);
    }

    const Mat<S>& forward(const Mat<S>& x) { return l2_.forward(relu_.forward(l1_.forward(x))); }
    const Mat<S>& backward(const Mat<S>& dy) { return l1_.backward(relu_.backward(l2_.backward(dy))); }

    std::vector<Param<S>*> params() {
        std::vector<Param<S>*> p;
        for (auto* l : {&l1_, &l2_})
            for (auto* q : l->params()) p.push_back(q);
        return p;
    }

private:
    Linear<S> l1_, l2_;
    ReLU<S> relu_;
};

/// One encoder block: multi-head attention, residual link with layer
/// normalization, then the feed-forward transform.
template <class S>
class EncoderLayer {
public:
    EncoderLayer() = default;
    EncoderLayer(std::string name, Eigen::Index d_model, int heads, Eigen::Index ffn_hidden)
        : mha_(name + ".mha", d_model, heads),
          ln_(name + ".ln", d_model),
          ffn_(name + ".ffn", d_model, ffn_hidden) {}

    void init(std::mt19937_64& rng) {
        mha_.init(rng);
        ffn_.init(rng);
    }

    const Mat<S>& forward(const Mat<S>& x, Eigen::Index window) {
        res_ = x;
        res_ += mha_.forward(x, window);
        return ffn_.forward(ln_.forward(res_));
    }

    const Mat<S>& backward(const Mat<S>& dy) {
        const Mat<S>& d = ln_.backward(ffn_.backward(dy));
        dx_ = d;
        dx_ += mha_.backward(d);
        return dx_;
    }

    std::vector<Param<S>*> params() {
        std::vector<Param<S>*> p;
        for (auto* q : mha_.params()) p.push_back(q);
        for (auto* q : ln_.params()) p.push_back(q);
        for (auto* q : ffn_.params()) p.push_back(q);
        return p;
    }

private:
    MultiHeadAttention<S> mha_;
    LayerNorm<S> ln_;
    FeedForward<S> ffn_;
    Mat<S> res_, dx_;
};

/// Token-window encoder. Each token is a raw (state, action) pair linearly
/// embedded to the model width; temporal positions are added with the
/// sinusoidal encoding, the encoder layers run, and the row at the newest
/// window position comes out as the enhanced representation.
template <class S>
class WindowEncoder {
public:
    struct Settings {
        Eigen::Index token_dim = 35;
        Eigen::Index d_model = 64;
        int heads = 8;
        int ffn_mult = 8;
        Eigen::Index window = 8;
        int layers = 1;
        double varpi = 10000.0;
        int max_position = 4096;
    };

    WindowEncoder() = default;
    explicit WindowEncoder(const Settings& s) : settings_(s), embed_("enc.embed", s.token_dim, s.d_model) {
        for (int i = 0; i < s.layers; ++i)
            layers_.emplace_back("enc.layer" + std::to_string(i), s.d_model, s.heads,
                                 s.d_model * s.ffn_mult);
        std::vector<double> pos(size_t(s.max_position));
        for (size_t i = 0; i < pos.size(); ++i) pos[i] = double(i);
        pe_table_ = positional_encoding<S>(pos, s.d_model, s.varpi);
    }

    void init(std::mt19937_64& rng) {
        embed_.init(rng);
        for (auto& l : layers_) l.init(rng);
    }

    /// tokens: (B*window) x token_dim; positions: flattened B*window slot
    /// indices. Returns B x d_model, one enhanced row per window.
    const Mat<S>& forward(const Mat<S>& tokens, const std::vector<int>& positions) {
        const Eigen::Index window = settings_.window;
        const Eigen::Index batch = tokens.rows() / window;
        embedded_ = embed_.forward(tokens);
        for (Eigen::Index r = 0; r < embedded_.rows(); ++r) {
            int p = std::min(positions[size_t(r)], settings_.max_position - 1);
            embedded_.row(r) += pe_table_.row(p);
        }
        const Mat<S>* cur = &embedded_;
        for (auto& l : layers_) cur = &l.forward(*cur, window);
        out_rows_ = cur->rows();
        out_.resize(batch, settings_.d_model);
        for (Eigen::Index b = 0; b < batch; ++b) out_.row(b) = cur->row((b + 1) * window - 1);
        return out_;
    }

    const Mat<S>& backward(const Mat<S>& dout) {
        const Eigen::Index window = settings_.window;
        dx0_.setZero(out_rows_, settings_.d_model);
        for (Eigen::Index b = 0; b < dout.rows(); ++b) dx0_.row((b + 1) * window - 1) = dout.row(b);
        const Mat<S>* cur = &dx0_;
        for (auto it = layers_.rbegin(); it != layers_.rend(); ++it) cur = &it->backward(*cur);
        return embed_.backward(*cur);
    }

    std::vector<Param<S>*> params() {
        std::vector<Param<S>*> p;
        for (auto* q : embed_.params()) p.push_back(q);
        for (auto& l : layers_)
            for (auto* q : l.params()) p.push_back(q);
        return p;
    }

    const Settings& settings() const { return settings_; }

private:
    Settings settings_;
    Linear<S> embed_;
    std::vector<EncoderLayer<S>> layers_;
    Mat<S> pe_table_, embedded_, out_, dx0_;
    Eigen::Index out_rows_ = 0;
};

// ---------------------------------------------------------------------------
// generic multilayer perceptron
// ---------------------------------------------------------------------------

template <class S>
class Mlp {
public:
    Mlp() = default;
    Mlp(std::string name, Eigen::Index in, const std::vector<Eigen::Index>& hidden, Eigen::Index out) {
        Eigen::Index prev = in;
        int idx = 0;
        for (Eigen::Index h : hidden) {
            linears_.emplace_back(name + ".l" + std::to_string(idx++), prev, h);
            prev = h;
        }
        linears_.emplace_back(name + ".l" + std::to_string(idx), prev, out);
        relus_.resize(hidden.size());
    }

    void init(std::mt19937_64& rng) {
        for (auto& l : linears_) l.init(rng);
    }

    const Mat<S>& forward(const Mat<S>& x) {
        const Mat<S>* cur = &x;
        for (size_t i = 0; i < linears_.size(); ++i) {
            cur = &linears_[i].forward(*cur);
            if (i + 1 < linears_.size()) cur = &relus_[i].forward(*cur);
        }
        return *cur;
    }

    const Mat<S>& backward(const Mat<S>& dy) {
        const Mat<S>* cur = &dy;
        for (size_t i = linears_.size(); i-- > 0;) {
            if (i + 1 < linears_.size()) cur = &relus_[i].backward(*cur);
            cur = &linears_[i].backward(*cur);
        }
        return *cur;
    }

    std::vector<Param<S>*> params() {
        std::vector<Param<S>*> p;
        for (auto& l : linears_)
            for (auto* q : l.params()) p.push_back(q);
        return p;
    }

private:
    std::vector<Linear<S>> linears_;
    std::vector<ReLU<S>> relus_;
};

// ---------------------------------------------------------------------------
// squashed-Gaussian policy head
// ---------------------------------------------------------------------------

inline constexpr double kLogStdMin = -10.0;
inline constexpr double kLogStdMax = 2.0;
inline constexpr double kSquashEps = 1e-6;
inline constexpr double kLog2Pi = 1.8378770664093453;

/// Reparameterized tanh-squashed Gaussian sample with its log-density,
/// including the squashing correction.
template <class S>
struct SquashedGaussian {
    Mat<S> mu, logstd, std, eps, u;
    Vec<S> logp;
};

/// head_out packs [mu | raw log-std] column blocks; eps carries the fixed
/// standard-normal draws (zero rows give the deterministic mean action).
template <class S>
SquashedGaussian<S> squashed_gaussian(const Mat<S>& head_out, const Mat<S>& eps) {
    const Eigen::Index act = head_out.cols() / 2;
    SquashedGaussian<S> g;
    g.mu = head_out.leftCols(act);
    g.logstd = head_out.rightCols(act).cwiseMax(S(kLogStdMin)).cwiseMin(S(kLogStdMax));
    g.std = g.logstd.array().exp().matrix();
    g.eps = eps;
    Mat<S> x = g.mu + g.std.cwiseProduct(g.eps);
    g.u = x.array().tanh().matrix();
    g.logp = Vec<S>::Zero(head_out.rows());
    for (Eigen::Index i = 0; i < head_out.rows(); ++i) {
        double lp = 0.0;
        for (Eigen::Index j = 0; j < act; ++j) {
            const double e = double(g.eps(i, j));
            const double u = double(g.u(i, j));
            lp += -double(g.logstd(i, j)) - 0.5 * kLog2Pi - 0.5 * e * e -
                  std::log(1.0 - u * u + kSquashEps);
        }
        g.logp(i) = S(lp);
    }
    return g;
}

/// Gradient of a loss w.r.t. the policy head output, given its gradients
/// w.r.t. the squashed action and the log-density. eps is held fixed
/// (reparameterization); the log-std clamp gates its gradient.
template <class S>
Mat<S> squashed_gaussian_backward(const SquashedGaussian<S>& g, const Mat<S>& dL_du,
                                  const Vec<S>& dL_dlogp) {
    const Eigen::Index act = g.u.cols();
    Mat<S> dout(g.u.rows(), 2 * act);
    for (Eigen::Index i = 0; i < g.u.rows(); ++i) {
        for (Eigen::Index j = 0; j < act; ++j) {
            const double u = double(g.u(i, j));
            const double one_m_u2 = 1.0 - u * u;
            const double dlogp_dx = 2.0 * u * one_m_u2 / (one_m_u2 + kSquashEps);
            const double sde = double(g.std(i, j)) * double(g.eps(i, j));
            const double gl = double(dL_dlogp(i));
            const double gu = double(dL_du(i, j));
            dout(i, j) = S(gl * dlogp_dx + gu * one_m_u2);
            double dls = gl * (-1.0 + dlogp_dx * sde) + gu * one_m_u2 * sde;
            const double ls = double(g.logstd(i, j));
            if (ls <= kLogStdMin || ls >= kLogStdMax) dls = 0.0;
            dout(i, act + j) = S(dls);
        }
    }
    return dout;
}

// ---------------------------------------------------------------------------
// optimizer
// ---------------------------------------------------------------------------

template <class S>
class Adam {
public:
    Adam() = default;
    explicit Adam(std::vector<Param<S>*> params, double lr, double beta1 = 0.9, double beta2 = 0.999,
                  double eps = 1e-8)
        : params_(std::move(params)), lr_(lr), beta1_(beta1), beta2_(beta2), eps_(eps) {
        for (auto* p : params_) {
            m_.push_back(Mat<S>::Zero(p->value.rows(), p->value.cols()));
            v_.push_back(Mat<S>::Zero(p->value.rows(), p->value.cols()));
        }
    }

    void step() {
        ++t_;
        const S c1 = S(1.0 - std::pow(beta1_, double(t_)));
        const S c2 = S(1.0 - std::pow(beta2_, double(t_)));
        for (size_t i = 0; i < params_.size(); ++i) {
            auto& p = *params_[i];
            m_[i] = S(beta1_) * m_[i] + S(1 - beta1_) * p.grad;
            v_[i] = S(beta2_) * v_[i] + S(1 - beta2_) * p.grad.cwiseProduct(p.grad);
            p.value.array() -=
                S(lr_) * (m_[i].array() / c1) / ((v_[i].array() / c2).sqrt() + S(eps_));
        }
    }

    void zero_grad() {
        for (auto* p : params_) p->zero_grad();
    }

    std::uint64_t steps() const { return t_; }
    std::vector<Mat<S>>& moment1() { return m_; }
    std::vector<Mat<S>>& moment2() { return v_; }
    void set_steps(std::uint64_t t) { t_ = t; }
    double lr() const { return lr_; }

private:
    std::vector<Param<S>*> params_;
    std::vector<Mat<S>> m_, v_;
    double lr_ = 1e-3, beta1_ = 0.9, beta2_ = 0.999, eps_ = 1e-8;
    std::uint64_t t_ = 0;
};

// ---------------------------------------------------------------------------
// finite-difference gradient verification
// ---------------------------------------------------------------------------

/// Compares the analytic gradients left in `params` by `backward_fn` against
/// central finite differences of `loss_fn` over every parameter entry.
/// Returns the worst relative error; non-finite analytic gradients come back
/// as +infinity.
template <class S>
double grad_check(const std::vector<Param<S>*>& params, const std::function<double()>& loss_fn,
                  const std::function<void()>& backward_fn, double epsilon) {
    if (!(epsilon >= 1e-7 && epsilon <= 1e-4)) throw std::invalid_argument("epsilon out of range");
    for (auto* p : params) p->zero_grad();
    backward_fn();
    std::vector<Mat<S>> analytic;
    for (auto* p : params) analytic.push_back(p->grad);

    double worst = 0.0;
    for (size_t k = 0; k < params.size(); ++k) {
        Param<S>& p = *params[k];
        for (Eigen::Index j = 0; j < p.value.cols(); ++j) {
            for (Eigen::Index i = 0; i < p.value.rows(); ++i) {
                const double a = double(analytic[k](i, j));
                if (!std::isfinite(a)) return std::numeric_limits<double>::infinity();
                const S orig = p.value(i, j);
                p.value(i, j) = orig + S(epsilon);
                const double lp = loss_fn();
                p.value(i, j) = orig - S(epsilon);
                const double lm = loss_fn();
                p.value(i, j) = orig;
                const double numeric = (lp - lm) / (2.0 * epsilon);
                const double denom = std::max({std::abs(a), std::abs(numeric), 1e-6});
                worst = std::max(worst, std::abs(a - numeric) / denom);
            }
        }
    }
    return worst;
}

} // namespace marisec::nn
