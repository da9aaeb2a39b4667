#include "marisec/checkpoint.hpp"

#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <map>
#include <stdexcept>

namespace marisec::harness {

namespace {

constexpr char kMagic[8] = {'M', 'S', 'E', 'C', 'K', 'P', 'T', '1'};
constexpr std::uint32_t kVersion = 1;

enum class SectionKind : std::uint8_t { MatrixF32 = 0, VectorF64 = 1, VectorU64 = 2, Text = 3 };

struct Writer {
    std::ofstream out;

    template <class T>
    void pod(const T& v) {
        out.write(reinterpret_cast<const char*>(&v), sizeof(T));
    }
    void name(const std::string& s) {
        pod(std::uint32_t(s.size()));
        out.write(s.data(), std::streamsize(s.size()));
    }
    void matrix(const std::string& n, const nn::Mat<float>& m) {
        pod(std::uint8_t(SectionKind::MatrixF32));
        name(n);
        pod(std::uint64_t(m.rows()));
        pod(std::uint64_t(m.cols()));
        out.write(reinterpret_cast<const char*>(m.data()), std::streamsize(sizeof(float) * std::size_t(m.size())));
    }
    void vec_f64(const std::string& n, const std::vector<double>& v) {
        pod(std::uint8_t(SectionKind::VectorF64));
        name(n);
        pod(std::uint64_t(v.size()));
        pod(std::uint64_t(1));
        out.write(reinterpret_cast<const char*>(v.data()), std::streamsize(sizeof(double) * v.size()));
    }
    void vec_u64(const std::string& n, const std::vector<std::uint64_t>& v) {
        pod(std::uint8_t(SectionKind::VectorU64));
        name(n);
        pod(std::uint64_t(v.size()));
        pod(std::uint64_t(1));
        out.write(reinterpret_cast<const char*>(v.data()), std::streamsize(sizeof(std::uint64_t) * v.size()));
    }
    void text(const std::string& n, const std::string& s) {
        pod(std::uint8_t(SectionKind::Text));
        name(n);
        pod(std::uint64_t(s.size()));
        pod(std::uint64_t(1));
        out.write(s.data(), std::streamsize(s.size()));
    }
};

struct Reader {
    std::ifstream in;

    template <class T>
    T pod() {
        T v{};
        in.read(reinterpret_cast<char*>(&v), sizeof(T));
        if (!in) throw std::runtime_error("truncated checkpoint");
        return v;
    }
    std::string name() {
        auto len = pod<std::uint32_t>();
        std::string s(len, '\0');
        in.read(s.data(), std::streamsize(len));
        if (!in) throw std::runtime_error("truncated checkpoint");
        return s;
    }
};

struct Section {
    SectionKind kind;
    nn::Mat<float> matrix;
    std::vector<double> f64;
    std::vector<std::uint64_t> u64;
    std::string text;
};

std::map<std::string, Section> read_sections(Reader& r) {
    std::map<std::string, Section> out;
    while (true) {
        std::uint8_t kind_raw;
        r.in.read(reinterpret_cast<char*>(&kind_raw), 1);
        if (r.in.eof()) break;
        if (!r.in) throw std::runtime_error("truncated checkpoint");
        Section s;
        s.kind = SectionKind(kind_raw);
        std::string n = r.name();
        auto rows = r.pod<std::uint64_t>();
        auto cols = r.pod<std::uint64_t>();
        switch (s.kind) {
            case SectionKind::MatrixF32:
                s.matrix.resize(Eigen::Index(rows), Eigen::Index(cols));
                r.in.read(reinterpret_cast<char*>(s.matrix.data()),
                          std::streamsize(sizeof(float) * rows * cols));
                break;
            case SectionKind::VectorF64:
                s.f64.resize(rows);
                r.in.read(reinterpret_cast<char*>(s.f64.data()), std::streamsize(sizeof(double) * rows));
                break;
            case SectionKind::VectorU64:
                s.u64.resize(rows);
                r.in.read(reinterpret_cast<char*>(s.u64.data()),
                          std::streamsize(sizeof(std::uint64_t) * rows));
                break;
            case SectionKind::Text: {
                s.text.resize(rows);
                r.in.read(s.text.data(), std::streamsize(rows));
                break;
            }
            default:
                throw std::runtime_error("unknown checkpoint section kind");
        }
        if (!r.in) throw std::runtime_error("truncated checkpoint");
        out.emplace(std::move(n), std::move(s));
    }
    return out;
}

CheckpointMeta read_header(Reader& r) {
    char magic[8];
    r.in.read(magic, 8);
    if (!r.in || std::memcmp(magic, kMagic, 8) != 0)
        throw std::runtime_error("not a checkpoint file");
    const auto version = r.pod<std::uint32_t>();
    if (version != kVersion) throw std::runtime_error("incompatible checkpoint version");
    CheckpointMeta meta;
    meta.config_hash = r.pod<std::uint64_t>();
    meta.seed = r.pod<std::uint64_t>();
    meta.step = r.pod<std::int64_t>();
    meta.episode = r.pod<std::int64_t>();
    return meta;
}

} // namespace

void save_checkpoint(const std::string& path, const CheckpointMeta& meta, agent::Agent& agent,
                     const env::Environment& env) {
    const std::string tmp = path + ".tmp";
    {
        Writer w;
        w.out.open(tmp, std::ios::binary | std::ios::trunc);
        if (!w.out) throw std::runtime_error("cannot write checkpoint: " + tmp);
        w.out.write(kMagic, 8);
        w.pod(kVersion);
        w.pod(meta.config_hash);
        w.pod(meta.seed);
        w.pod(meta.step);
        w.pod(meta.episode);

        for (auto& [n, p] : agent.named_params()) w.matrix("param." + n, p->value);
        for (auto& [n, opt] : agent.named_optimizers()) {
            w.vec_u64(n + ".t", {opt->steps()});
            auto& m1 = opt->moment1();
            auto& m2 = opt->moment2();
            for (std::size_t i = 0; i < m1.size(); ++i) {
                w.matrix(n + ".m" + std::to_string(i), m1[i]);
                w.matrix(n + ".v" + std::to_string(i), m2[i]);
            }
        }
        auto& bandit = agent.bandit();
        w.vec_f64("bandit.estimates", bandit.estimates());
        w.vec_u64("bandit.counts", bandit.counts());
        w.text("agent.rng", agent.rng_state());
        w.text("env.rng", env.rng_state());
        w.out.flush();
        if (!w.out) throw std::runtime_error("failed writing checkpoint: " + tmp);
    }
    std::filesystem::rename(tmp, path);
}

CheckpointMeta peek_checkpoint(const std::string& path) {
    Reader r;
    r.in.open(path, std::ios::binary);
    if (!r.in) throw std::runtime_error("cannot open checkpoint: " + path);
    return read_header(r);
}

CheckpointMeta load_checkpoint(const std::string& path, agent::Agent& agent, env::Environment& env) {
    Reader r;
    r.in.open(path, std::ios::binary);
    if (!r.in) throw std::runtime_error("cannot open checkpoint: " + path);
    CheckpointMeta meta = read_header(r);
    auto sections = read_sections(r);

    auto want = [&](const std::string& n) -> Section& {
        auto it = sections.find(n);
        if (it == sections.end()) throw std::runtime_error("checkpoint missing section: " + n);
        return it->second;
    };

    for (auto& [n, p] : agent.named_params()) {
        Section& s = want("param." + n);
        if (s.matrix.rows() != p->value.rows() || s.matrix.cols() != p->value.cols())
            throw std::runtime_error("checkpoint shape mismatch for " + n);
        p->value = s.matrix;
    }
    for (auto& [n, opt] : agent.named_optimizers()) {
        opt->set_steps(want(n + ".t").u64.at(0));
        auto& m1 = opt->moment1();
        auto& m2 = opt->moment2();
        for (std::size_t i = 0; i < m1.size(); ++i) {
            m1[i] = want(n + ".m" + std::to_string(i)).matrix;
            m2[i] = want(n + ".v" + std::to_string(i)).matrix;
        }
    }
    agent.bandit().restore(want("bandit.estimates").f64, want("bandit.counts").u64);
    agent.restore_rng(want("agent.rng").text);
    env.restore_rng(want("env.rng").text);
    agent.set_counters(meta.step, meta.episode);
    return meta;
}

} // namespace marisec::harness
