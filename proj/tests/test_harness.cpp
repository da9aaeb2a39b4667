#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "marisec/checkpoint.hpp"
#include "marisec/harness.hpp"
#include "marisec/metrics.hpp"

#include <filesystem>
#include <fstream>

using namespace marisec;
namespace fs = std::filesystem;

namespace {

struct TempDir {
    fs::path path;
    TempDir() {
        path = fs::temp_directory_path() / ("marisec_test_" + std::to_string(::getpid()) + "_" +
                                            std::to_string(counter()++));
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
    static int& counter() {
        static int c = 0;
        return c;
    }
    std::string file(const std::string& name) const { return (path / name).string(); }
};

harness::RunConfig tiny_run(const TempDir& dir, const std::string& extra = "") {
    auto cfg = Config::from_string("run.steps = 400\nagent.warmup_steps = 100\nagent.batch = 16\n"
                                   "agent.hidden = 32\nenc.d_model = 16\nenc.heads = 2\n"
                                   "enc.ffn_mult = 2\nenc.window = 4\nagent.eval_every = 40\n"
                                   "run.checkpoint_every = 0\n" +
                                   extra);
    cfg.set("run.out_dir", dir.file("run"));
    return harness::RunConfig::load(cfg);
}

} // namespace

TEST_CASE("metrics writer enforces layout and monotone steps") {
    TempDir dir;
    const std::string path = dir.file("m.csv");
    harness::MetricsWriter w(path, 0xABCD, 7, false);
    agent::MetricsRow row;
    row.step = 80;
    row.episode = 2;
    row.tau1 = 0.5;
    w.write(row);
    row.step = 160;
    w.write(row);
    row.step = 160;
    CHECK_THROWS(w.write(row));

    auto t = harness::read_csv(path);
    CHECK(t.comments.at("config_hash") == "000000000000abcd");
    CHECK(t.comments.at("seed") == "7");
    REQUIRE(t.header.size() == 12);
    CHECK(t.header[0] == "step");
    CHECK(t.header[2] == "tau1");
    CHECK(t.rows.size() == 2);
    CHECK(t.col("step")[1] == 160);
}

TEST_CASE("csv reader rejects malformed input") {
    TempDir dir;
    {
        std::ofstream f(dir.file("bad.csv"));
        f << "a,b\n1,2\n3\n";
    }
    CHECK_THROWS(harness::read_csv(dir.file("bad.csv")));
    {
        std::ofstream f(dir.file("empty.csv"));
    }
    CHECK_THROWS(harness::read_csv(dir.file("empty.csv")));
}

TEST_CASE("sign test tail probabilities") {
    CHECK(harness::sign_test_p(0, 50) == doctest::Approx(1.0));
    CHECK(harness::sign_test_p(50, 50) == doctest::Approx(std::pow(0.5, 50)));
    CHECK(harness::sign_test_p(25, 50) > 0.4);
    const double p32 = harness::sign_test_p(32, 50);
    CHECK(p32 < 0.05);
    CHECK(p32 > 0.01);
    CHECK(harness::sign_test_p(31, 50) > p32);
}

TEST_CASE("checkpoint round trip restores the agent bitwise") {
    TempDir dir;
    auto rc = tiny_run(dir);
    env::Environment env(rc.env_params, rc.seed);
    agent::Agent a(rc.env_params, rc.agent_settings);
    env.reset(3);
    for (int i = 0; i < 5; ++i) env.step(env::ActionVector{1, 1, 0, 0.01});

    harness::CheckpointMeta meta;
    meta.config_hash = rc.config_hash;
    meta.seed = rc.seed;
    meta.step = 1234;
    meta.episode = 9;
    const std::string path = dir.file("a.ckpt");
    harness::save_checkpoint(path, meta, a, env);

    CHECK(harness::peek_checkpoint(path).step == 1234);

    env::Environment env2(rc.env_params, 999);
    agent::Agent b(rc.env_params, rc.agent_settings);
    // perturb b so the restore must overwrite everything
    b.q1_net().params()[0]->value.setConstant(0.5f);
    auto meta2 = harness::load_checkpoint(path, b, env2);
    CHECK(meta2.config_hash == rc.config_hash);
    CHECK(b.steps_done() == 1234);
    auto pa = a.named_params();
    auto pb = b.named_params();
    REQUIRE(pa.size() == pb.size());
    for (std::size_t i = 0; i < pa.size(); ++i) {
        CHECK(pa[i].first == pb[i].first);
        CHECK(pa[i].second->value == pb[i].second->value);
    }
    CHECK(a.rng_state() == b.rng_state());
    CHECK(env.rng_state() == env2.rng_state());

    CHECK_THROWS(harness::peek_checkpoint(dir.file("missing.ckpt")));
}

TEST_CASE("train, evaluate and resume at smoke scale") {
    TempDir dir;
    auto rc = tiny_run(dir);
    auto result = harness::run_train(rc);
    CHECK(fs::exists(result.metrics_path));
    CHECK(fs::exists(result.checkpoint_path));
    CHECK(result.steps == 400);

    auto table = harness::read_csv(result.metrics_path);
    CHECK(table.rows.size() == 10); // 400 / 40
    CHECK(table.comments.at("config_hash") == hash_hex(rc.config_hash));

    // evaluation with every policy
    for (const std::string policy : {"transsac", "nonuav", "random"}) {
        auto s = harness::run_eval(rc, policy, result.checkpoint_path, 3, 777);
        CHECK(s.episodes == 3);
        CHECK(s.per_episode.size() == 3);
        for (const auto& e : s.per_episode) {
            CHECK(e.oracle_ratio >= 0.0);
            CHECK(e.oracle_ratio <= 1.0);
            CHECK(e.slots == rc.env_params.slots);
        }
    }
    CHECK_THROWS_AS(harness::run_eval(rc, "transsac", "", 2, 1), ConfigError);
    CHECK_THROWS_AS(harness::run_eval(rc, "warp", "", 2, 1), ConfigError);

    // shared seeds pair the baselines episode by episode
    auto s1 = harness::run_eval(rc, "nonuav", "", 4, 900);
    auto s2 = harness::run_eval(rc, "nonuav", "", 4, 900);
    for (int i = 0; i < 4; ++i)
        CHECK(s1.per_episode[std::size_t(i)].secrecy_mean ==
              s2.per_episode[std::size_t(i)].secrecy_mean);

    // resume continues metrics contiguously
    Config resumed_cfg = rc.raw;
    resumed_cfg.set("run.steps", "600");
    auto rc2 = harness::RunConfig::load(resumed_cfg);
    auto result2 = harness::run_train(rc2, result.checkpoint_path);
    CHECK(result2.steps == 600);
    auto table2 = harness::read_csv(result2.metrics_path);
    CHECK(table2.rows.size() == 15);
    auto steps = table2.col("step");
    for (std::size_t i = 1; i < steps.size(); ++i) CHECK(steps[i] - steps[i - 1] == 40);

    // resuming under a different setup is refused
    Config other = rc.raw;
    other.set("env.i0_dbm", "-80");
    other.set("run.steps", "600");
    CHECK_THROWS_AS(harness::run_train(harness::RunConfig::load(other), result.checkpoint_path),
                    ConfigError);
}

TEST_CASE("eval rejects a checkpoint from another setup unless waived") {
    TempDir dir;
    auto rc = tiny_run(dir);
    auto result = harness::run_train(rc);
    Config other = rc.raw;
    other.set("env.p_max_dbm", "22");
    auto rc2 = harness::RunConfig::load(other);
    CHECK_THROWS_AS(harness::run_eval(rc2, "transsac", result.checkpoint_path, 2, 5),
                    harness::RuntimeFault);
    auto s = harness::run_eval(rc2, "transsac", result.checkpoint_path, 2, 5, false);
    CHECK(s.episodes == 2);
}

TEST_CASE("sim traces and plots") {
    TempDir dir;
    auto rc = tiny_run(dir);
    auto files = harness::run_sim(rc, "random", 2);
    REQUIRE(files.size() == 3);
    auto trace = harness::read_csv(files[0]);
    CHECK(trace.column("R_sec") >= 0);
    CHECK(trace.column("C6_ok") >= 0);
    CHECK(trace.rows.size() == std::size_t(2 * rc.env_params.slots));
    auto alice = harness::read_csv(files[1]);
    REQUIRE(alice.header == std::vector<std::string>{"episode", "t", "x", "y", "yaw", "u", "v", "r"});

    // a metrics file renders convergence figures
    auto tr = harness::run_train(rc);
    auto figs = harness::run_plot({tr.metrics_path}, dir.file("plots"));
    CHECK(figs.size() == 3);
    for (const auto& f : figs) CHECK(fs::exists(f));

    // an empty metrics file is an explicit error
    const std::string empty = dir.file("empty_metrics.csv");
    {
        std::ofstream f(empty);
        f << "# config_hash=deadbeef seed=1\nstep,episode,tau1,loss_q1,loss_q2,loss_v1,loss_v2,"
             "loss_pi,ep_secrecy_mean,ep_energy_mean,c6_violations,c7_violations\n";
    }
    CHECK_THROWS(harness::run_plot({empty}, dir.file("plots2")));
}

TEST_CASE("evaluation-only sweep emits one row per grid point") {
    TempDir dir;
    auto rc = tiny_run(dir);
    auto tr = harness::run_train(rc);
    auto sweep = harness::run_sweep(rc, "p_max", {18.0, 20.0}, false, tr.checkpoint_path, 2, 2);
    CHECK(sweep.points.size() == 2);
    auto t = harness::read_csv(sweep.csv_path);
    CHECK(t.rows.size() == 2);
    CHECK(t.col("axis_value")[0] == 18.0);
    CHECK_THROWS_AS(harness::run_sweep(rc, "p_max", {}, false, tr.checkpoint_path, 1, 1), ConfigError);
    CHECK_THROWS_AS(harness::run_sweep(rc, "altitude", {1.0}, false, tr.checkpoint_path, 1, 1),
                    ConfigError);
}
