#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "marisec/config.hpp"
#include "marisec/harness.hpp"

using namespace marisec;

TEST_CASE("key-value parsing with comments and whitespace") {
    auto cfg = Config::from_string("# comment\n a.b = 1.5 # trailing\n\nname = hello\n");
    CHECK(cfg.has("a.b"));
    CHECK(cfg.values().at("a.b") == "1.5");
    CHECK(cfg.values().at("name") == "hello");
}

TEST_CASE("malformed lines rejected") {
    CHECK_THROWS_AS(Config::from_string("no equals sign here\n"), ConfigError);
    CHECK_THROWS_AS(Config::from_string("= value\n"), ConfigError);
}

TEST_CASE("typed getters validate") {
    auto cfg = Config::from_string("x = notanumber\n");
    ConfigReader r(cfg);
    CHECK_THROWS_AS(r.get_double("x", 0.0), ConfigError);
}

TEST_CASE("unknown keys rejected") {
    auto cfg = Config::from_string("definitely.not.a.key = 3\n");
    CHECK_THROWS_AS(harness::RunConfig::load(cfg), ConfigError);
}

TEST_CASE("defaults give the documented link and constraint values") {
    auto rc = harness::RunConfig::load(Config{});
    CHECK(rc.env_params.budget.p_sat_dbm == doctest::Approx(49.03));
    CHECK(rc.env_params.budget.noise_dbm == doctest::Approx(-107));
    CHECK(rc.env_params.p_max_w == doctest::Approx(0.1)); // 20 dBm
    CHECK(rc.env_params.z_min_m == 50.0);
    CHECK(rc.env_params.z_max_m == 70.0);
    CHECK(rc.env_params.e0_j == 500.0);
    CHECK(rc.env_params.i0_dbm == -74.0);
    CHECK(rc.agent_settings.gamma == doctest::Approx(0.9));
    CHECK(rc.agent_settings.kappa == doctest::Approx(0.005));
    CHECK(rc.agent_settings.batch == 128);
    CHECK(rc.agent_settings.mab_epsilon == doctest::Approx(0.1));
}

TEST_CASE("config hash ignores seed and output dir but not the setup") {
    auto a = harness::RunConfig::load(Config::from_string("run.seed = 1\n"));
    auto b = harness::RunConfig::load(Config::from_string("run.seed = 7\nrun.out_dir = elsewhere\n"));
    auto c = harness::RunConfig::load(Config::from_string("env.i0_dbm = -80\n"));
    CHECK(a.config_hash == b.config_hash);
    CHECK(a.config_hash != c.config_hash);
}

TEST_CASE("default config file on disk matches the built-in defaults") {
    auto from_file = harness::RunConfig::load(Config::from_file(CONFIG_DIR "/default.cfg"));
    auto built_in = harness::RunConfig::load(Config{});
    CHECK(from_file.config_hash == built_in.config_hash);
}
