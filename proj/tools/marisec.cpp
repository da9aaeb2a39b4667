#include <malloc.h>
#include "marisec/baselines.hpp"
#include "marisec/harness.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <iostream>

namespace {

using namespace marisec;

harness::RunConfig load_config(const std::string& path, const std::vector<std::string>& sets,
                               std::uint64_t seed_flag, bool seed_set) {
    Config cfg = path.empty() ? Config{} : Config::from_file(path);
    for (const auto& kv : sets) {
        auto eq = kv.find('=');
        if (eq == std::string::npos) throw ConfigError("--set expects key=value, got: " + kv);
        cfg.set(kv.substr(0, eq), kv.substr(eq + 1));
    }
    if (seed_set) cfg.set("run.seed", std::to_string(seed_flag));
    if (const char* env_out = std::getenv("MARISEC_OUT"); env_out && *env_out)
        cfg.set("run.out_dir", env_out);
    return harness::RunConfig::load(cfg);
}

} // namespace

int main(int argc, char** argv) {
    mallopt(M_MMAP_THRESHOLD, 128 << 20); // keep large training buffers on the heap

    CLI::App app{"UAV friendly-jamming simulator and trainer for satellite-maritime downlinks"};
    app.require_subcommand(1);

    std::string config_path, resume_path, checkpoint_path, policy = "transsac", axis = "i0";
    std::vector<std::string> sets;
    std::vector<std::string> plot_inputs;
    std::vector<double> grid;
    std::string plot_out = "plots";
    std::uint64_t seed_flag = 1;
    bool seed_set = false;
    int episodes = 50;
    int jobs = 1;
    bool sweep_train = false;

    auto add_common = [&](CLI::App* cmd) {
        cmd->add_option("-c,--config", config_path, "run configuration file");
        cmd->add_option("--set", sets, "override a config key (key=value), repeatable");
        cmd->add_option("--seed", seed_flag, "master seed override")->each([&](const std::string&) {
            seed_set = true;
        });
    };

    auto* train = app.add_subcommand("train", "train an agent and write checkpoint + metrics");
    add_common(train);
    train->add_option("--resume", resume_path, "checkpoint to resume from");

    auto* eval = app.add_subcommand("eval", "evaluate a policy over shared-seed episodes");
    add_common(eval);
    eval->add_option("--policy", policy, "transsac | sac | nonuav | random");
    eval->add_option("--checkpoint", checkpoint_path, "trained checkpoint (agent policies)");
    eval->add_option("--episodes", episodes, "evaluation episodes");

    auto* sweep = app.add_subcommand("sweep", "train or evaluate across a constraint grid");
    add_common(sweep);
    sweep->add_option("--axis", axis, "p_max | i0")->required();
    sweep->add_option("--grid", grid, "grid values (dBm)")->required();
    sweep->add_flag("--train", sweep_train, "train per grid point instead of evaluating a checkpoint");
    sweep->add_option("--checkpoint", checkpoint_path, "checkpoint for evaluation-only sweeps");
    sweep->add_option("--episodes", episodes, "evaluation episodes per point");
    sweep->add_option("--jobs", jobs, "parallel worker threads");

    auto* sim = app.add_subcommand("sim", "run scripted-policy episodes and dump traces");
    add_common(sim);
    sim->add_option("--policy", policy, "nonuav | random");
    sim->add_option("--episodes", episodes, "episodes to simulate");

    auto* plot = app.add_subcommand("plot", "render figures from metrics/sweep/trace CSVs");
    plot->add_option("--metrics", plot_inputs, "input CSV files")->required();
    plot->add_option("--out", plot_out, "output directory");

    CLI11_PARSE(app, argc, argv);

    try {
        if (train->parsed()) {
            auto rc = load_config(config_path, sets, seed_flag, seed_set);
            auto result = harness::run_train(rc, resume_path);
            std::cout << "trained " << result.steps << " steps\n"
                      << "metrics:    " << result.metrics_path << "\n"
                      << "checkpoint: " << result.checkpoint_path << "\n";
        } else if (eval->parsed()) {
            auto rc = load_config(config_path, sets, seed_flag, seed_set);
            auto trace = harness::out_path(rc, "eval_trace.csv");
            auto summary =
                harness::run_eval(rc, policy, checkpoint_path, episodes, rc.seed + 9000, true, trace);
            std::cout << harness::EvalSummary::table_header() << "\n" << summary.table_row() << "\n";
            std::cout << "trace: " << trace << "\n";
        } else if (sweep->parsed()) {
            auto rc = load_config(config_path, sets, seed_flag, seed_set);
            auto result = harness::run_sweep(rc, axis, grid, sweep_train, checkpoint_path, episodes, jobs);
            std::cout << harness::EvalSummary::table_header() << "\n";
            for (const auto& p : result.points) {
                std::cout << p.summary.table_row() << "   [" << axis << "=" << p.axis_value << "]\n";
            }
            std::cout << "sweep CSV: " << result.csv_path << "\n";
        } else if (sim->parsed()) {
            auto rc = load_config(config_path, sets, seed_flag, seed_set);
            for (const auto& f : harness::run_sim(rc, policy, episodes)) std::cout << f << "\n";
        } else if (plot->parsed()) {
            for (const auto& f : harness::run_plot(plot_inputs, plot_out)) std::cout << f << "\n";
        }
    } catch (const ConfigError& ex) {
        std::cerr << "config error: " << ex.what() << "\n";
        return 1;
    } catch (const std::exception& ex) {
        std::cerr << "runtime fault: " << ex.what() << "\n";
        return 2;
    }
    return 0;
}
