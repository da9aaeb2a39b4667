#include "marisec/harness.hpp"

#include "marisec/baselines.hpp"
#include "marisec/checkpoint.hpp"
#include "marisec/metrics.hpp"
#include "marisec/svg_plot.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <thread>

namespace marisec::harness {

namespace fs = std::filesystem;

RunConfig RunConfig::load(const Config& cfg) {
    ConfigReader r(cfg);
    RunConfig rc;
    rc.raw = cfg;

    rc.seed = r.get_uint("run.seed", 1);
    rc.steps = r.get_int("run.steps", 200000);
    rc.out_dir = r.get_string("run.out_dir", "out");
    rc.checkpoint_every = r.get_int("run.checkpoint_every", 50000);
    rc.oracle_grid_m = r.get_double("run.oracle_grid_m", 5.0);

    auto& ep = rc.env_params;
    ep.sat.inclination_deg = r.get_double("sat.inclination_deg", 80.0);
    ep.sat.raan_deg = r.get_double("sat.raan_deg", 70.0);
    ep.sat.argp0_deg = r.get_double("sat.argp0_deg", 0.0);
    ep.sat.altitude_m = r.get_double("sat.altitude_m", 900e3);
    ep.sat.earth_radius_m = r.get_double("sat.earth_radius_m", 6371e3);
    ep.sat.period_s = r.get_double("sat.period_s", 6000.0);
    ep.anchor.lat_deg = r.get_double("geo.anchor_lat_deg", 0.0);
    ep.anchor.lon_deg = r.get_double("geo.anchor_lon_deg", 70.0);
    ep.anchor.earth_radius_m = ep.sat.earth_radius_m;

    auto& lb = ep.budget;
    lb.p_sat_dbm = r.get_double("link.P_S_dbm", 49.03);
    lb.g_sat_dbi = r.get_double("link.G_S_dbi", 52.0);
    lb.g_vessel_sat_dbi = r.get_double("link.G_SS_dbi", 30.0);
    lb.g_uav_dbi = r.get_double("link.G_U_dbi", 8.0);
    lb.g_eve_uav_dbi = r.get_double("link.G_UE_dbi", 8.0);
    lb.noise_dbm = r.get_double("link.sigma2_dbm", -107.0);
    lb.c_s = r.get_double("link.C_S", 46.4);
    lb.w_s = r.get_double("link.W_S", 2.0);
    lb.rician_k = r.get_double("link.F_S", 31.3);
    lb.sigma_shadow_s2v_db = r.get_double("link.sigma_X_S_db", 4.0);
    lb.c_u = r.get_double("link.C_U", 116.7);
    lb.w_u = r.get_double("link.W_U", 1.5);
    lb.d_ref_m = r.get_double("link.d_c_m", 2600.0);
    lb.sigma_shadow_u2v_db = r.get_double("link.sigma_X_U_db", 2.0);

    auto& rot = ep.rotor;
    rot.p_induced_w = r.get_double("uav.P_I_w", 88.63);
    rot.p_blade_w = r.get_double("uav.P_B_w", 79.86);
    rot.v_tip_ms = r.get_double("uav.v_tip_ms", 120.0);
    rot.v_induced_hover_ms = r.get_double("uav.v_i_ms", 4.03);
    rot.drag_ratio = r.get_double("uav.drag_ratio", 0.6);
    rot.rotor_solidity = r.get_double("uav.solidity", 0.05);
    rot.rotor_area_m2 = r.get_double("uav.rotor_area_m2", 0.503);
    rot.air_density = r.get_double("uav.rho_kgm3", 1.225);
    rot.mass_kg = r.get_double("uav.mass_kg", 2.0);
    rot.gravity_ms2 = r.get_double("uav.gravity_ms2", 9.8);

    auto& vd = ep.vessel_dyn;
    vd.mass_diag(0) = r.get_double("vessel.m_surge_kg", 1.2e6);
    vd.mass_diag(1) = r.get_double("vessel.m_sway_kg", 1.8e6);
    vd.mass_diag(5) = r.get_double("vessel.i_yaw_kgm2", 8e8);
    vd.damping_diag(0) = r.get_double("vessel.d_surge", 1.2e5);
    vd.damping_diag(1) = r.get_double("vessel.d_sway", 6e5);
    vd.damping_diag(5) = r.get_double("vessel.d_yaw", 6e8);
    vd.coriolis_enabled = r.get_bool("vessel.coriolis", false);
    vd.v_max_ms = r.get_double("vessel.v_max_ms", 10.0);
    vd.plan.gain_surge = r.get_double("vessel.gain_surge", 2e5);
    vd.plan.gain_yaw = r.get_double("vessel.gain_yaw", 2e8);
    vd.plan.gain_yaw_rate = r.get_double("vessel.gain_yaw_rate", 4e8);
    vd.disturbance.sigma_wind_n = r.get_double("vessel.sigma_wind_n", 4e4);
    vd.disturbance.sigma_current_n = r.get_double("vessel.sigma_cur_n", 4e4);
    vd.disturbance.sigma_wave_n = r.get_double("vessel.sigma_wave_n", 8e4);
    vd.disturbance.lever_m = r.get_double("vessel.dist_lever_m", 15.0);

    ep.antenna_height_m = r.get_double("vessel.antenna_height_m", 5.0);
    ep.start_jitter_m = r.get_double("vessel.start_jitter_m", 10.0);
    ep.alice_init.x0_m = r.get_double("vessel.alice.x0_m", -1800.0);
    ep.alice_init.y0_m = r.get_double("vessel.alice.y0_m", 0.0);
    ep.alice_init.heading_deg = r.get_double("vessel.alice.heading_deg", 90.0);
    ep.alice_init.speed_ms = r.get_double("vessel.alice.speed_ms", 7.0);
    ep.eve_init.x0_m = r.get_double("vessel.eve.x0_m", 120.0);
    ep.eve_init.y0_m = r.get_double("vessel.eve.y0_m", -60.0);
    ep.eve_init.heading_deg = r.get_double("vessel.eve.heading_deg", 90.0);
    ep.eve_init.speed_ms = r.get_double("vessel.eve.speed_ms", 5.0);

    ep.x_min_m = r.get_double("env.x_min_m", 0.0);
    ep.x_max_m = r.get_double("env.x_max_m", 80.0);
    ep.y_min_m = r.get_double("env.y_min_m", 0.0);
    ep.y_max_m = r.get_double("env.y_max_m", 80.0);
    ep.z_min_m = r.get_double("env.z_min_m", 50.0);
    ep.z_max_m = r.get_double("env.z_max_m", 70.0);
    ep.p_min_w = r.get_double("env.p_min_w", 0.0);
    ep.p_max_w = channel::dbm_to_w(r.get_double("env.p_max_dbm", 20.0));
    ep.e0_j = r.get_double("env.e0_j", 500.0);
    ep.i0_dbm = r.get_double("env.i0_dbm", -74.0);
    ep.slots = int(r.get_int("env.slots", 40));
    ep.slot_s = r.get_double("env.slot_s", 1.0);
    ep.v_h_max_ms = r.get_double("env.v_h_max_ms", 20.0);
    ep.v_v_max_ms = r.get_double("env.v_v_max_ms", 5.0);
    ep.mu1 = r.get_double("env.mu1", 1.0);
    ep.mu2 = r.get_double("env.mu2", -1.0);
    ep.rho1 = r.get_double("env.rho1", 0.1);
    ep.rho2 = r.get_double("env.rho2", 0.1);
    ep.w_pen = r.get_double("env.w_pen", 0.5);
    ep.fading = r.get_bool("env.fading", true);
    ep.arena_scale_m = r.get_double("env.arena_scale_m", 200.0);

    auto& as = rc.agent_settings;
    as.use_transformer = r.get_bool("agent.use_transformer", true);
    as.d_model = int(r.get_int("enc.d_model", 64));
    as.heads = int(r.get_int("enc.heads", 8));
    as.ffn_mult = int(r.get_int("enc.ffn_mult", 8));
    as.window = int(r.get_int("enc.window", 8));
    as.enc_layers = int(r.get_int("enc.layers", 1));
    as.varpi = r.get_double("enc.varpi", 10000.0);
    as.hidden = int(r.get_int("agent.hidden", 128));
    as.gamma = r.get_double("agent.gamma", 0.9);
    as.kappa = r.get_double("agent.kappa", 0.005);
    as.alpha = r.get_double("agent.alpha", 0.2);
    as.lr = r.get_double("agent.lr", 0.003);
    as.lr_enc = r.get_double("agent.lr_enc", -1.0);
    as.batch = int(r.get_int("agent.batch", 128));
    as.replay_capacity = int(r.get_int("agent.replay_capacity", 100000));
    as.warmup_steps = int(r.get_int("agent.warmup_steps", 1000));
    as.grad_every = int(r.get_int("agent.grad_every", 1));
    as.eval_every = int(r.get_int("agent.eval_every", 80));
    as.mab_enabled = r.get_bool("mab.enabled", true);
    as.mab_arms = int(r.get_int("mab.arms", 9));
    as.mab_epsilon = r.get_double("mab.epsilon", 0.1);
    as.mab_per_step = r.get_bool("mab.per_step", false);
    as.mab_secrecy_scale = r.get_double("mab.secrecy_scale", 10.0);
    as.mab_energy_scale = r.get_double("mab.energy_scale", 1.0);
    as.fixed_tau1 = r.get_double("mab.fixed_tau1", 0.5);
    as.total_steps = rc.steps;
    as.seed = rc.seed;

    r.finish();
    rc.env_params.validate();

    // The hash identifies the experiment setup (environment, links, agent,
    // bandit); run-control keys such as seed, step budget and output paths
    // are embedded separately in each artifact.
    std::istringstream lines(r.canonical_text());
    std::string line;
    while (std::getline(lines, line)) {
        if (line.rfind("run.", 0) == 0) continue;
        rc.canonical_text += line;
        rc.canonical_text += '\n';
    }
    rc.config_hash = fnv1a64(rc.canonical_text);
    return rc;
}

std::string out_path(const RunConfig& rc, const std::string& filename) {
    fs::create_directories(rc.out_dir);
    return (fs::path(rc.out_dir) / filename).string();
}

// ---------------------------------------------------------------------------
// train
// ---------------------------------------------------------------------------

TrainResult run_train(const RunConfig& rc, const std::string& resume_path) {
    env::Environment env(rc.env_params, rc.seed);
    agent::Agent agent(rc.env_params, rc.agent_settings);

    const bool resume = !resume_path.empty();
    if (resume) {
        CheckpointMeta meta = load_checkpoint(resume_path, agent, env);
        if (meta.config_hash != rc.config_hash)
            throw ConfigError("resume checkpoint was produced by a different config");
    }

    TrainResult result;
    result.metrics_path = out_path(rc, "metrics.csv");
    result.checkpoint_path = out_path(rc, "checkpoint.ckpt");
    MetricsWriter writer(result.metrics_path, rc.config_hash, rc.seed, resume);

    auto meta_now = [&]() {
        CheckpointMeta m;
        m.config_hash = rc.config_hash;
        m.seed = rc.seed;
        m.step = agent.steps_done();
        m.episode = agent.episodes_done();
        return m;
    };

    auto sink = [&](const agent::MetricsRow& row) {
        writer.write(row);
        if (rc.checkpoint_every > 0 && row.step % rc.checkpoint_every == 0)
            save_checkpoint(result.checkpoint_path, meta_now(), agent, env);
    };

    try {
        agent.train(env, sink, resume);
    } catch (const agent::TrainingFault& fault) {
        save_checkpoint(out_path(rc, "abort.ckpt"), meta_now(), agent, env);
        throw RuntimeFault(std::string(fault.what()) + " at step " + std::to_string(fault.step) +
                           " (state saved to abort.ckpt)");
    }

    save_checkpoint(result.checkpoint_path, meta_now(), agent, env);
    result.steps = agent.steps_done();
    return result;
}

// ---------------------------------------------------------------------------
// eval
// ---------------------------------------------------------------------------

std::string EvalSummary::table_header() {
    return "policy        episodes  secrecy_mean  secrecy_std  energy_mean  energy_std  "
           "oracle_ratio  c6_rate  c7_rate";
}

std::string EvalSummary::table_row() const {
    char buf[256];
    std::snprintf(buf, sizeof(buf), "%-13s %8d  %12.4f  %11.4f  %11.2f  %10.2f  %12.4f  %7.4f  %7.4f",
                  policy.c_str(), episodes, secrecy_mean, secrecy_std, energy_mean, energy_std,
                  oracle_ratio_mean, c6_rate, c7_rate);
    return buf;
}

namespace {

struct MeanStd {
    double mean = 0, sd = 0;
};

MeanStd mean_std(const std::vector<double>& v) {
    MeanStd ms;
    if (v.empty()) return ms;
    for (double x : v) ms.mean += x;
    ms.mean /= double(v.size());
    for (double x : v) ms.sd += (x - ms.mean) * (x - ms.mean);
    ms.sd = v.size() > 1 ? std::sqrt(ms.sd / double(v.size() - 1)) : 0.0;
    return ms;
}

} // namespace

EvalSummary run_eval(const RunConfig& rc, const std::string& policy, const std::string& checkpoint_path,
                     int episodes, std::uint64_t eval_seed, bool verify_hash,
                     const std::string& trace_csv_path) {
    const bool is_agent = policy == "transsac" || policy == "sac";
    if (!is_agent && policy != "nonuav" && policy != "random")
        throw ConfigError("unknown policy: " + policy);

    env::Environment env(rc.env_params, rc.seed);
    std::optional<agent::Agent> agent;
    if (is_agent) {
        if (checkpoint_path.empty()) throw ConfigError("agent policies need --checkpoint");
        agent::AgentSettings as = rc.agent_settings;
        as.use_transformer = (policy == "transsac");
        agent.emplace(rc.env_params, as);
        CheckpointMeta meta = load_checkpoint(checkpoint_path, *agent, env);
        if (verify_hash && meta.config_hash != rc.config_hash)
            throw RuntimeFault("checkpoint was produced by a different config");
    }

    std::ofstream trace_out;
    if (!trace_csv_path.empty()) {
        trace_out.open(trace_csv_path, std::ios::trunc);
        trace_out << "# config_hash=" << hash_hex(rc.config_hash) << " seed=" << eval_seed << "\n";
        trace_out << "episode,t,x_u,y_u,z_u,P_u,R_sec,E_u,C6_ok,C7_ok,k,r_opt\n";
    }

    EvalSummary summary;
    summary.policy = policy;
    summary.episodes = episodes;
    std::mt19937_64 base_rng = make_stream(eval_seed, StreamTag::Baseline);

    std::vector<double> sec, ene, ratio;
    long long c6 = 0, c7 = 0, total_slots = 0;

    for (int e = 0; e < episodes; ++e) {
        env.reset(eval_seed + std::uint64_t(e));
        Eigen::VectorXd obs = env.observation_normalized();
        if (agent) agent->begin_episode(obs);

        std::vector<env::StepInfo> trace;
        std::vector<geo::Position3D> uav_track;
        bool done = false;
        while (!done) {
            const int t = env.state().t_slot;
            env::ActionVector a;
            agent::VecX u;
            if (is_agent) {
                u = agent->act(obs, t, true).first;
                a = agent->to_env_action(u);
            } else if (policy == "nonuav") {
                a = baselines::non_uav_policy();
            } else {
                a = baselines::random_policy(rc.env_params, base_rng);
            }
            auto [st, reward, d, info] = env.step(a);
            if (is_agent) agent->observe(obs, u, t);
            obs = env.observation_normalized();
            trace.push_back(info);
            uav_track.push_back(st.uav_pos);
            done = d;
        }

        auto bounds = baselines::optimal_secrecy_oracle(rc.env_params, trace, rc.oracle_grid_m);
        EvalEpisode ee;
        ee.slots = int(trace.size());
        double osum = 0;
        for (std::size_t i = 0; i < trace.size(); ++i) {
            ee.secrecy_mean += trace[i].r_sec;
            ee.energy_mean += trace[i].e_u;
            osum += bounds[i];
            ee.c6_violations += trace[i].c_ok[5] ? 0 : 1;
            ee.c7_violations += trace[i].c_ok[6] ? 0 : 1;
            if (trace_out.is_open()) {
                char buf[256];
                std::snprintf(buf, sizeof(buf), "%d,%zu,%.3f,%.3f,%.3f,%.6g,%.6f,%.3f,%d,%d,%d,%.6f\n",
                              e, i, uav_track[i].x_m, uav_track[i].y_m, uav_track[i].z_m,
                              trace[i].p_uav_w, trace[i].r_sec, trace[i].e_u,
                              trace[i].c_ok[5] ? 1 : 0, trace[i].c_ok[6] ? 1 : 0, trace[i].k,
                              bounds[i]);
                trace_out << buf;
            }
        }
        ee.secrecy_mean /= ee.slots;
        ee.energy_mean /= ee.slots;
        ee.oracle_mean = osum / ee.slots;
        ee.oracle_ratio = osum > 0 ? std::min(1.0, ee.secrecy_mean * ee.slots / osum) : 0.0;
        summary.per_episode.push_back(ee);

        sec.push_back(ee.secrecy_mean);
        ene.push_back(ee.energy_mean);
        ratio.push_back(ee.oracle_ratio);
        c6 += ee.c6_violations;
        c7 += ee.c7_violations;
        total_slots += ee.slots;
    }

    auto ms = mean_std(sec);
    summary.secrecy_mean = ms.mean;
    summary.secrecy_std = ms.sd;
    ms = mean_std(ene);
    summary.energy_mean = ms.mean;
    summary.energy_std = ms.sd;
    summary.oracle_ratio_mean = mean_std(ratio).mean;
    summary.c6_rate = total_slots > 0 ? double(c6) / double(total_slots) : 0.0;
    summary.c7_rate = total_slots > 0 ? double(c7) / double(total_slots) : 0.0;
    return summary;
}

// ---------------------------------------------------------------------------
// sweep
// ---------------------------------------------------------------------------

SweepResult run_sweep(const RunConfig& rc, const std::string& axis, const std::vector<double>& grid,
                      bool train, const std::string& checkpoint_path, int episodes, int jobs) {
    if (grid.empty()) throw ConfigError("sweep grid must be non-empty");
    if (axis != "p_max" && axis != "i0") throw ConfigError("sweep axis must be p_max or i0");
    const std::string key = axis == "p_max" ? "env.p_max_dbm" : "env.i0_dbm";

    SweepResult result;
    result.axis = axis;
    result.points.resize(grid.size());

    std::atomic<std::size_t> next{0};
    std::vector<std::string> errors(grid.size());
    auto worker = [&]() {
        while (true) {
            const std::size_t i = next.fetch_add(1);
            if (i >= grid.size()) return;
            try {
                Config c = rc.raw;
                char val[40];
                std::snprintf(val, sizeof(val), "%g", grid[i]);
                c.set(key, val);
                c.set("run.out_dir", rc.out_dir + "/sweep_" + axis + "_" + val);
                RunConfig prc = RunConfig::load(c);
                std::string ckpt = checkpoint_path;
                if (train) {
                    ckpt = run_train(prc).checkpoint_path;
                }
                const std::string policy = prc.agent_settings.use_transformer ? "transsac" : "sac";
                // an eval-only sweep reuses one checkpoint across grid points,
                // so the hash check is waived for the swept key
                EvalSummary s = run_eval(prc, policy, ckpt, episodes, prc.seed + 9000, train);
                result.points[i] = SweepPoint{grid[i], std::move(s)};
            } catch (const std::exception& ex) {
                errors[i] = ex.what();
            }
        }
    };

    const int n_threads = std::max(1, std::min<int>(jobs, int(grid.size())));
    std::vector<std::thread> pool;
    for (int i = 0; i < n_threads; ++i) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
    for (const auto& e : errors) {
        if (!e.empty()) throw RuntimeFault("sweep point failed: " + e);
    }

    result.csv_path = out_path(rc, "sweep_" + axis + ".csv");
    std::ofstream out(result.csv_path, std::ios::trunc);
    out << "# config_hash=" << hash_hex(rc.config_hash) << " seed=" << rc.seed << " axis=" << axis
        << "\n";
    out << "axis_value,secrecy_mean,energy_mean,oracle_ratio,c6_rate,c7_rate\n";
    for (const auto& p : result.points) {
        char buf[200];
        std::snprintf(buf, sizeof(buf), "%g,%.6f,%.6f,%.6f,%.6f,%.6f\n", p.axis_value,
                      p.summary.secrecy_mean, p.summary.energy_mean, p.summary.oracle_ratio_mean,
                      p.summary.c6_rate, p.summary.c7_rate);
        out << buf;
    }
    return result;
}

// ---------------------------------------------------------------------------
// sim
// ---------------------------------------------------------------------------

std::vector<std::string> run_sim(const RunConfig& rc, const std::string& policy, int episodes) {
    if (policy != "nonuav" && policy != "random") throw ConfigError("sim policy must be nonuav or random");
    env::Environment env(rc.env_params, rc.seed);
    std::mt19937_64 rng = make_stream(rc.seed, StreamTag::Baseline);

    std::vector<std::string> out_files;
    const std::string env_trace = out_path(rc, "sim_trace.csv");
    const std::string alice_trace = out_path(rc, "sim_alice.csv");
    const std::string eve_trace = out_path(rc, "sim_eve.csv");
    std::ofstream et(env_trace, std::ios::trunc), at(alice_trace, std::ios::trunc),
        vt(eve_trace, std::ios::trunc);
    et << "# config_hash=" << hash_hex(rc.config_hash) << " seed=" << rc.seed << "\n";
    et << "episode,t,x_u,y_u,z_u,P_u,R_sec,E_u,C6_ok,C7_ok,k\n";
    for (auto* s : {&at, &vt}) *s << "episode,t,x,y,yaw,u,v,r\n";

    for (int e = 0; e < episodes; ++e) {
        env.reset(rc.seed + std::uint64_t(e));
        bool done = false;
        while (!done) {
            env::ActionVector a =
                policy == "nonuav" ? baselines::non_uav_policy() : baselines::random_policy(rc.env_params, rng);
            auto [st, reward, d, info] = env.step(a);
            done = d;
            char buf[256];
            std::snprintf(buf, sizeof(buf), "%d,%d,%.3f,%.3f,%.3f,%.6g,%.6f,%.3f,%d,%d,%d\n", e,
                          st.t_slot, st.uav_pos.x_m, st.uav_pos.y_m, st.uav_pos.z_m, info.p_uav_w,
                          info.r_sec, info.e_u, info.c_ok[5] ? 1 : 0, info.c_ok[6] ? 1 : 0, info.k);
            et << buf;
            auto dump = [&](std::ofstream& o, const vessel::VesselState& v) {
                char b2[200];
                std::snprintf(b2, sizeof(b2), "%d,%d,%.3f,%.3f,%.5f,%.4f,%.4f,%.6f\n", e, st.t_slot,
                              v.x(), v.y(), v.yaw(), v.surge(), v.sway(), v.yaw_rate());
                o << b2;
            };
            dump(at, st.alice);
            dump(vt, st.eve);
        }
    }
    out_files.push_back(env_trace);
    out_files.push_back(alice_trace);
    out_files.push_back(eve_trace);
    return out_files;
}

// ---------------------------------------------------------------------------
// plot
// ---------------------------------------------------------------------------

std::vector<std::string> run_plot(const std::vector<std::string>& csv_paths, const std::string& out_dir) {
    if (csv_paths.empty()) throw ConfigError("no metrics files given");
    fs::create_directories(out_dir);
    std::vector<std::string> written;

    std::vector<plot::Series> conv_sec, conv_ene;
    std::vector<std::pair<std::string, double>> final_sec;
    for (const auto& path : csv_paths) {
        CsvTable t = read_csv(path);
        if (t.rows.empty()) throw RuntimeFault("metrics file has no data rows: " + path);
        std::string label = t.comments.count("config_hash") ? t.comments["config_hash"].substr(0, 8)
                                                            : fs::path(path).stem().string();
        if (t.column("loss_q1") >= 0) {
            conv_sec.push_back({label, t.col("step"), t.col("ep_secrecy_mean")});
            conv_ene.push_back({label, t.col("step"), t.col("ep_energy_mean")});
            final_sec.emplace_back(label, t.col("ep_secrecy_mean").back());
        } else if (t.column("axis_value") >= 0) {
            const std::string base = (fs::path(out_dir) / fs::path(path).stem()).string();
            plot::line_chart(base + "_secrecy.svg", "Secrecy rate across the constraint sweep",
                             "axis value", "secrecy rate (bits/s/Hz)",
                             {{label, t.col("axis_value"), t.col("secrecy_mean")}});
            plot::line_chart(base + "_energy.svg", "UAV energy across the constraint sweep",
                             "axis value", "energy per slot (J)",
                             {{label, t.col("axis_value"), t.col("energy_mean")}});
            written.push_back(base + "_secrecy.svg");
            written.push_back(base + "_energy.svg");
        } else if (t.column("r_opt") >= 0) {
            // first episode of the trace against the per-slot bound
            std::vector<double> ts, rs, ro;
            for (const auto& row : t.rows) {
                if (row[0] != 0) continue;
                ts.push_back(row[std::size_t(t.column("t"))]);
                rs.push_back(row[std::size_t(t.column("R_sec"))]);
                ro.push_back(row[std::size_t(t.column("r_opt"))]);
            }
            if (ts.empty()) throw RuntimeFault("trace has no episode 0 rows: " + path);
            const std::string f = (fs::path(out_dir) / "oracle_trace.svg").string();
            plot::line_chart(f, "Achieved secrecy rate vs. per-slot bound", "slot",
                             "secrecy rate (bits/s/Hz)",
                             {{"achieved", ts, rs}, {"bound", ts, ro}});
            written.push_back(f);
        } else {
            throw RuntimeFault("unrecognized CSV layout: " + path);
        }
    }
    if (!conv_sec.empty()) {
        const std::string f1 = (fs::path(out_dir) / "convergence_secrecy.svg").string();
        const std::string f2 = (fs::path(out_dir) / "convergence_energy.svg").string();
        const std::string f3 = (fs::path(out_dir) / "objectives_bar.svg").string();
        plot::line_chart(f1, "Episode secrecy rate during training", "environment step",
                         "secrecy rate (bits/s/Hz)", conv_sec);
        plot::line_chart(f2, "Episode UAV energy during training", "environment step",
                         "energy per slot (J)", conv_ene);
        plot::bar_chart(f3, "Final episode secrecy rate", "secrecy rate (bits/s/Hz)", final_sec);
        written.push_back(f1);
        written.push_back(f2);
        written.push_back(f3);
    }
    return written;
}

double sign_test_p(int wins, int n) {
    if (n <= 0) return 1.0;
    // exact binomial upper tail at p = 1/2
    double p = 0.0;
    double logc = 0.0; // log C(n, 0)
    for (int k = 0; k <= n; ++k) {
        if (k >= wins) p += std::exp(logc - double(n) * std::log(2.0));
        logc += std::log(double(n - k)) - std::log(double(k + 1));
    }
    return std::min(1.0, p);
}

} // namespace marisec::harness
