#pragma once

#include "marisec/channel.hpp"
#include "marisec/energy.hpp"
#include "marisec/geo.hpp"
#include "marisec/rng.hpp"
#include "marisec/vessel.hpp"

#include <Eigen/Dense>
#include <cstdint>
#include <random>
#include <tuple>

namespace marisec::env {

/// Per-slot UAV command: displacement of the 3D position plus transmit power.
struct ActionVector {
    double dx_m = 0.0;
    double dy_m = 0.0;
    double dz_m = 0.0;
    double p_uav_w = 0.0;
};

/// Scaled two-objective reward; the energy component is non-positive.
struct RewardVector {
    double r_secrecy = 0.0;
    double r_energy = 0.0;
};

struct VesselInit {
    double x0_m = 0.0;
    double y0_m = 0.0;
    double heading_deg = 90.0;
    double speed_ms = 6.0;
};

struct EnvParams {
    geo::OrbitalElements sat;
    geo::Anchor anchor;
    channel::LinkBudget budget;
    energy::RotorcraftParams rotor;
    vessel::VesselParams vessel_dyn;
    VesselInit alice_init{-1800.0, 0.0, 90.0, 7.0};
    VesselInit eve_init{120.0, -60.0, 90.0, 5.0};
    double start_jitter_m = 10.0;
    double antenna_height_m = 5.0;

    // constraint set
    double x_min_m = 0.0, x_max_m = 80.0;   // C1
    double y_min_m = 0.0, y_max_m = 80.0;   // C2
    double z_min_m = 50.0, z_max_m = 70.0;  // C3
    double p_min_w = 0.0;                   // C4
    double p_max_w = 0.1;                   // C4, 20 dBm default
    double e0_j = 500.0;                    // C5
    double i0_dbm = -74.0;                  // C6/C7
    double v_h_max_ms = 20.0;
    double v_v_max_ms = 5.0;

    double slot_s = 1.0;
    int slots = 40;

    // reward shaping; mu2 <= 0 selects the hover-normalized automatic value
    double mu1 = 1.0;
    double mu2 = -1.0;
    double rho1 = 0.1;
    double rho2 = 0.1;
    double w_pen = 0.5;

    bool fading = true;
    double arena_scale_m = 200.0;

    double i0_w() const { return channel::dbm_to_w(i0_dbm); }
    double mu2_effective() const;
    void validate() const;
};

/// Raw observation is a fixed 31-dim layout:
/// [eta_A(6), nu_A(6), eta_E(6), nu_E(6), P_U(1), uav xyz(3), sat xyz(3)].
inline constexpr int kObsDim = 31;
inline constexpr int kActDim = 4;

struct EnvState {
    vessel::VesselState alice;
    vessel::VesselState eve;
    double p_uav_w = 0.0;
    geo::Position3D uav_pos;  // local east/north/up frame
    geo::Position3D sat_pos;  // Earth-centered frame
    int t_slot = 0;
    double v_f_prev_ms = 0.0;
    double cum_tx_j = 0.0;
    bool done = false;
};

/// Everything needed to re-evaluate the slot's rates at a hypothetical UAV
/// position/power: positions plus the stochastic channel realizations.
struct ChannelSnapshot {
    geo::Position3D sat_pos;
    double alice_x_m = 0.0, alice_y_m = 0.0;
    double eve_x_m = 0.0, eve_y_m = 0.0;
    channel::ChannelDraw draw_alice;
    channel::ChannelDraw draw_eve;
};

struct StepInfo {
    double r_sec = 0.0;   // raw secrecy rate, bits/s/Hz
    double e_u = 0.0;     // per-slot UAV energy, J (clamped at zero)
    double rate_a = 0.0;
    double rate_e = 0.0;
    double jam_alice_w = 0.0;
    double jam_eve_w = 0.0;
    bool c_ok[7] = {true, true, true, true, true, true, true};
    double w1 = 1.0, w2 = 1.0;
    int k = 1;
    double p_uav_w = 0.0;
    double v_h_ms = 0.0, v_v_ms = 0.0;
    ChannelSnapshot snap;
};

/// Clamp the command into the C1-C4 feasible box: per-axis vertical and
/// power limits plus the horizontal speed-norm cap.
ActionVector project_action(const EnvParams& params, const ActionVector& raw);

/// Linear scalarization with weights on the simplex.
double scalarize(const RewardVector& reward, double tau1, double tau2);

class Environment {
public:
    Environment(const EnvParams& params, std::uint64_t seed);

    /// Re-derives every stream from the seed and starts a fresh episode;
    /// identical seeds give identical episodes under identical actions.
    EnvState reset(std::uint64_t seed);
    /// Starts the next episode continuing the environment's own streams.
    EnvState reset();

    std::tuple<EnvState, RewardVector, bool, StepInfo> step(const ActionVector& action);

    Eigen::VectorXd observation() const;
    Eigen::VectorXd observation_normalized() const;

    const EnvState& state() const { return state_; }
    const EnvParams& params() const { return params_; }

    /// Stream serialization for resumable runs.
    std::string rng_state() const;
    void restore_rng(const std::string& text);

private:
    EnvState do_reset();

    EnvParams params_;
    EnvState state_;
    std::mt19937_64 reset_rng_;
    std::mt19937_64 channel_rng_;
    std::mt19937_64 alice_rng_;
    std::mt19937_64 eve_rng_;
    vessel::VesselParams alice_params_;
    vessel::VesselParams eve_params_;
    double episode_argp0_deg_ = 0.0;
};

} // namespace marisec::env
