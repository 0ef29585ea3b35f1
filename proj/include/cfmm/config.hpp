#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "cfmm/channel.hpp"
#include "cfmm/handover.hpp"

namespace cfmm {

enum class SeModel { fast, full };

/// Every simulation knob. Defaults reproduce the medium-density uniform
/// scenario at desk scale (20 realizations of 30 s).
struct SimConfig {
    // geometry
    double area_side_m = 750.0;
    std::size_t num_aps = 308;
    std::string topology_path;  ///< AP-CSV; empty means uniform placement
    std::size_t num_ues = 50;
    std::string trace_path;     ///< trace-CSV; empty means random waypoint
    double ue_speed_mps = 3.6;
    double rwp_transition_scale_m = 50.0;
    double ap_height_m = 10.0;
    double ue_height_m = 1.0;

    // radio
    double carrier_freq_hz = 2e9;
    double slot_duration_s = 1e-4;
    int tau_p = 10;
    int tau_c = 200;
    double tx_power_dbm = 20.0;
    double bandwidth_hz = 20e6;
    double noise_figure_db = 9.0;
    double shadowing_sigma_db = 8.0;
    double pl_near_breakpoint_m = 10.0;
    double pl_far_breakpoint_m = 50.0;
    double pl_mid_exponent = 2.0;
    double pl_far_exponent = 3.5;

    // serving sets
    std::size_t num_best_aps = 7;  ///< E
    double target_q = 20.0;

    // handover
    double d_c_s = 0.1;
    double d_ap_s = 0.02;
    double dc_penalty = 0.1;
    double gamma1_db = 1.0;
    double gamma2_db = 1.0;
    double delta1_db = 4.0;
    double delta2_db = 4.0;
    double theta_db = 4.0;
    double newton_eps = 1e-6;
    double f_update = 1.0 / 200.0;
    std::vector<Scheme> schemes = all_schemes();

    // evaluation
    SeModel se_model = SeModel::fast;
    int n_fading_samples = 50;
    int slot_decimation = 10;

    // campaign
    std::size_t n_realizations = 20;
    double duration_s = 30.0;
    std::uint64_t seed = 42;
    std::size_t threads = 0;  ///< 0 = hardware concurrency

    double block_duration_s() const { return tau_c * slot_duration_s; }
    std::size_t num_blocks() const;
    double tx_power_w() const;
    double noise_w() const;
    PathLossParams path_loss_params() const;
    SchemeParams scheme_params() const;
};

/// Throws ConfigError on the first violated invariant.
void validate(const SimConfig& cfg);

/// Flat key/value JSON; unknown keys and mistyped values are rejected.
SimConfig config_from_json(const nlohmann::json& j);
SimConfig load_config(const std::filesystem::path& path);
nlohmann::ordered_json config_to_json(const SimConfig& cfg);

std::string_view se_model_name(SeModel m);

}  // namespace cfmm
