#include "cfmm/config.hpp"

#include <cmath>
#include <fstream>
#include <functional>
#include <map>

#include "cfmm/error.hpp"

namespace cfmm {

using nlohmann::json;

std::size_t SimConfig::num_blocks() const
{
    return static_cast<std::size_t>(std::llround(duration_s / block_duration_s()));
}

double SimConfig::tx_power_w() const { return dbm_to_w(tx_power_dbm); }

double SimConfig::noise_w() const { return noise_power_w(bandwidth_hz, noise_figure_db); }

PathLossParams SimConfig::path_loss_params() const
{
    PathLossParams p;
    p.carrier_hz = carrier_freq_hz;
    p.ap_height_m = ap_height_m;
    p.ue_height_m = ue_height_m;
    p.near_breakpoint_m = pl_near_breakpoint_m;
    p.far_breakpoint_m = pl_far_breakpoint_m;
    p.mid_exponent = pl_mid_exponent;
    p.far_exponent = pl_far_exponent;
    p.shadowing_sigma_db = shadowing_sigma_db;
    return p;
}

SchemeParams SimConfig::scheme_params() const
{
    SchemeParams p;
    p.gamma1_db = gamma1_db;
    p.gamma2_db = gamma2_db;
    p.delta1_db = delta1_db;
    p.delta2_db = delta2_db;
    p.theta_db = theta_db;
    p.dc_penalty = dc_penalty;
    p.newton_eps = newton_eps;
    p.f_update = f_update;
    p.tau_p = tau_p;
    p.tau_c = tau_c;
    return p;
}

std::string_view se_model_name(SeModel m) { return m == SeModel::fast ? "fast" : "full"; }

namespace {

void require(bool ok, const std::string& what)
{
    if (!ok) {
        throw ConfigError(what);
    }
}

}  // namespace

void validate(const SimConfig& c)
{
    require(c.area_side_m > 0.0, "area_side_m must be positive");
    require(c.topology_path.empty() ? c.num_aps >= 1 : true, "num_aps must be at least 1");
    require(c.trace_path.empty() ? c.num_ues >= 1 : true, "num_ues must be at least 1");
    require(c.ue_speed_mps >= 0.0, "ue_speed_mps must be non-negative");
    require(c.rwp_transition_scale_m > 0.0, "rwp_transition_scale_m must be positive");
    require(c.carrier_freq_hz > 0.0, "carrier_freq_hz must be positive");
    require(c.slot_duration_s > 0.0, "slot_duration_s must be positive");
    require(c.tau_p >= 0 && c.tau_p < c.tau_c, "need 0 <= tau_p < tau_c");
    require(c.bandwidth_hz > 0.0, "bandwidth_hz must be positive");
    require(c.ap_height_m > 0.0 && c.ue_height_m > 0.0, "antenna heights must be positive");
    require(c.shadowing_sigma_db >= 0.0, "shadowing_sigma_db must be non-negative");
    require(c.pl_near_breakpoint_m > 0.0 && c.pl_near_breakpoint_m < c.pl_far_breakpoint_m,
            "need 0 < pl_near_breakpoint_m < pl_far_breakpoint_m");
    require(c.num_best_aps >= 1, "num_best_aps must be at least 1");
    require(c.topology_path.empty() ? c.num_best_aps <= c.num_aps : true, "num_best_aps exceeds num_aps");
    require(c.target_q >= 1.0, "target_q must be at least 1");
    require(c.d_c_s >= 0.0 && c.d_ap_s >= 0.0, "handover delays must be non-negative");
    require(c.dc_penalty >= 0.0 && c.dc_penalty < 1.0, "dc_penalty must lie in [0, 1)");
    require(c.gamma1_db >= 0.0 && c.gamma2_db >= 0.0 && c.delta1_db >= 0.0 && c.delta2_db >= 0.0 &&
                c.theta_db >= 0.0,
            "margins must be non-negative");
    require(c.newton_eps > 0.0, "newton_eps must be positive");
    require(c.f_update > 0.0 && c.f_update <= 1.0, "f_update must lie in (0, 1]");
    require(c.n_fading_samples >= 1, "n_fading_samples must be at least 1");
    require(c.slot_decimation >= 1, "slot_decimation must be at least 1");
    require(c.n_realizations >= 1, "n_realizations must be at least 1");
    require(c.duration_s > 0.0, "duration_s must be positive");
    const double blocks = c.duration_s / c.block_duration_s();
    require(std::abs(blocks - std::round(blocks)) < 1e-6 && std::round(blocks) >= 1.0,
            "duration_s must be a positive integer multiple of the block duration");
}

namespace {

template <typename T>
T get_as(const json& v, const std::string& key)
{
    try {
        if constexpr (std::is_same_v<T, double>) {
            if (!v.is_number()) {
                throw ConfigError("");
            }
        } else if constexpr (std::is_integral_v<T>) {
            if (!v.is_number_integer() && !(v.is_number_float() && v.get<double>() == std::floor(v.get<double>()))) {
                throw ConfigError("");
            }
            if constexpr (std::is_unsigned_v<T>) {
                if (v.get<double>() < 0.0) {
                    throw ConfigError("");
                }
            }
        } else if constexpr (std::is_same_v<T, std::string>) {
            if (!v.is_string()) {
                throw ConfigError("");
            }
        }
        return v.get<T>();
    } catch (const std::exception&) {
        throw ConfigError("config key '" + key + "' has the wrong type");
    }
}

using Setter = std::function<void(SimConfig&, const json&, const std::string&)>;

template <typename T>
Setter field(T SimConfig::*member)
{
    return [member](SimConfig& c, const json& v, const std::string& key) { c.*member = get_as<T>(v, key); };
}

const std::map<std::string, Setter>& setters()
{
    static const std::map<std::string, Setter> table = {
        {"area_side_m", field(&SimConfig::area_side_m)},
        {"num_aps", field(&SimConfig::num_aps)},
        {"topology_path", field(&SimConfig::topology_path)},
        {"num_ues", field(&SimConfig::num_ues)},
        {"trace_path", field(&SimConfig::trace_path)},
        {"ue_speed_mps", field(&SimConfig::ue_speed_mps)},
        {"rwp_transition_scale_m", field(&SimConfig::rwp_transition_scale_m)},
        {"ap_height_m", field(&SimConfig::ap_height_m)},
        {"ue_height_m", field(&SimConfig::ue_height_m)},
        {"carrier_freq_hz", field(&SimConfig::carrier_freq_hz)},
        {"slot_duration_s", field(&SimConfig::slot_duration_s)},
        {"tau_p", field(&SimConfig::tau_p)},
        {"tau_c", field(&SimConfig::tau_c)},
        {"tx_power_dbm", field(&SimConfig::tx_power_dbm)},
        {"bandwidth_hz", field(&SimConfig::bandwidth_hz)},
        {"noise_figure_db", field(&SimConfig::noise_figure_db)},
        {"shadowing_sigma_db", field(&SimConfig::shadowing_sigma_db)},
        {"pl_near_breakpoint_m", field(&SimConfig::pl_near_breakpoint_m)},
        {"pl_far_breakpoint_m", field(&SimConfig::pl_far_breakpoint_m)},
        {"pl_mid_exponent", field(&SimConfig::pl_mid_exponent)},
        {"pl_far_exponent", field(&SimConfig::pl_far_exponent)},
        {"num_best_aps", field(&SimConfig::num_best_aps)},
        {"target_q", field(&SimConfig::target_q)},
        {"d_c_s", field(&SimConfig::d_c_s)},
        {"d_ap_s", field(&SimConfig::d_ap_s)},
        {"dc_penalty", field(&SimConfig::dc_penalty)},
        {"gamma1_db", field(&SimConfig::gamma1_db)},
        {"gamma2_db", field(&SimConfig::gamma2_db)},
        {"delta1_db", field(&SimConfig::delta1_db)},
        {"delta2_db", field(&SimConfig::delta2_db)},
        {"theta_db", field(&SimConfig::theta_db)},
        {"newton_eps", field(&SimConfig::newton_eps)},
        {"f_update", field(&SimConfig::f_update)},
        {"n_fading_samples", field(&SimConfig::n_fading_samples)},
        {"slot_decimation", field(&SimConfig::slot_decimation)},
        {"n_realizations", field(&SimConfig::n_realizations)},
        {"duration_s", field(&SimConfig::duration_s)},
        {"seed", field(&SimConfig::seed)},
        {"threads", field(&SimConfig::threads)},
        {"schemes",
         [](SimConfig& c, const json& v, const std::string& key) {
             if (!v.is_array()) {
                 throw ConfigError("config key '" + key + "' must be a list of scheme ids");
             }
             c.schemes.clear();
             for (const auto& s : v) {
                 if (!s.is_string()) {
                     throw ConfigError("config key '" + key + "' must be a list of scheme ids");
                 }
                 try {
                     c.schemes.push_back(parse_scheme(s.get<std::string>()));
                 } catch (const std::invalid_argument& e) {
                     throw ConfigError(e.what());
                 }
             }
         }},
        {"se_model",
         [](SimConfig& c, const json& v, const std::string& key) {
             const auto s = get_as<std::string>(v, key);
             if (s == "fast") {
                 c.se_model = SeModel::fast;
             } else if (s == "full") {
                 c.se_model = SeModel::full;
             } else {
                 throw ConfigError("se_model must be 'fast' or 'full'");
             }
         }},
    };
    return table;
}

}  // namespace

SimConfig config_from_json(const json& j)
{
    if (!j.is_object()) {
        throw ConfigError("config must be a JSON object");
    }
    SimConfig cfg;
    for (const auto& [key, value] : j.items()) {
        const auto it = setters().find(key);
        if (it == setters().end()) {
            throw ConfigError("unknown config key '" + key + "'");
        }
        it->second(cfg, value, key);
    }
    validate(cfg);
    return cfg;
}

SimConfig load_config(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in) {
        throw ConfigError("cannot open config " + path.string());
    }
    json j;
    try {
        in >> j;
    } catch (const json::parse_error& e) {
        throw ConfigError(path.string() + ": " + e.what());
    }
    return config_from_json(j);
}

nlohmann::ordered_json config_to_json(const SimConfig& c)
{
    nlohmann::ordered_json j;
    j["area_side_m"] = c.area_side_m;
    j["num_aps"] = c.num_aps;
    j["topology_path"] = c.topology_path;
    j["num_ues"] = c.num_ues;
    j["trace_path"] = c.trace_path;
    j["ue_speed_mps"] = c.ue_speed_mps;
    j["rwp_transition_scale_m"] = c.rwp_transition_scale_m;
    j["ap_height_m"] = c.ap_height_m;
    j["ue_height_m"] = c.ue_height_m;
    j["carrier_freq_hz"] = c.carrier_freq_hz;
    j["slot_duration_s"] = c.slot_duration_s;
    j["tau_p"] = c.tau_p;
    j["tau_c"] = c.tau_c;
    j["tx_power_dbm"] = c.tx_power_dbm;
    j["bandwidth_hz"] = c.bandwidth_hz;
    j["noise_figure_db"] = c.noise_figure_db;
    j["shadowing_sigma_db"] = c.shadowing_sigma_db;
    j["pl_near_breakpoint_m"] = c.pl_near_breakpoint_m;
    j["pl_far_breakpoint_m"] = c.pl_far_breakpoint_m;
    j["pl_mid_exponent"] = c.pl_mid_exponent;
    j["pl_far_exponent"] = c.pl_far_exponent;
    j["num_best_aps"] = c.num_best_aps;
    j["target_q"] = c.target_q;
    j["d_c_s"] = c.d_c_s;
    j["d_ap_s"] = c.d_ap_s;
    j["dc_penalty"] = c.dc_penalty;
    j["gamma1_db"] = c.gamma1_db;
    j["gamma2_db"] = c.gamma2_db;
    j["delta1_db"] = c.delta1_db;
    j["delta2_db"] = c.delta2_db;
    j["theta_db"] = c.theta_db;
    j["newton_eps"] = c.newton_eps;
    j["f_update"] = c.f_update;
    auto schemes = nlohmann::ordered_json::array();
    for (Scheme s : c.schemes) {
        schemes.push_back(std::string(scheme_name(s)));
    }
    j["schemes"] = schemes;
    j["se_model"] = std::string(se_model_name(c.se_model));
    j["n_fading_samples"] = c.n_fading_samples;
    j["slot_decimation"] = c.slot_decimation;
    j["n_realizations"] = c.n_realizations;
    j["duration_s"] = c.duration_s;
    j["seed"] = c.seed;
    j["threads"] = c.threads;
    return j;
}

}  // namespace cfmm
