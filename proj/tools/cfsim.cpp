// Command-line front end: run a campaign or check a config file.

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "cfmm/config.hpp"
#include "cfmm/error.hpp"
#include "cfmm/harness.hpp"

namespace {

constexpr int exit_config_error = 2;
constexpr int exit_runtime_error = 3;

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Discrete-block simulator for mobile cell-free massive MIMO handover"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out_dir;
    std::optional<std::uint64_t> seed;
    std::optional<std::size_t> realizations;
    std::optional<std::string> schemes;
    std::optional<double> duration;
    std::optional<std::size_t> threads;

    auto* simulate = app.add_subcommand("simulate", "Run a Monte Carlo campaign");
    simulate->add_option("--config", config_path, "JSON config")->required();
    simulate->add_option("--out", out_dir, "Output directory")->required();
    simulate->add_option("--seed", seed, "Master seed");
    simulate->add_option("--realizations", realizations, "Number of realizations");
    simulate->add_option("--schemes", schemes, "Comma-separated scheme ids");
    simulate->add_option("--duration-s", duration, "Mobility period per realization");
    simulate->add_option("--threads", threads, "Worker threads (0 = all cores)");

    auto* check = app.add_subcommand("validate-config", "Parse and validate a config file");
    check->add_option("--config", config_path, "JSON config")->required();

    CLI11_PARSE(app, argc, argv);

    cfmm::SimConfig cfg;
    try {
        auto j = nlohmann::json::object();
        {
            std::ifstream in(config_path);
            if (!in) {
                throw cfmm::ConfigError("cannot open config " + config_path);
            }
            try {
                in >> j;
            } catch (const nlohmann::json::parse_error& e) {
                throw cfmm::ConfigError(config_path + ": " + e.what());
            }
        }
        if (!j.is_object()) {
            throw cfmm::ConfigError(config_path + ": config must be a JSON object");
        }
        if (seed) {
            j["seed"] = *seed;
        }
        if (realizations) {
            j["n_realizations"] = *realizations;
        }
        if (duration) {
            j["duration_s"] = *duration;
        }
        if (threads) {
            j["threads"] = *threads;
        }
        if (schemes) {
            auto list = nlohmann::json::array();
            std::stringstream ss(*schemes);
            for (std::string id; std::getline(ss, id, ',');) {
                if (!id.empty()) {
                    list.push_back(id);
                }
            }
            j["schemes"] = list;
        }
        cfg = cfmm::config_from_json(j);
    } catch (const cfmm::ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return exit_config_error;
    }

    if (check->parsed()) {
        std::cout << "ok: " << cfg.num_blocks() << " blocks per realization, " << cfg.n_realizations
                  << " realizations\n";
        return 0;
    }

    try {
        const auto report = cfmm::run_campaign(cfg);
        for (const auto& f : report.failures) {
            std::cerr << "warning: " << f.message << '\n';
        }
        cfmm::emit_outputs(report, out_dir);
        for (const auto& s : report.schemes) {
            std::cout << cfmm::scheme_name(s.scheme) << ": median SE " << s.median_se_mobility
                      << ", mean h_cluster " << s.mean_h_cluster << "/s\n";
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return exit_runtime_error;
    }
    return 0;
}
