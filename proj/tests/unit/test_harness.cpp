#include <doctest.h>

#include <cmath>
#include <fstream>
#include <map>
#include <numeric>
#include <sstream>

#include "cfmm/csv.hpp"
#include "cfmm/error.hpp"
#include "cfmm/harness.hpp"
#include "test_util.hpp"

using namespace cfmm;

namespace {

SimConfig small_config()
{
    SimConfig c;
    c.area_side_m = 300.0;
    c.num_aps = 60;
    c.num_ues = 6;
    c.target_q = 10.0;
    c.num_best_aps = 4;
    c.ue_speed_mps = 3.6;
    c.duration_s = 2.0;
    c.n_realizations = 3;
    c.threads = 1;
    c.seed = 17;
    return c;
}

std::string slurp(const std::filesystem::path& p)
{
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

}  // namespace

TEST_CASE("config parsing and validation")
{
    const SimConfig d = config_from_json(nlohmann::json::object());
    CHECK(d.num_aps == 308);
    CHECK(d.d_c_s == 0.1);
    CHECK(d.d_ap_s == 0.02);
    CHECK(d.num_blocks() == 1500);
    CHECK(d.schemes.size() == 5);

    CHECK_THROWS_AS(config_from_json({{"bogus_key", 1}}), ConfigError);
    CHECK_THROWS_AS(config_from_json({{"tau_p", 200}}), ConfigError);
    CHECK_THROWS_AS(config_from_json({{"duration_s", 0.03}}), ConfigError);
    CHECK_THROWS_AS(config_from_json({{"schemes", {"always", "pomdp"}}}), ConfigError);
    CHECK_THROWS_AS(config_from_json({{"num_aps", "many"}}), ConfigError);
    CHECK_THROWS_AS(config_from_json({{"num_aps", -3}}), ConfigError);
    CHECK_THROWS_AS(config_from_json({{"se_model", "exact"}}), ConfigError);
    CHECK_THROWS_AS(config_from_json(nlohmann::json::array()), ConfigError);

    const SimConfig c = config_from_json({{"duration_s", 375.0}, {"se_model", "full"}, {"schemes", {"upa"}}});
    CHECK(c.num_blocks() == 18750);
    CHECK(c.se_model == SeModel::full);
    CHECK(c.schemes == std::vector<Scheme>{Scheme::upa});

    // The echo parses back to the same config.
    const auto echo = config_to_json(c);
    CHECK(config_to_json(config_from_json(nlohmann::json::parse(echo.dump()))) == echo);
}

TEST_CASE("nearest-rank percentiles")
{
    std::vector<double> v(100);
    std::iota(v.begin(), v.end(), 1.0);
    CHECK(percentile(v, 50.0) == 50.0);
    CHECK(percentile(v, 95.0) == 95.0);
    CHECK(percentile(v, 5.0) == 5.0);
    CHECK(percentile(v, 100.0) == 100.0);
    CHECK(percentile(std::vector<double>{7.0}, 50.0) == 7.0);
    CHECK(percentile(std::vector<double>{3.0, 1.0, 2.0}, 50.0) == 2.0);
    CHECK_THROWS_AS(percentile(std::vector<double>{}, 50.0), std::invalid_argument);
}

TEST_CASE("empirical CDF is monotone and ends at one")
{
    const auto cdf = empirical_cdf(std::vector<double>{3.0, 1.0, 2.0, 2.0});
    REQUIRE(cdf.size() == 4);
    for (std::size_t i = 1; i < cdf.size(); ++i) {
        CHECK(cdf[i].se >= cdf[i - 1].se);
        CHECK(cdf[i].cdf > cdf[i - 1].cdf);
    }
    CHECK(cdf.back().cdf == 1.0);
}

TEST_CASE("a realization is a pure function of seed and index")
{
    const SimConfig c = small_config();
    const auto a = run_realization(c, 1);
    const auto b = run_realization(c, 1);
    const auto other = run_realization(c, 2);
    CHECK(a == b);
    CHECK_FALSE(a == other);
    CHECK(a.num_blocks == 100);
    CHECK(a.schemes.size() == 5);
    for (const auto& run : a.schemes) {
        CHECK(run.ues.size() == 6);
        for (const auto& m : run.ues) {
            CHECK(m.se_baseline > 0.0);
            CHECK(m.se_mobility <= m.se_baseline);
            CHECK(m.h_ap == doctest::Approx(a.q_avg * m.h_cluster));
        }
    }
}

TEST_CASE("all schemes see the same SNRs and keep whole clusters")
{
    const SimConfig c = small_config();
    std::map<std::size_t, Matrix> first_seen;
    bool identical = true;
    std::size_t calls = 0;
    const auto observer = [&](Scheme, std::size_t block, const Matrix& beta, const CooperationMatrix& d) {
        ++calls;
        auto [it, fresh] = first_seen.emplace(block, beta);
        if (!fresh && !(it->second == beta)) {
            identical = false;
        }
        CHECK(d.num_ues() == beta.cols());
    };
    const auto r = run_realization(c, 0, observer);
    CHECK(identical);
    CHECK(calls == 5 * r.num_blocks);
}

TEST_CASE("static users never hand over after attach")
{
    SimConfig c = small_config();
    c.ue_speed_mps = 0.0;
    const auto r = run_realization(c, 0);
    for (const auto& run : r.schemes) {
        for (const auto& m : run.ues) {
            CHECK(m.cluster_changes == 0);
            CHECK(m.h_cluster == 0.0);
            CHECK(m.se_mobility == m.se_baseline);
        }
    }
}

TEST_CASE("always-handover hands over most")
{
    SimConfig c = small_config();
    c.duration_s = 10.0;
    c.ue_speed_mps = 15.0;
    const auto r = run_realization(c, 0);
    std::size_t always = 0;
    for (const auto& m : r.schemes[0].ues) {
        always += m.cluster_changes;
    }
    for (const auto& run : r.schemes) {
        std::size_t n = 0;
        for (const auto& m : run.ues) {
            n += m.cluster_changes;
        }
        CHECK(n <= always);
    }
}

TEST_CASE("campaign aggregation")
{
    SimConfig c = small_config();
    c.n_realizations = 1;
    const auto one = run_campaign(c);
    const auto direct = run_realization(c, 0);
    REQUIRE(one.schemes.size() == 5);
    for (std::size_t s = 0; s < 5; ++s) {
        std::vector<double> expect;
        for (const auto& m : direct.schemes[s].ues) {
            expect.push_back(m.se_mobility);
        }
        CHECK(one.schemes[s].se_mobility == expect);
        CHECK(one.schemes[s].median_se_mobility == percentile(expect, 50.0));
    }
}

TEST_CASE("serial and parallel campaigns agree")
{
    SimConfig c = small_config();
    c.n_realizations = 4;
    c.threads = 1;
    const auto serial = run_campaign(c);
    c.threads = 3;
    const auto parallel = run_campaign(c);
    CHECK(serial.realizations == parallel.realizations);
    for (std::size_t s = 0; s < serial.schemes.size(); ++s) {
        CHECK(serial.schemes[s].se_mobility == parallel.schemes[s].se_mobility);
        CHECK(serial.schemes[s].counters == parallel.schemes[s].counters);
    }
}

TEST_CASE("outputs are written and reproducible")
{
    SimConfig c = small_config();
    c.schemes = {Scheme::always, Scheme::fairdiff};
    const auto dir_a = std::filesystem::temp_directory_path() / "cfmm_unit" / "out_a";
    const auto dir_b = std::filesystem::temp_directory_path() / "cfmm_unit" / "out_b";
    std::filesystem::remove_all(dir_a);
    std::filesystem::remove_all(dir_b);
    emit_outputs(run_campaign(c), dir_a);
    emit_outputs(run_campaign(c), dir_b);

    for (const char* name : {"cdf_always.csv", "cdf_fairdiff.csv", "per_ue.csv", "summary.json"}) {
        CAPTURE(name);
        REQUIRE(std::filesystem::exists(dir_a / name));
        CHECK(slurp(dir_a / name) == slurp(dir_b / name));
    }
    CHECK_FALSE(std::filesystem::exists(dir_a / "cdf_upa.csv"));

    const auto cdf = read_csv(dir_a / "cdf_always.csv", {"se_bits_s_hz", "cdf"});
    REQUIRE(cdf.rows.size() == 18);
    double prev = 0.0;
    for (const auto& row : cdf.rows) {
        CHECK(row.number(1) > prev);
        prev = row.number(1);
    }
    CHECK(prev == 1.0);

    const auto per_ue = read_csv(dir_a / "per_ue.csv",
                                 {"realization", "ue", "scheme", "se_mobility", "se_baseline", "h_cluster", "h_ap"});
    CHECK(per_ue.rows.size() == 3 * 6 * 2);

    const auto summary = nlohmann::json::parse(slurp(dir_a / "summary.json"));
    CHECK(summary["seed"] == 17);
    CHECK(summary["schemes"].contains("fairdiff"));
    CHECK(summary["schemes"]["always"]["counters"]["decisions"] == 3 * 6 * 99);
}

TEST_CASE("empty scheme list emits only the summary")
{
    SimConfig c = small_config();
    c.schemes.clear();
    const auto dir = std::filesystem::temp_directory_path() / "cfmm_unit" / "out_empty";
    std::filesystem::remove_all(dir);
    emit_outputs(run_campaign(c), dir);
    CHECK(std::filesystem::exists(dir / "summary.json"));
    CHECK_FALSE(std::filesystem::exists(dir / "per_ue.csv"));
    const auto summary = nlohmann::json::parse(slurp(dir / "summary.json"));
    CHECK(summary.contains("config"));
    CHECK_FALSE(summary.contains("schemes"));
}

TEST_CASE("full link model runs end to end")
{
    SimConfig c = small_config();
    c.se_model = SeModel::full;
    c.num_aps = 30;
    c.num_ues = 4;
    c.duration_s = 0.2;
    c.n_fading_samples = 20;
    c.schemes = {Scheme::always, Scheme::nearopt};
    const auto r = run_realization(c, 0);
    const auto again = run_realization(c, 0);
    CHECK(r == again);
    for (const auto& run : r.schemes) {
        for (const auto& m : run.ues) {
            CHECK(std::isfinite(m.se_baseline));
            CHECK(m.se_baseline > 0.0);
        }
    }
}

TEST_CASE("file-based topology and traces")
{
    std::ostringstream aps;
    aps << "x_m,y_m,z_m\n";
    for (int i = 0; i < 16; ++i) {
        aps << 25 + 50 * (i % 4) << ',' << 25 + 50 * (i / 4) << ",10\n";
    }
    const auto ap_path = write_temp("harness_aps.csv", aps.str());
    const auto trace_path = write_temp("harness_trace.csv",
                                       "ue_id,t_s,x_m,y_m\n"
                                       "0,0,10,10\n0,2,190,10\n"
                                       "1,0,100,100\n1,1,100,150\n");
    SimConfig c;
    c.area_side_m = 200.0;
    c.topology_path = ap_path.string();
    c.trace_path = trace_path.string();
    c.target_q = 4.0;
    c.num_best_aps = 2;
    c.duration_s = 2.0;
    c.n_realizations = 2;
    c.threads = 1;
    const auto report = run_campaign(c);
    REQUIRE(report.realizations.size() == 2);
    CHECK(report.realizations[0].num_aps == 16);
    CHECK(report.realizations[0].num_ues == 2);
    CHECK(report.realizations[0].grid_dim == 2);
    // UE 0 crosses from the left clusters to the right ones.
    CHECK(report.realizations[0].schemes[0].ues[0].cluster_changes > 0);

    c.num_best_aps = 40;
    CHECK_THROWS_AS(run_campaign(c), std::runtime_error);
}
