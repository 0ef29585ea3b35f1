#include "cfmm/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <fstream>
#include <mutex>
#include <optional>
#include <stdexcept>
#include <thread>

#include <json.hpp>

#include "cfmm/csv.hpp"
#include "cfmm/mobility.hpp"
#include "cfmm/perf.hpp"
#include "cfmm/rng.hpp"
#include "cfmm/topology.hpp"

namespace cfmm {

namespace {

Topology build_topology(const SimConfig& cfg, std::size_t index)
{
    Topology topo;
    if (cfg.topology_path.empty()) {
        Rng rng = substream(cfg.seed, {index, stream::topology});
        topo = generate_uniform_topology(cfg.area_side_m, cfg.num_aps, cfg.ap_height_m, rng);
    } else {
        topo = load_topology(cfg.topology_path, cfg.area_side_m);
    }
    return assign_square_clusters(std::move(topo), cfg.target_q);
}

std::vector<UETrace> build_traces(const SimConfig& cfg, std::size_t index)
{
    const std::size_t blocks = cfg.num_blocks();
    if (!cfg.trace_path.empty()) {
        return load_traces(cfg.trace_path, cfg.block_duration_s(), cfg.area_side_m);
    }
    std::vector<UETrace> traces;
    traces.reserve(cfg.num_ues);
    for (std::size_t k = 0; k < cfg.num_ues; ++k) {
        Rng rng = substream(cfg.seed, {index, stream::trace, k});
        traces.push_back(generate_rwp_trace(cfg.area_side_m, cfg.ue_speed_mps, blocks, cfg.block_duration_s(),
                                            cfg.rwp_transition_scale_m, rng));
    }
    return traces;
}

struct SchemeTrack {
    SchemeState state;
    CooperationMatrix serving;
    std::vector<double> se_sum;                       // per UE, summed over blocks
    std::vector<std::vector<std::size_t>> n_changed;  // per UE, per block
    double set_size_sum = 0.0;
};

}  // namespace

RealizationResult run_realization(const SimConfig& cfg, std::size_t index, const BlockObserver& observer)
{
    try {
        const Topology topo = build_topology(cfg, index);
        const std::vector<UETrace> traces = build_traces(cfg, index);
        const std::size_t m_count = topo.num_aps();
        const std::size_t k_count = traces.size();
        const std::size_t blocks = cfg.num_blocks();
        if (cfg.num_best_aps > m_count) {
            throw std::invalid_argument("num_best_aps exceeds the number of APs");
        }

        Rng shadow_rng = substream(cfg.seed, {index, stream::shadowing});
        const Matrix shadow = draw_shadowing(m_count, k_count, shadow_rng);
        const PathLossParams pl = cfg.path_loss_params();
        const SchemeParams params = cfg.scheme_params();
        const double p = cfg.tx_power_w();
        const double n0 = cfg.noise_w();
        const auto samples = data_slot_samples(cfg.tau_p, cfg.tau_c, cfg.slot_decimation);

        std::vector<SchemeTrack> tracks;
        for (Scheme s : cfg.schemes) {
            SchemeTrack t;
            t.state.scheme = s;
            t.state.fairdiff.f_update = cfg.f_update;
            t.serving = CooperationMatrix(m_count, k_count);
            t.se_sum.assign(k_count, 0.0);
            t.n_changed.assign(k_count, std::vector<std::size_t>(blocks, 0));
            tracks.push_back(std::move(t));
        }

        RealizationResult result;
        result.index = index;
        result.num_aps = m_count;
        result.num_ues = k_count;
        result.num_blocks = blocks;
        result.q_avg = topo.q_avg;
        result.grid_dim = topo.grid_dim;
        result.single_cluster_warning = topo.single_cluster_warning;

        std::vector<Position2> positions(k_count);
        Matrix beta_prev;
        for (std::size_t n = 1; n <= blocks; ++n) {
            for (std::size_t k = 0; k < k_count; ++k) {
                positions[k] = traces[k].at(n - 1);
            }
            const LargeScale ls = snr_matrix(topo, positions, p, n0, shadow, pl);
            result.clamped_pairs += ls.clamped_pairs;

            CooperationMatrix candidate(m_count, k_count);
            for (std::size_t k = 0; k < k_count; ++k) {
                candidate.columns[k] = candidate_set(ls.beta.col(k), topo, cfg.num_best_aps);
            }

            std::optional<FadingState> fading;
            if (cfg.se_model == SeModel::full) {
                std::vector<Rng> rngs;
                for (std::size_t k = 0; k < k_count; ++k) {
                    rngs.push_back(substream(cfg.seed, {index, stream::fading, n, k}));
                }
                fading = draw_fading_state(ls, p, n0, rngs);
            }

            for (SchemeTrack& t : tracks) {
                BlockView view;
                view.beta_prev = n == 1 ? nullptr : &beta_prev;
                view.beta_cur = &ls.beta;
                view.serving = &t.serving;
                view.candidate = &candidate;
                view.first_block = n == 1;
                const BlockDecision decision = decide_block(view, params, t.state);
                CooperationMatrix next = apply_decision(t.serving, candidate, decision.handover);
                if (n > 1) {
                    for (std::size_t k = 0; k < k_count; ++k) {
                        if (decision.handover[k]) {
                            t.n_changed[k][n - 1] = count_cluster_changes(t.serving.columns[k], next.columns[k], topo);
                        }
                    }
                }
                t.serving = std::move(next);
                t.set_size_sum += t.serving.average_set_size();

                if (cfg.se_model == SeModel::fast) {
                    std::vector<double> sinr(samples.size());
                    for (std::size_t k = 0; k < k_count; ++k) {
                        std::fill(sinr.begin(), sinr.end(), sinr_fast(ls.beta.col(k), t.serving.columns[k]));
                        t.se_sum[k] += baseline_se_block(sinr, samples, cfg.tau_c);
                    }
                } else {
                    const CombinerSet comb = combine_precode(fading->estimate, t.serving, p, n0);
                    std::vector<std::vector<double>> sinr(k_count, std::vector<double>(samples.size()));
                    std::vector<double> rho(k_count);
                    for (std::size_t j = 0; j < samples.size(); ++j) {
                        std::vector<Rng> rngs;
                        for (std::size_t k = 0; k < k_count; ++k) {
                            AgingProfile prof{traces[k].speed, cfg.carrier_freq_hz, cfg.slot_duration_s, cfg.tau_p};
                            rho[k] = aging_coefficient(prof, samples[j].slot);
                            rngs.push_back(substream(cfg.seed, {index, stream::fading_samples, n,
                                                                static_cast<std::uint64_t>(samples[j].slot), k}));
                        }
                        const auto s = sinr_full(*fading, comb, t.serving, rho, direction_of_block(n),
                                                 cfg.n_fading_samples, p, n0, rngs);
                        for (std::size_t k = 0; k < k_count; ++k) {
                            sinr[k][j] = s[k];
                        }
                    }
                    for (std::size_t k = 0; k < k_count; ++k) {
                        t.se_sum[k] += baseline_se_block(sinr[k], samples, cfg.tau_c);
                    }
                }
                if (observer) {
                    observer(t.state.scheme, n, ls.beta, t.serving);
                }
            }
            beta_prev = ls.beta;
        }

        const double duration = static_cast<double>(blocks) * cfg.block_duration_s();
        for (SchemeTrack& t : tracks) {
            SchemeRun run;
            run.scheme = t.state.scheme;
            run.counters = t.state.counters;
            run.mean_set_size = t.set_size_sum / static_cast<double>(blocks);
            run.threshold_updates = t.state.fairdiff.threshold_updates;
            for (std::size_t k = 0; k < k_count; ++k) {
                RunMetrics m;
                m.se_baseline = t.se_sum[k] / static_cast<double>(blocks);
                const HandoverRates rates = handover_rates(t.n_changed[k], topo.q_avg, duration);
                m.h_cluster = rates.h_cluster;
                m.h_ap = rates.h_ap;
                for (std::size_t c : t.n_changed[k]) {
                    m.cluster_changes += c;
                }
                const MobilitySe se = mobility_aware_se(m.se_baseline, m.h_cluster, m.h_ap, cfg.d_c_s, cfg.d_ap_s);
                m.se_mobility = se.value;
                m.outage = se.clamped;
                run.ues.push_back(m);
            }
            result.schemes.push_back(std::move(run));
        }
        return result;
    } catch (const std::exception& e) {
        throw std::runtime_error("realization " + std::to_string(index) + ": " + e.what());
    }
}

double percentile(std::span<const double> values, double p)
{
    if (values.empty()) {
        throw std::invalid_argument("percentile of an empty sample");
    }
    if (!(p > 0.0 && p <= 100.0)) {
        throw std::invalid_argument("percentile rank must lie in (0, 100]");
    }
    std::vector<double> sorted(values.begin(), values.end());
    std::sort(sorted.begin(), sorted.end());
    const double n = static_cast<double>(sorted.size());
    // Guard against p/100 * N landing a hair above an integer.
    const double exact = p / 100.0 * n;
    const double nearest = std::round(exact);
    const double rank = std::abs(exact - nearest) < 1e-9 ? nearest : std::ceil(exact);
    const auto idx = static_cast<std::size_t>(std::max(rank, 1.0)) - 1;
    return sorted[std::min(idx, sorted.size() - 1)];
}

std::vector<CdfPoint> empirical_cdf(std::span<const double> values)
{
    std::vector<double> sorted(values.begin(), values.end());
    std::sort(sorted.begin(), sorted.end());
    std::vector<CdfPoint> out;
    out.reserve(sorted.size());
    const double n = static_cast<double>(sorted.size());
    for (std::size_t i = 0; i < sorted.size(); ++i) {
        out.push_back({sorted[i], static_cast<double>(i + 1) / n});
    }
    return out;
}

namespace {

double mean_of(std::span<const double> v)
{
    double s = 0.0;
    for (double x : v) {
        s += x;
    }
    return v.empty() ? 0.0 : s / static_cast<double>(v.size());
}

}  // namespace

AggregateReport aggregate(const SimConfig& cfg, std::vector<RealizationResult> realizations,
                          std::vector<RealizationFailure> failures)
{
    AggregateReport report;
    report.config = cfg;
    report.failures = std::move(failures);
    report.realizations = std::move(realizations);
    if (report.realizations.empty()) {
        return report;
    }

    for (std::size_t s = 0; s < cfg.schemes.size(); ++s) {
        SchemeSummary sum;
        sum.scheme = cfg.schemes[s];
        std::vector<double> h_cluster;
        std::vector<double> h_ap;
        std::vector<double> fairness;
        std::vector<double> set_size;
        std::size_t outages = 0;
        for (const auto& r : report.realizations) {
            const SchemeRun& run = r.schemes.at(s);
            std::vector<double> se_real;
            for (const RunMetrics& m : run.ues) {
                sum.se_mobility.push_back(m.se_mobility);
                sum.se_baseline.push_back(m.se_baseline);
                se_real.push_back(m.se_mobility);
                h_cluster.push_back(m.h_cluster);
                h_ap.push_back(m.h_ap);
                outages += m.outage ? 1 : 0;
            }
            fairness.push_back(jain_index(se_real).value);
            set_size.push_back(run.mean_set_size);
            sum.counters += run.counters;
            sum.threshold_updates += run.threshold_updates;
        }
        if (!sum.se_mobility.empty()) {
            sum.median_se_mobility = percentile(sum.se_mobility, 50.0);
            sum.p95_se_mobility = percentile(sum.se_mobility, 95.0);
            sum.p5_se_mobility = percentile(sum.se_mobility, 5.0);
            sum.median_se_baseline = percentile(sum.se_baseline, 50.0);
            sum.p95_se_baseline = percentile(sum.se_baseline, 95.0);
            sum.p5_se_baseline = percentile(sum.se_baseline, 5.0);
            sum.outage_fraction = static_cast<double>(outages) / static_cast<double>(sum.se_mobility.size());
        }
        sum.mean_se_mobility = mean_of(sum.se_mobility);
        sum.mean_se_baseline = mean_of(sum.se_baseline);
        sum.mean_h_cluster = mean_of(h_cluster);
        sum.mean_h_ap = mean_of(h_ap);
        sum.mean_fairness = mean_of(fairness);
        sum.mean_set_size = mean_of(set_size);
        report.schemes.push_back(std::move(sum));
    }
    return report;
}

AggregateReport run_campaign(const SimConfig& cfg)
{
    validate(cfg);
    const std::size_t n = cfg.n_realizations;
    std::vector<std::optional<RealizationResult>> slots(n);
    std::vector<std::string> errors(n);

    std::size_t workers = cfg.threads;
    if (workers == 0) {
        workers = std::max(1u, std::thread::hardware_concurrency());
    }
    workers = std::min(workers, n);

    std::atomic<std::size_t> next{0};
    auto work = [&] {
        for (std::size_t i = next++; i < n; i = next++) {
            try {
                slots[i] = run_realization(cfg, i);
            } catch (const std::exception& e) {
                errors[i] = e.what();
            }
        }
    };
    if (workers <= 1) {
        work();
    } else {
        std::vector<std::jthread> pool;
        for (std::size_t w = 0; w < workers; ++w) {
            pool.emplace_back(work);
        }
    }

    std::vector<RealizationResult> ok;
    std::vector<RealizationFailure> failed;
    for (std::size_t i = 0; i < n; ++i) {
        if (slots[i]) {
            ok.push_back(std::move(*slots[i]));
        } else {
            failed.push_back({i, errors[i]});
        }
    }
    if (ok.empty()) {
        throw std::runtime_error("no realization succeeded; first error: " + failed.front().message);
    }
    return aggregate(cfg, std::move(ok), std::move(failed));
}

namespace {

std::ofstream open_out(const std::filesystem::path& path)
{
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw std::runtime_error("cannot write " + path.string());
    }
    return out;
}

void close_out(std::ofstream& out, const std::filesystem::path& path)
{
    out.close();
    if (!out) {
        throw std::runtime_error("error writing " + path.string());
    }
}

nlohmann::ordered_json counters_json(const OpCounters& c)
{
    nlohmann::ordered_json j;
    j["snr_sums"] = c.snr_sums;
    j["snr_sum_terms"] = c.snr_sum_terms;
    j["newton_iterations"] = c.newton_iterations;
    j["fairness_evaluations"] = c.fairness_evaluations;
    j["fairness_terms"] = c.fairness_terms;
    j["decisions"] = c.decisions;
    j["terms_per_decision"] = c.terms_per_decision();
    return j;
}

}  // namespace

void emit_outputs(const AggregateReport& report, const std::filesystem::path& out_dir)
{
    std::error_code ec;
    std::filesystem::create_directories(out_dir, ec);
    if (ec) {
        throw std::runtime_error("cannot create " + out_dir.string() + ": " + ec.message());
    }

    for (const SchemeSummary& s : report.schemes) {
        const auto path = out_dir / ("cdf_" + std::string(scheme_name(s.scheme)) + ".csv");
        auto out = open_out(path);
        out << "se_bits_s_hz,cdf\n";
        for (const CdfPoint& pt : empirical_cdf(s.se_mobility)) {
            out << format_double(pt.se) << ',' << format_double(pt.cdf) << '\n';
        }
        close_out(out, path);
    }

    if (!report.schemes.empty()) {
        const auto path = out_dir / "per_ue.csv";
        auto out = open_out(path);
        out << "realization,ue,scheme,se_mobility,se_baseline,h_cluster,h_ap\n";
        for (const RealizationResult& r : report.realizations) {
            for (std::size_t k = 0; k < r.num_ues; ++k) {
                for (const SchemeRun& run : r.schemes) {
                    const RunMetrics& m = run.ues[k];
                    out << r.index << ',' << k << ',' << scheme_name(run.scheme) << ','
                        << format_double(m.se_mobility) << ',' << format_double(m.se_baseline) << ','
                        << format_double(m.h_cluster) << ',' << format_double(m.h_ap) << '\n';
                }
            }
        }
        close_out(out, path);
    }

    nlohmann::ordered_json j;
    j["seed"] = report.config.seed;
    j["config"] = config_to_json(report.config);
    j["realizations_succeeded"] = report.realizations.size();
    auto failures = nlohmann::ordered_json::array();
    for (const auto& f : report.failures) {
        failures.push_back({{"realization", f.index}, {"error", f.message}});
    }
    j["realizations_failed"] = failures;
    if (!report.realizations.empty()) {
        const RealizationResult& first = report.realizations.front();
        j["topology"] = {{"num_aps", first.num_aps},
                         {"grid_dim", first.grid_dim},
                         {"q_avg", first.q_avg},
                         {"single_cluster_warning", first.single_cluster_warning}};
        j["num_blocks"] = first.num_blocks;
    }
    if (!report.schemes.empty()) {
        j["cdf_pooling"] = "per-UE samples pooled across realizations";
        j["percentile_method"] = "nearest-rank";
        nlohmann::ordered_json schemes;
        for (const SchemeSummary& s : report.schemes) {
            nlohmann::ordered_json e;
            e["median_se_mobility"] = s.median_se_mobility;
            e["p95_se_mobility"] = s.p95_se_mobility;
            e["p5_se_mobility"] = s.p5_se_mobility;
            e["mean_se_mobility"] = s.mean_se_mobility;
            e["median_se_baseline"] = s.median_se_baseline;
            e["p95_se_baseline"] = s.p95_se_baseline;
            e["p5_se_baseline"] = s.p5_se_baseline;
            e["mean_se_baseline"] = s.mean_se_baseline;
            e["mean_h_cluster"] = s.mean_h_cluster;
            e["mean_h_ap"] = s.mean_h_ap;
            e["mean_fairness"] = s.mean_fairness;
            e["mean_serving_set_size"] = s.mean_set_size;
            e["outage_fraction"] = s.outage_fraction;
            e["threshold_updates"] = s.threshold_updates;
            e["counters"] = counters_json(s.counters);
            schemes[std::string(scheme_name(s.scheme))] = e;
        }
        j["schemes"] = schemes;
    }
    const auto path = out_dir / "summary.json";
    auto out = open_out(path);
    out << j.dump(2) << '\n';
    close_out(out, path);
}

}  // namespace cfmm
