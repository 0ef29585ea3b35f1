#pragma once

#include <cstddef>
#include <filesystem>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "cfmm/channel.hpp"
#include "cfmm/config.hpp"
#include "cfmm/counters.hpp"
#include "cfmm/handover.hpp"
#include "cfmm/serving.hpp"

namespace cfmm {

/// Outcome of one UE under one scheme over a whole run.
struct RunMetrics {
    double se_baseline = 0.0;  ///< block-averaged SE'
    double se_mobility = 0.0;
    double h_cluster = 0.0;
    double h_ap = 0.0;
    std::size_t cluster_changes = 0;  ///< sum of N_k over all blocks
    bool outage = false;              ///< handover losses consumed the whole SE

    friend bool operator==(const RunMetrics&, const RunMetrics&) = default;
};

struct SchemeRun {
    Scheme scheme = Scheme::always;
    std::vector<RunMetrics> ues;
    OpCounters counters;
    double mean_set_size = 0.0;  ///< G averaged over blocks
    std::size_t threshold_updates = 0;

    friend bool operator==(const SchemeRun&, const SchemeRun&) = default;
};

struct RealizationResult {
    std::size_t index = 0;
    std::size_t num_aps = 0;
    std::size_t num_ues = 0;
    std::size_t num_blocks = 0;
    double q_avg = 0.0;
    std::size_t grid_dim = 0;
    bool single_cluster_warning = false;
    std::size_t clamped_pairs = 0;
    std::vector<SchemeRun> schemes;  ///< in config order

    friend bool operator==(const RealizationResult&, const RealizationResult&) = default;
};

/// Called after every scheme has been applied for block n (1-based) with the
/// SNR matrix it saw and the resulting cooperation matrix.
using BlockObserver =
    std::function<void(Scheme, std::size_t block, const Matrix& beta, const CooperationMatrix& serving)>;

RealizationResult run_realization(const SimConfig& cfg, std::size_t index, const BlockObserver& observer = {});

/// Nearest-rank percentile: the ceil(p/100 N)-th smallest value (rank >= 1).
double percentile(std::span<const double> values, double p);

struct CdfPoint {
    double se = 0.0;
    double cdf = 0.0;
};

/// Empirical CDF of `values`, one point per sample.
std::vector<CdfPoint> empirical_cdf(std::span<const double> values);

struct SchemeSummary {
    Scheme scheme = Scheme::always;
    std::vector<double> se_mobility;  ///< pooled over realizations, realization-major
    std::vector<double> se_baseline;
    double median_se_mobility = 0.0;
    double p95_se_mobility = 0.0;
    double p5_se_mobility = 0.0;  ///< worst-served UEs
    double mean_se_mobility = 0.0;
    double median_se_baseline = 0.0;
    double p95_se_baseline = 0.0;
    double p5_se_baseline = 0.0;
    double mean_se_baseline = 0.0;
    double mean_h_cluster = 0.0;
    double mean_h_ap = 0.0;
    double mean_fairness = 0.0;  ///< Jain index of per-UE se_mobility, averaged over realizations
    double mean_set_size = 0.0;
    double outage_fraction = 0.0;
    std::size_t threshold_updates = 0;
    OpCounters counters;
};

struct RealizationFailure {
    std::size_t index = 0;
    std::string message;
};

struct AggregateReport {
    SimConfig config;
    std::vector<RealizationResult> realizations;  ///< successful ones, ascending index
    std::vector<RealizationFailure> failures;
    std::vector<SchemeSummary> schemes;
};

/// Aggregates realizations given in ascending index order.
AggregateReport aggregate(const SimConfig& cfg, std::vector<RealizationResult> realizations,
                          std::vector<RealizationFailure> failures = {});

/// Runs cfg.n_realizations realizations on `cfg.threads` workers. Throws
/// std::runtime_error when every realization failed.
AggregateReport run_campaign(const SimConfig& cfg);

void emit_outputs(const AggregateReport& report, const std::filesystem::path& out_dir);

}  // namespace cfmm
