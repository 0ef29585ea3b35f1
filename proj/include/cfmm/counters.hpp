#pragma once

#include <cstdint>

namespace cfmm {

enum class Counter {
    snr_sums,           ///< evaluations of a per-UE total sum_m beta_m D_m
    snr_sum_terms,      ///< AP terms visited by those sums (M per sum)
    newton_iterations,
    fairness_evaluations,
    fairness_terms,     ///< AP-UE terms behind each fairness evaluation (K M)
    decisions,          ///< per-UE handover decisions taken after attach
};

/// Monotone operation counters for one scheme. Merging is associative.
struct OpCounters {
    std::uint64_t snr_sums = 0;
    std::uint64_t snr_sum_terms = 0;
    std::uint64_t newton_iterations = 0;
    std::uint64_t fairness_evaluations = 0;
    std::uint64_t fairness_terms = 0;
    std::uint64_t decisions = 0;

    OpCounters& operator+=(const OpCounters& o)
    {
        snr_sums += o.snr_sums;
        snr_sum_terms += o.snr_sum_terms;
        newton_iterations += o.newton_iterations;
        fairness_evaluations += o.fairness_evaluations;
        fairness_terms += o.fairness_terms;
        decisions += o.decisions;
        return *this;
    }

    /// SNR-sum terms plus fairness terms per decision: the empirical counterpart
    /// of the per-decision complexity of each scheme.
    double terms_per_decision() const
    {
        return decisions == 0 ? 0.0
                              : static_cast<double>(snr_sum_terms + fairness_terms) /
                                    static_cast<double>(decisions);
    }

    friend bool operator==(const OpCounters&, const OpCounters&) = default;
};

inline void count_op(OpCounters& c, Counter id, std::uint64_t amount = 1)
{
    switch (id) {
    case Counter::snr_sums: c.snr_sums += amount; break;
    case Counter::snr_sum_terms: c.snr_sum_terms += amount; break;
    case Counter::newton_iterations: c.newton_iterations += amount; break;
    case Counter::fairness_evaluations: c.fairness_evaluations += amount; break;
    case Counter::fairness_terms: c.fairness_terms += amount; break;
    case Counter::decisions: c.decisions += amount; break;
    }
}

}  // namespace cfmm
