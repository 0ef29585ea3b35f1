#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "cfmm/channel.hpp"
#include "cfmm/counters.hpp"
#include "cfmm/serving.hpp"

namespace cfmm {

enum class Scheme { always, nearopt, fairdiff, hysteresis, upa };

Scheme parse_scheme(std::string_view id);
std::string_view scheme_name(Scheme s);
std::vector<Scheme> all_schemes();

/// Total serving SNRs of one UE (linear).
struct SnrSnapshot {
    double s_bef = 0.0;  ///< previous set, previous SNRs
    double s_cur = 0.0;  ///< previous set, current SNRs
    double s_new = 0.0;  ///< candidate set, current SNRs
};

/// (sum D beta) / (sum beta - sum D beta + 1).
double simplified_sinr(std::span<const double> beta_col, const ServingColumn& d_col);

// ---------------------------------------------------------------------------
// nearOpt

struct OptimizerInputs {
    double a = 0.0;         ///< simplified SINR before handover
    double b = 0.0;         ///< simplified SINR after handover
    double d_c = 0.1;       ///< dimensionless handover penalty
    int tau_p = 10;
    int tau_c = 200;
};

/// Relaxed per-block objective f(x) = (tau_c - tau_p)/tau_c log2(A + x(B - A) + 1)(1 - d_C x)
/// and its first two derivatives.
struct RelaxedObjective {
    explicit RelaxedObjective(const OptimizerInputs& in);

    double value(double x) const;
    double d1(double x) const;
    double d2(double x) const;
    /// x below which A + x(B - A) + 1 <= 0 (or -inf when B == A).
    double domain_floor() const;

private:
    OptimizerInputs in_;
    double scale_;
};

enum class NewtonOutcome {
    converged,       ///< relaxed root found
    b_not_above_a,   ///< B <= A (within 1e-12): handing over cannot raise the SINR
    flat_curvature,  ///< |f''| < 1e-12, classified by the sign of f'(0.5)
    iteration_cap,   ///< fell back to comparing f(0) with f(1)
};

struct NearOptDecision {
    bool handover = false;
    std::optional<double> relaxed_x;  ///< the root C when Newton converged
    int newton_iters = 0;
    NewtonOutcome outcome = NewtonOutcome::converged;
};

NearOptDecision near_opt_decide(const OptimizerInputs& in, double epsilon = 1e-6);

// ---------------------------------------------------------------------------
// FairDiff

struct FairnessIndex {
    double value = 1.0;
    bool degenerate = false;  ///< all-zero input, reported as 1
};

/// Jain's index (sum s)^2 / (K sum s^2).
FairnessIndex jain_index(std::span<const double> s);

/// ceil((1 - F) K)-th smallest entry of s_cur (1-based); -inf when that index is 0.
double fairdiff_threshold(std::span<const double> s_cur, double fairness);

bool fairdiff_decide(const SnrSnapshot& snap, double alpha, double gamma1_db, double gamma2_db);

struct FairDiffState {
    double alpha = -std::numeric_limits<double>::infinity();
    double fairness = 1.0;
    double f_update = 1.0 / 200.0;
    std::size_t blocks_since_update = 0;
    bool initialised = false;
    std::size_t threshold_updates = 0;
    std::size_t liberal_count = 0;  ///< UEs on the liberal branch in the latest block
};

// ---------------------------------------------------------------------------
// Baselines

bool hysteresis_decide(const SnrSnapshot& snap, double delta1_db, double delta2_db);
bool upa_decide(const SnrSnapshot& snap, double theta_db);

// ---------------------------------------------------------------------------
// Dispatch

struct SchemeParams {
    double gamma1_db = 1.0;
    double gamma2_db = 1.0;
    double delta1_db = 4.0;
    double delta2_db = 4.0;
    double theta_db = 4.0;
    double dc_penalty = 0.1;
    double newton_eps = 1e-6;
    double f_update = 1.0 / 200.0;
    int tau_p = 10;
    int tau_c = 200;
};

/// Everything a scheme may look at when deciding block n.
struct BlockView {
    const Matrix* beta_prev = nullptr;  ///< beta[t - tau_c]; unused on the first block
    const Matrix* beta_cur = nullptr;   ///< beta[t]
    const CooperationMatrix* serving = nullptr;    ///< D[t - tau_c]
    const CooperationMatrix* candidate = nullptr;  ///< D'[t]
    bool first_block = false;
};

struct BlockDecision {
    std::vector<std::uint8_t> handover;  ///< one entry per UE
    std::vector<std::optional<double>> relaxed_x;  ///< nearOpt only
    int newton_iters = 0;
};

/// Per-scheme mutable state carried across blocks.
struct SchemeState {
    Scheme scheme = Scheme::always;
    FairDiffState fairdiff;
    OpCounters counters;
};

/// Runs one scheme for one block. The first block attaches every UE.
BlockDecision decide_block(const BlockView& view, const SchemeParams& params, SchemeState& state);

}  // namespace cfmm
