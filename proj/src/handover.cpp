#include "cfmm/handover.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace cfmm {

Scheme parse_scheme(std::string_view id)
{
    if (id == "always") return Scheme::always;
    if (id == "nearopt") return Scheme::nearopt;
    if (id == "fairdiff") return Scheme::fairdiff;
    if (id == "hysteresis") return Scheme::hysteresis;
    if (id == "upa") return Scheme::upa;
    throw std::invalid_argument("unknown scheme '" + std::string(id) + "'");
}

std::string_view scheme_name(Scheme s)
{
    switch (s) {
    case Scheme::always: return "always";
    case Scheme::nearopt: return "nearopt";
    case Scheme::fairdiff: return "fairdiff";
    case Scheme::hysteresis: return "hysteresis";
    case Scheme::upa: return "upa";
    }
    return "?";
}

std::vector<Scheme> all_schemes()
{
    return {Scheme::always, Scheme::nearopt, Scheme::fairdiff, Scheme::hysteresis, Scheme::upa};
}

double simplified_sinr(std::span<const double> beta_col, const ServingColumn& d_col)
{
    double all = 0.0;
    double served = 0.0;
    for (std::size_t m = 0; m < beta_col.size(); ++m) {
        all += beta_col[m];
        if (d_col[m] != 0) {
            served += beta_col[m];
        }
    }
    // all - served >= 0 mathematically; guard against rounding.
    return served / (std::max(all - served, 0.0) + 1.0);
}

// ---------------------------------------------------------------------------

RelaxedObjective::RelaxedObjective(const OptimizerInputs& in)
    : in_(in), scale_(static_cast<double>(in.tau_c - in.tau_p) / static_cast<double>(in.tau_c))
{
}

double RelaxedObjective::value(double x) const
{
    const double u = in_.a + x * (in_.b - in_.a) + 1.0;
    return scale_ * std::log2(u) * (1.0 - in_.d_c * x);
}

double RelaxedObjective::d1(double x) const
{
    const double delta = in_.b - in_.a;
    const double u = in_.a + x * delta + 1.0;
    return scale_ * (delta * (1.0 - in_.d_c * x) / (u * std::numbers::ln2) - in_.d_c * std::log2(u));
}

double RelaxedObjective::d2(double x) const
{
    const double delta = in_.b - in_.a;
    const double u = in_.a + x * delta + 1.0;
    return scale_ * (-delta * delta * (1.0 - in_.d_c * x) / (u * u * std::numbers::ln2) -
                     2.0 * in_.d_c * delta / (u * std::numbers::ln2));
}

double RelaxedObjective::domain_floor() const
{
    const double delta = in_.b - in_.a;
    if (delta <= 0.0) {
        return -std::numeric_limits<double>::infinity();
    }
    return -(in_.a + 1.0) / delta;
}

NearOptDecision near_opt_decide(const OptimizerInputs& in, double epsilon)
{
    if (!(in.a >= 0.0) || !(in.b >= 0.0)) {
        throw std::invalid_argument("simplified SINRs must be non-negative");
    }
    if (!(in.d_c >= 0.0 && in.d_c < 1.0)) {
        throw std::invalid_argument("handover penalty must lie in [0, 1)");
    }
    if (!(in.tau_p >= 0 && in.tau_p < in.tau_c)) {
        throw std::invalid_argument("need 0 <= tau_p < tau_c");
    }
    constexpr double tiny = 1e-12;
    constexpr int max_iters = 100;

    NearOptDecision out;
    if (in.b - in.a <= tiny) {
        out.outcome = NewtonOutcome::b_not_above_a;
        out.handover = false;
        return out;
    }

    const RelaxedObjective f(in);
    const double floor = f.domain_floor();
    double x = 0.5;
    for (int it = 0; it < max_iters; ++it) {
        const double g = f.d1(x);
        const double h = f.d2(x);
        if (std::abs(h) < tiny) {
            out.outcome = NewtonOutcome::flat_curvature;
            out.handover = f.d1(0.5) > 0.0;
            return out;
        }
        double next = x - g / h;
        if (next <= floor) {
            // Newton overshot past the log's pole; bisect towards it instead.
            next = 0.5 * (x + floor);
        }
        ++out.newton_iters;
        const bool small_step = std::abs(next - x) < epsilon;
        x = next;
        if (small_step || std::abs(f.d1(x)) < epsilon) {
            out.outcome = NewtonOutcome::converged;
            out.relaxed_x = x;
            if (x < 0.0) {
                out.handover = false;
            } else if (x > 1.0) {
                out.handover = true;
            } else {
                out.handover = std::round(x) >= 1.0;
            }
            return out;
        }
    }
    out.outcome = NewtonOutcome::iteration_cap;
    out.handover = f.value(1.0) > f.value(0.0);
    return out;
}

// ---------------------------------------------------------------------------

FairnessIndex jain_index(std::span<const double> s)
{
    if (s.empty()) {
        throw std::invalid_argument("fairness index needs at least one entry");
    }
    double sum = 0.0;
    double sum_sq = 0.0;
    for (double v : s) {
        if (v < 0.0) {
            throw std::invalid_argument("fairness index entries must be non-negative");
        }
        sum += v;
        sum_sq += v * v;
    }
    if (sum_sq == 0.0) {
        return {1.0, true};
    }
    return {sum * sum / (static_cast<double>(s.size()) * sum_sq), false};
}

double fairdiff_threshold(std::span<const double> s_cur, double fairness)
{
    const auto k = static_cast<double>(s_cur.size());
    // The product can land a hair above an integer; snap before taking the ceiling.
    double raw = (1.0 - fairness) * k;
    if (std::abs(raw - std::round(raw)) < 1e-9) {
        raw = std::round(raw);
    }
    const auto j = static_cast<std::size_t>(std::clamp(std::ceil(raw), 0.0, k));
    if (j == 0) {
        return -std::numeric_limits<double>::infinity();
    }
    std::vector<double> sorted(s_cur.begin(), s_cur.end());
    std::nth_element(sorted.begin(), sorted.begin() + static_cast<std::ptrdiff_t>(j - 1), sorted.end());
    return sorted[j - 1];
}

bool fairdiff_decide(const SnrSnapshot& snap, double alpha, double gamma1_db, double gamma2_db)
{
    const bool better = snap.s_new > snap.s_cur * db_to_linear(gamma1_db);
    if (snap.s_cur < alpha) {
        return better;
    }
    return better && snap.s_cur < snap.s_bef * db_to_linear(-gamma2_db);
}

bool hysteresis_decide(const SnrSnapshot& snap, double delta1_db, double delta2_db)
{
    return snap.s_new > snap.s_bef * db_to_linear(delta1_db) &&
           snap.s_cur < snap.s_bef * db_to_linear(-delta2_db);
}

bool upa_decide(const SnrSnapshot& snap, double theta_db)
{
    return snap.s_cur < snap.s_bef * db_to_linear(-theta_db);
}

// ---------------------------------------------------------------------------

namespace {

double counted_sum(std::span<const double> beta_col, const ServingColumn& col, OpCounters& c)
{
    count_op(c, Counter::snr_sums);
    count_op(c, Counter::snr_sum_terms, beta_col.size());
    return total_snr(beta_col, col);
}

double counted_all(std::span<const double> beta_col, OpCounters& c)
{
    count_op(c, Counter::snr_sums);
    count_op(c, Counter::snr_sum_terms, beta_col.size());
    double s = 0.0;
    for (double b : beta_col) {
        s += b;
    }
    return s;
}

}  // namespace

BlockDecision decide_block(const BlockView& view, const SchemeParams& params, SchemeState& state)
{
    if (view.beta_cur == nullptr || view.serving == nullptr || view.candidate == nullptr) {
        throw std::invalid_argument("block view is incomplete");
    }
    const std::size_t k_count = view.serving->num_ues();
    BlockDecision out;
    out.handover.assign(k_count, 0);
    out.relaxed_x.assign(k_count, std::nullopt);

    if (view.first_block || state.scheme == Scheme::always) {
        std::fill(out.handover.begin(), out.handover.end(), std::uint8_t{1});
        if (!view.first_block) {
            count_op(state.counters, Counter::decisions, k_count);
        }
        return out;
    }
    if (view.beta_prev == nullptr) {
        throw std::invalid_argument("previous SNRs are required after the first block");
    }
    count_op(state.counters, Counter::decisions, k_count);

    const Matrix& prev = *view.beta_prev;
    const Matrix& cur = *view.beta_cur;
    OpCounters& ops = state.counters;

    switch (state.scheme) {
    case Scheme::always:
        break;
    case Scheme::nearopt:
        for (std::size_t k = 0; k < k_count; ++k) {
            const auto col = cur.col(k);
            const double all = counted_all(col, ops);
            const double s_old = counted_sum(col, view.serving->columns[k], ops);
            const double s_new = counted_sum(col, view.candidate->columns[k], ops);
            OptimizerInputs in;
            in.a = s_old / (std::max(all - s_old, 0.0) + 1.0);
            in.b = s_new / (std::max(all - s_new, 0.0) + 1.0);
            in.d_c = params.dc_penalty;
            in.tau_p = params.tau_p;
            in.tau_c = params.tau_c;
            const NearOptDecision d = near_opt_decide(in, params.newton_eps);
            count_op(ops, Counter::newton_iterations, static_cast<std::uint64_t>(d.newton_iters));
            out.newton_iters += d.newton_iters;
            out.handover[k] = d.handover ? 1 : 0;
            out.relaxed_x[k] = d.relaxed_x;
        }
        break;
    case Scheme::fairdiff: {
        std::vector<SnrSnapshot> snaps(k_count);
        std::vector<double> s_cur(k_count);
        for (std::size_t k = 0; k < k_count; ++k) {
            snaps[k].s_bef = counted_sum(prev.col(k), view.serving->columns[k], ops);
            snaps[k].s_cur = counted_sum(cur.col(k), view.serving->columns[k], ops);
            snaps[k].s_new = counted_sum(cur.col(k), view.candidate->columns[k], ops);
            s_cur[k] = snaps[k].s_cur;
        }
        FairDiffState& fd = state.fairdiff;
        fd.f_update = params.f_update;
        const double period = 1.0 / params.f_update;
        if (!fd.initialised || static_cast<double>(fd.blocks_since_update) + 1e-9 >= period) {
            fd.fairness = jain_index(s_cur).value;
            fd.alpha = fairdiff_threshold(s_cur, fd.fairness);
            fd.blocks_since_update = 0;
            fd.initialised = true;
            ++fd.threshold_updates;
            count_op(ops, Counter::fairness_evaluations);
            count_op(ops, Counter::fairness_terms, k_count * cur.rows());
        }
        ++fd.blocks_since_update;
        fd.liberal_count = 0;
        for (std::size_t k = 0; k < k_count; ++k) {
            if (snaps[k].s_cur < fd.alpha) {
                ++fd.liberal_count;
            }
            out.handover[k] = fairdiff_decide(snaps[k], fd.alpha, params.gamma1_db, params.gamma2_db) ? 1 : 0;
        }
        break;
    }
    case Scheme::hysteresis:
        for (std::size_t k = 0; k < k_count; ++k) {
            SnrSnapshot s;
            s.s_bef = counted_sum(prev.col(k), view.serving->columns[k], ops);
            s.s_cur = counted_sum(cur.col(k), view.serving->columns[k], ops);
            s.s_new = counted_sum(cur.col(k), view.candidate->columns[k], ops);
            out.handover[k] = hysteresis_decide(s, params.delta1_db, params.delta2_db) ? 1 : 0;
        }
        break;
    case Scheme::upa:
        for (std::size_t k = 0; k < k_count; ++k) {
            SnrSnapshot s;
            s.s_bef = counted_sum(prev.col(k), view.serving->columns[k], ops);
            s.s_cur = counted_sum(cur.col(k), view.serving->columns[k], ops);
            out.handover[k] = upa_decide(s, params.theta_db) ? 1 : 0;
        }
        break;
    }
    return out;
}

}  // namespace cfmm
