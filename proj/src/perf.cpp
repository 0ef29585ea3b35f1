#include "cfmm/perf.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "cfmm/handover.hpp"

namespace cfmm {

std::vector<SlotSample> data_slot_samples(int tau_p, int tau_c, int decimation)
{
    if (!(tau_p >= 0 && tau_p < tau_c)) {
        throw std::invalid_argument("need 0 <= tau_p < tau_c");
    }
    if (decimation < 1) {
        throw std::invalid_argument("slot decimation must be at least 1");
    }
    std::vector<SlotSample> out;
    for (int t = tau_p + 1; t <= tau_c; t += decimation) {
        out.push_back({t, static_cast<double>(std::min(decimation, tau_c - t + 1))});
    }
    return out;
}

double baseline_se_block(std::span<const double> sinr, std::span<const SlotSample> samples, int tau_c)
{
    if (sinr.empty() || sinr.size() != samples.size()) {
        throw std::invalid_argument("need one SINR per slot sample");
    }
    double acc = 0.0;
    for (std::size_t i = 0; i < sinr.size(); ++i) {
        acc += samples[i].weight * std::log2(1.0 + std::max(sinr[i], 0.0));
    }
    return acc / static_cast<double>(tau_c);
}

HandoverRates handover_rates(std::span<const std::size_t> n_changed, double q_avg, double duration_s)
{
    if (!(duration_s > 0.0)) {
        throw std::invalid_argument("duration must be positive");
    }
    std::size_t total = 0;
    for (std::size_t n : n_changed) {
        total += n;
    }
    HandoverRates r;
    r.h_cluster = static_cast<double>(total) / duration_s;
    r.h_ap = q_avg * r.h_cluster;
    return r;
}

MobilitySe mobility_aware_se(double se_baseline, double h_cluster, double h_ap, double d_c_s, double d_ap_s)
{
    const double kept = 1.0 - d_c_s * h_cluster - d_ap_s * h_ap;
    if (kept <= 0.0) {
        return {0.0, true};
    }
    return {se_baseline * kept, false};
}

double sinr_fast(std::span<const double> beta_col, const ServingColumn& d_col)
{
    return simplified_sinr(beta_col, d_col);
}

// ---------------------------------------------------------------------------

FadingState draw_fading_state(const LargeScale& ls, double tx_power_w, double noise_w, std::span<Rng> ue_rngs)
{
    const auto m_count = static_cast<Eigen::Index>(ls.beta.rows());
    const auto k_count = static_cast<Eigen::Index>(ls.beta.cols());
    if (ue_rngs.size() != static_cast<std::size_t>(k_count)) {
        throw std::invalid_argument("need one generator per UE");
    }
    FadingState st;
    st.h0.resize(m_count, k_count);
    st.variance.resize(m_count, k_count);
    st.estimate.resize(m_count, k_count);
    for (Eigen::Index k = 0; k < k_count; ++k) {
        Rng& rng = ue_rngs[static_cast<std::size_t>(k)];
        for (Eigen::Index m = 0; m < m_count; ++m) {
            const auto mi = static_cast<std::size_t>(m);
            const auto ki = static_cast<std::size_t>(k);
            const double r = 1.0 / ls.path_loss(mi, ki);
            const double beta = ls.beta(mi, ki);
            const std::complex<double> x = complex_normal(1.0, rng);
            const std::complex<double> noise = complex_normal(1.0, rng);
            const double own[] = {beta};
            const double z = estimate_variance(1.0, beta, tx_power_w, noise_w, own);
            // Unit-variance observation of x with pilot SNR beta.
            const std::complex<double> obs = (x + noise / std::sqrt(beta)) / std::sqrt(1.0 + 1.0 / beta);
            st.variance(m, k) = r;
            st.h0(m, k) = std::sqrt(r) * x;
            st.estimate(m, k) = std::sqrt(z) * obs;
        }
    }
    return st;
}

CombinerSet combine_precode(const CMatrix& estimates, const CooperationMatrix& serving, double tx_power_w,
                            double noise_w)
{
    const Eigen::Index m_count = estimates.rows();
    const Eigen::Index k_count = estimates.cols();
    if (serving.num_ues() != static_cast<std::size_t>(k_count) ||
        serving.num_aps() != static_cast<std::size_t>(m_count)) {
        throw std::invalid_argument("estimate and cooperation matrix shapes disagree");
    }
    if (!(noise_w > 0.0)) {
        throw std::invalid_argument("noise power must be positive");
    }
    CombinerSet out{CMatrix::Zero(m_count, k_count), CMatrix::Zero(m_count, k_count)};
    for (Eigen::Index k = 0; k < k_count; ++k) {
        const ServingColumn& col = serving.columns[static_cast<std::size_t>(k)];
        std::vector<Eigen::Index> rows;
        for (Eigen::Index m = 0; m < m_count; ++m) {
            if (col[static_cast<std::size_t>(m)] != 0) {
                rows.push_back(m);
            }
        }
        if (rows.empty()) {
            continue;
        }
        const auto n = static_cast<Eigen::Index>(rows.size());
        CMatrix sub(n, k_count);
        for (Eigen::Index r = 0; r < n; ++r) {
            sub.row(r) = estimates.row(rows[static_cast<std::size_t>(r)]);
        }
        if (sub.col(k).squaredNorm() == 0.0) {
            continue;
        }
        CMatrix gram = tx_power_w * (sub * sub.adjoint());
        gram.diagonal().array() += noise_w;
        const CVector phi = gram.ldlt().solve(sub.col(k));
        const double norm = phi.norm();
        for (Eigen::Index r = 0; r < n; ++r) {
            const Eigen::Index m = rows[static_cast<std::size_t>(r)];
            out.phi(m, k) = phi(r);
            out.w(m, k) = norm > 0.0 ? phi(r) / norm : std::complex<double>{};
        }
    }
    return out;
}

std::vector<double> sinr_full(const FadingState& fading, const CombinerSet& combiners,
                              const CooperationMatrix& serving, std::span<const double> rho,
                              LinkDirection direction, int samples, double tx_power_w, double noise_w,
                              std::span<Rng> ue_rngs)
{
    if (samples < 1) {
        throw std::invalid_argument("need at least one fading sample");
    }
    const Eigen::Index k_count = fading.h0.cols();
    if (rho.size() != static_cast<std::size_t>(k_count) || ue_rngs.size() != static_cast<std::size_t>(k_count)) {
        throw std::invalid_argument("need one aging coefficient and generator per UE");
    }
    (void)serving;  // the serving sets are already baked into the combiners

    // Unit-norm receive filters; SINR is invariant to their scale.
    CMatrix filt = direction == LinkDirection::uplink ? combiners.phi : combiners.w;
    for (Eigen::Index k = 0; k < k_count; ++k) {
        const double n = filt.col(k).norm();
        if (n > 0.0) {
            filt.col(k) /= n;
        }
    }
    const Eigen::MatrixXd filt_power = filt.cwiseAbs2();

    std::vector<double> out(static_cast<std::size_t>(k_count), 0.0);
    std::normal_distribution<double> normal(0.0, 1.0);
    for (Eigen::Index k = 0; k < k_count; ++k) {
        const auto ku = static_cast<std::size_t>(k);
        if (filt.col(k).squaredNorm() == 0.0) {
            continue;
        }
        Rng& rng = ue_rngs[ku];
        double desired_power = 0.0;
        double total_power = 0.0;
        for (Eigen::Index i = 0; i < k_count; ++i) {
            const auto iu = static_cast<std::size_t>(i);
            // Projection of the aged channel onto the filter:
            //  uplink   x = phi_k^H h_i[t]      (channel of UE i, aging of UE i)
            //  downlink x = h_k[t]^H w_i        (channel of UE k, aging of UE k)
            std::complex<double> mean;
            double spread = 0.0;
            double r = 0.0;
            if (direction == LinkDirection::uplink) {
                mean = filt.col(k).dot(fading.h0.col(i));
                spread = filt_power.col(k).dot(fading.variance.col(i));
                r = rho[iu];
            } else {
                mean = std::conj(filt.col(i).dot(fading.h0.col(k)));
                spread = filt_power.col(i).dot(fading.variance.col(k));
                r = rho[ku];
            }
            const double fresh = std::sqrt(std::max(0.0, 1.0 - r * r) * 0.5 * spread);
            std::complex<double> sum{};
            double sum_sq = 0.0;
            for (int s = 0; s < samples; ++s) {
                const double re = normal(rng);
                const double im = normal(rng);
                const std::complex<double> x = r * mean + fresh * std::complex<double>(re, im);
                sum += x;
                sum_sq += std::norm(x);
            }
            const double n = static_cast<double>(samples);
            total_power += tx_power_w * sum_sq / n;
            if (i == k) {
                desired_power = r * r * tx_power_w * std::norm(sum / n);
            }
        }
        const double interference = std::max(0.0, total_power - desired_power);
        out[ku] = desired_power / (interference + noise_w);
    }
    return out;
}

}  // namespace cfmm
