#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "cfmm/channel.hpp"
#include "cfmm/counters.hpp"
#include "cfmm/rng.hpp"
#include "cfmm/serving.hpp"

namespace cfmm {

using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;

enum class LinkDirection { uplink, downlink };

/// Blocks are numbered from 1; odd blocks carry uplink data, even blocks downlink.
inline LinkDirection direction_of_block(std::size_t n)
{
    return n % 2 == 1 ? LinkDirection::uplink : LinkDirection::downlink;
}

/// A data slot at which the SINR is evaluated and how many slots it stands for.
struct SlotSample {
    int slot = 0;  ///< 1-based slot index inside the block
    double weight = 1.0;
};

/// Slots tau_p + 1, tau_p + 1 + d, ... up to tau_c; each weighs d slots, the last
/// one whatever remains.
std::vector<SlotSample> data_slot_samples(int tau_p, int tau_c, int decimation);

/// SE' = (1 / tau_c) sum_samples weight * log2(1 + SINR). Pilot slots contribute nothing.
double baseline_se_block(std::span<const double> sinr, std::span<const SlotSample> samples, int tau_c);

struct HandoverRates {
    double h_cluster = 0.0;  ///< inter-cluster handovers per second
    double h_ap = 0.0;       ///< intra-cluster handovers per second
};

HandoverRates handover_rates(std::span<const std::size_t> n_changed, double q_avg, double duration_s);

struct MobilitySe {
    double value = 0.0;
    bool clamped = false;  ///< handover loss fraction reached 1: UE in outage
};

/// SE' (1 - d_C H_C - d_AP H_AP), floored at zero.
MobilitySe mobility_aware_se(double se_baseline, double h_cluster, double h_ap, double d_c_s, double d_ap_s);

/// Fast scoring: the simplified large-scale SINR.
double sinr_fast(std::span<const double> beta_col, const ServingColumn& d_col);

// ---------------------------------------------------------------------------
// Full link model

/// Small-scale state of one block: the channel at the pilot slot, its
/// large-scale variance R = 1/L, and the CPU's estimate of it.
struct FadingState {
    CMatrix h0;
    Eigen::MatrixXd variance;
    CMatrix estimate;
};

/// Draws h0 ~ CN(0, R) and an MMSE-style estimate whose variance follows
/// `estimate_variance` (own pilot only) and whose correlation with h0 is
/// sqrt(beta / (beta + 1)). Column k uses ue_rngs[k].
FadingState draw_fading_state(const LargeScale& ls, double tx_power_w, double noise_w, std::span<Rng> ue_rngs);

struct CombinerSet {
    CMatrix phi;  ///< partial-MMSE combiners, zero outside each UE's serving set
    CMatrix w;    ///< unit-norm precoders phi / |phi|
};

/// phi_k = (sum_i p h_i h_i^H + n0 I)^-1 h_k with every vector restricted to the
/// serving APs of UE k.
CombinerSet combine_precode(const CMatrix& estimates, const CooperationMatrix& serving, double tx_power_w,
                            double noise_w);

/// Per-UE SINR at one slot. Expectations are sample means over `samples`
/// draws of the aged channel h = rho h0 + sqrt(1 - rho^2) g; rho[i] is UE i's
/// aging coefficient at this slot. Draws for UE k come from ue_rngs[k].
std::vector<double> sinr_full(const FadingState& fading, const CombinerSet& combiners,
                              const CooperationMatrix& serving, std::span<const double> rho,
                              LinkDirection direction, int samples, double tx_power_w, double noise_w,
                              std::span<Rng> ue_rngs);

}  // namespace cfmm
