#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

#include "cfmm/geometry.hpp"
#include "cfmm/rng.hpp"
#include "cfmm/topology.hpp"

namespace cfmm {

inline constexpr double speed_of_light = 299'792'458.0;

/// Three-slope log-distance path loss (Hata-COST231 form). Distances in meters.
struct PathLossParams {
    double carrier_hz = 2e9;
    double ap_height_m = 10.0;
    double ue_height_m = 1.0;
    double near_breakpoint_m = 10.0;
    double far_breakpoint_m = 50.0;
    double mid_exponent = 2.0;
    double far_exponent = 3.5;
    double shadowing_sigma_db = 8.0;

    /// Hata-COST231 frequency/height term in dB.
    double hata_offset_db() const;
};

/// Mean path loss in dB (positive) at 3D distance `d` (clamped to >= 1 m).
double mean_path_loss_db(double distance_m, const PathLossParams& params);

/// Linear path-loss factor L = Lbar * 10^(sigma * z / 10).
double path_loss(const Position3& ap, const Position3& ue, double shadow_z, const PathLossParams& params);

/// Column-major M x K real matrix.
class Matrix {
public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
        : rows_(rows), cols_(cols), data_(rows * cols, fill)
    {
    }

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    double& operator()(std::size_t r, std::size_t c) { return data_[c * rows_ + r]; }
    double operator()(std::size_t r, std::size_t c) const { return data_[c * rows_ + r]; }
    std::span<const double> col(std::size_t c) const { return {data_.data() + c * rows_, rows_}; }
    std::span<double> col(std::size_t c) { return {data_.data() + c * rows_, rows_}; }

    friend bool operator==(const Matrix&, const Matrix&) = default;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> data_;
};

/// Standard-normal shadowing draws, frozen per (AP, UE) for a realization.
Matrix draw_shadowing(std::size_t num_aps, std::size_t num_ues, Rng& rng);

struct LargeScale {
    Matrix path_loss;  ///< L_mk, linear
    Matrix beta;       ///< p / (L_mk n0), linear
    std::size_t clamped_pairs = 0;  ///< pairs closer than 1 m
};

/// beta_mk = p / (L_mk n0) for every AP/UE pair. UEs sit at `ue_height`.
LargeScale snr_matrix(const Topology& topo, std::span<const Position2> ue_positions, double tx_power_w,
                      double noise_w, const Matrix& shadow_z, const PathLossParams& params);

/// Thermal noise power k T B F in watts.
double noise_power_w(double bandwidth_hz, double noise_figure_db);
double dbm_to_w(double dbm);
double db_to_linear(double db);
double linear_to_db(double lin);

/// Zeroth-order Bessel function of the first kind. Power series for |x| < 12,
/// Hankel asymptotic expansion beyond; absolute error below 1e-8 for |x| <= 50.
double bessel_j0(double x);

/// Parameters of the Jakes aging correlation rho[t] = J0(2 pi v f_c / c T_sa (t - tau_p - 1)).
struct AgingProfile {
    double speed_mps = 0.0;
    double carrier_hz = 2e9;
    double slot_s = 1e-4;
    int tau_p = 10;
};

/// Correlation between the channel at slot `t` of a block and at the pilot
/// reference slot tau_p + 1. Slots are numbered from 1.
double aging_coefficient(const AgingProfile& profile, double t);

/// One aged realization h = rho h0 + sqrt(1 - rho^2) g with g ~ CN(0, R).
std::complex<double> evolve_channel(std::complex<double> h0, double rho, double variance, Rng& rng);

/// Circularly-symmetric complex normal draw with the given variance.
std::complex<double> complex_normal(double variance, Rng& rng);

/// MMSE estimate variance as printed for this channel model:
///   Z = rho^2 beta^2 n0 / (p * sum_{i in P_k} beta_i n0 + p)
double estimate_variance(double rho_pilot, double beta, double tx_power_w, double noise_w,
                         std::span<const double> pilot_set_betas);

}  // namespace cfmm
