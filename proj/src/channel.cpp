#include "cfmm/channel.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace cfmm {

double PathLossParams::hata_offset_db() const
{
    const double f_mhz = carrier_hz * 1e-6;
    const double lf = std::log10(f_mhz);
    return 46.3 + 33.9 * lf - 13.82 * std::log10(ap_height_m) - (1.1 * lf - 0.7) * ue_height_m +
           (1.56 * lf - 0.8);
}

double mean_path_loss_db(double distance_m, const PathLossParams& params)
{
    const double d = std::max(distance_m, 1.0) * 1e-3;
    const double d0 = params.near_breakpoint_m * 1e-3;
    const double d1 = params.far_breakpoint_m * 1e-3;
    const double offset = params.hata_offset_db();
    if (d > d1) {
        return offset + 10.0 * params.far_exponent * std::log10(d);
    }
    // Mid and near segments are shifted so the curve is continuous at d1.
    const double at_d1 = offset + 10.0 * (params.far_exponent - params.mid_exponent) * std::log10(d1);
    if (d > d0) {
        return at_d1 + 10.0 * params.mid_exponent * std::log10(d);
    }
    return at_d1 + 10.0 * params.mid_exponent * std::log10(d0);
}

double path_loss(const Position3& ap, const Position3& ue, double shadow_z, const PathLossParams& params)
{
    const double db = mean_path_loss_db(distance(ap, ue), params) + params.shadowing_sigma_db * shadow_z;
    return std::pow(10.0, db / 10.0);
}

Matrix draw_shadowing(std::size_t num_aps, std::size_t num_ues, Rng& rng)
{
    std::normal_distribution<double> normal(0.0, 1.0);
    Matrix z(num_aps, num_ues);
    for (std::size_t k = 0; k < num_ues; ++k) {
        for (std::size_t m = 0; m < num_aps; ++m) {
            z(m, k) = normal(rng);
        }
    }
    return z;
}

LargeScale snr_matrix(const Topology& topo, std::span<const Position2> ue_positions, double tx_power_w,
                      double noise_w, const Matrix& shadow_z, const PathLossParams& params)
{
    const std::size_t m_count = topo.num_aps();
    const std::size_t k_count = ue_positions.size();
    if (shadow_z.rows() != m_count || shadow_z.cols() < k_count) {
        throw std::invalid_argument("shadowing matrix does not match topology and UE count");
    }
    if (!(tx_power_w > 0.0) || !(noise_w > 0.0)) {
        throw std::invalid_argument("transmit and noise power must be positive");
    }
    LargeScale ls{Matrix(m_count, k_count), Matrix(m_count, k_count), 0};
    for (std::size_t k = 0; k < k_count; ++k) {
        const Position3 ue{ue_positions[k].x, ue_positions[k].y, params.ue_height_m};
        for (std::size_t m = 0; m < m_count; ++m) {
            if (distance(topo.ap_positions[m], ue) < 1.0) {
                ++ls.clamped_pairs;
            }
            const double l = path_loss(topo.ap_positions[m], ue, shadow_z(m, k), params);
            ls.path_loss(m, k) = l;
            ls.beta(m, k) = tx_power_w / (l * noise_w);
        }
    }
    return ls;
}

double noise_power_w(double bandwidth_hz, double noise_figure_db)
{
    constexpr double boltzmann = 1.380649e-23;
    constexpr double temperature_k = 290.0;
    return boltzmann * temperature_k * bandwidth_hz * db_to_linear(noise_figure_db);
}

double dbm_to_w(double dbm) { return std::pow(10.0, (dbm - 30.0) / 10.0); }
double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }
double linear_to_db(double lin) { return 10.0 * std::log10(lin); }

namespace {

double j0_series(double x)
{
    const double q = -0.25 * x * x;
    double term = 1.0;
    double sum = 1.0;
    for (int k = 1; k < 200; ++k) {
        term *= q / (static_cast<double>(k) * static_cast<double>(k));
        sum += term;
        if (std::abs(term) < 1e-17 * std::max(1.0, std::abs(sum))) {
            break;
        }
    }
    return sum;
}

double j0_asymptotic(double x)
{
    // a_j = prod_{i=1..j} (2i - 1)^2 / (j! 8^j x^j), alternating into P (even j) and Q (odd j).
    double p = 1.0;
    double q = 0.0;
    double term = 1.0;
    double prev = std::numeric_limits<double>::infinity();
    for (int j = 1; j < 60; ++j) {
        const double odd = 2.0 * j - 1.0;
        term *= odd * odd / (static_cast<double>(j) * 8.0 * x);
        if (term > prev) {
            break;  // series has started to diverge
        }
        prev = term;
        // P = 1 - a2 + a4 - ...,  Q = -a1 + a3 - a5 + ...
        const double signed_term = ((j + 1) / 2) % 2 == 1 ? -term : term;
        if (j % 2 == 0) {
            p += signed_term;
        } else {
            q += signed_term;
        }
        if (term < 1e-17) {
            break;
        }
    }
    const double chi = x - 0.25 * std::numbers::pi;
    return std::sqrt(2.0 / (std::numbers::pi * x)) * (p * std::cos(chi) - q * std::sin(chi));
}

}  // namespace

double bessel_j0(double x)
{
    const double ax = std::abs(x);
    return ax < 12.0 ? j0_series(ax) : j0_asymptotic(ax);
}

double aging_coefficient(const AgingProfile& profile, double t)
{
    if (t < 0.0) {
        throw std::invalid_argument("slot index must be non-negative");
    }
    const double lag = t - static_cast<double>(profile.tau_p) - 1.0;
    const double arg = 2.0 * std::numbers::pi * (profile.speed_mps * profile.carrier_hz / speed_of_light) *
                       profile.slot_s * lag;
    return bessel_j0(arg);
}

std::complex<double> complex_normal(double variance, Rng& rng)
{
    std::normal_distribution<double> normal(0.0, std::sqrt(0.5 * variance));
    const double re = normal(rng);
    const double im = normal(rng);
    return {re, im};
}

std::complex<double> evolve_channel(std::complex<double> h0, double rho, double variance, Rng& rng)
{
    if (!(std::abs(rho) <= 1.0)) {
        throw std::invalid_argument("aging coefficient must lie in [-1, 1]");
    }
    if (!(variance > 0.0)) {
        throw std::invalid_argument("channel variance must be positive");
    }
    if (rho == 1.0) {
        return h0;
    }
    return rho * h0 + std::sqrt(1.0 - rho * rho) * complex_normal(variance, rng);
}

double estimate_variance(double rho_pilot, double beta, double tx_power_w, double noise_w,
                         std::span<const double> pilot_set_betas)
{
    if (pilot_set_betas.empty()) {
        throw std::invalid_argument("pilot set must contain at least the UE itself");
    }
    double sum = 0.0;
    for (double b : pilot_set_betas) {
        sum += b;
    }
    return rho_pilot * rho_pilot * beta * beta * noise_w / (tx_power_w * sum * noise_w + tx_power_w);
}

}  // namespace cfmm
