#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "cfmm/topology.hpp"

namespace cfmm {

/// Serving column of one UE: entry m is 1 iff AP m serves the UE.
using ServingColumn = std::vector<std::uint8_t>;

/// The M x K dynamic cooperation matrix D. Every column is a union of whole clusters.
struct CooperationMatrix {
    std::vector<ServingColumn> columns;  ///< one per UE
    std::size_t block_index = 0;

    CooperationMatrix() = default;
    CooperationMatrix(std::size_t num_aps, std::size_t num_ues)
        : columns(num_ues, ServingColumn(num_aps, 0))
    {
    }

    std::size_t num_ues() const { return columns.size(); }
    std::size_t num_aps() const { return columns.empty() ? 0 : columns.front().size(); }
    /// Average serving-set size G = sum_mk D_mk / K.
    double average_set_size() const;

    friend bool operator==(const CooperationMatrix&, const CooperationMatrix&) = default;
};

/// Candidate column: all APs in clusters that contain one of the E highest-SNR
/// APs. SNR ties go to the lower AP index.
ServingColumn candidate_set(std::span<const double> beta_col, const Topology& topo, std::size_t best_aps);

/// Indices of the E strongest APs, strongest first.
std::vector<std::size_t> strongest_aps(std::span<const double> beta_col, std::size_t best_aps);

/// Sorted cluster indices covered by `col`; throws std::logic_error when the
/// column holds part of a cluster.
std::vector<std::size_t> clusters_of(const ServingColumn& col, const Topology& topo);

/// Number of clusters added plus clusters removed between two columns.
std::size_t count_cluster_changes(const ServingColumn& old_col, const ServingColumn& new_col,
                                  const Topology& topo);

/// Column k of the result is candidate column k where decisions[k] is set,
/// otherwise the current column. Advances block_index.
CooperationMatrix apply_decision(const CooperationMatrix& current, const CooperationMatrix& candidate,
                                 std::span<const std::uint8_t> decisions);

/// sum_m beta_m D_m.
double total_snr(std::span<const double> beta_col, const ServingColumn& col);

}  // namespace cfmm
