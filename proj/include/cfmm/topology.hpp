#pragma once

#include <cstddef>
#include <filesystem>
#include <string>
#include <vector>

#include "cfmm/geometry.hpp"
#include "cfmm/rng.hpp"

namespace cfmm {

/// AP sites inside a square area, partitioned into an n x n grid of CPU
/// clusters. Immutable once built; share freely across threads.
struct Topology {
    double area_side = 0.0;
    std::vector<Position3> ap_positions;

    /// Grid dimension n (rows == cols == n). Zero until clusters are assigned.
    std::size_t grid_dim = 0;
    /// cluster_of[m] is the cluster index of AP m.
    std::vector<std::size_t> cluster_of;
    /// members[c] lists the APs of cluster c in ascending index order.
    std::vector<std::vector<std::size_t>> members;
    /// M / n^2.
    double q_avg = 0.0;
    /// Set when the requested cluster size exceeded M and the grid collapsed to 1x1.
    bool single_cluster_warning = false;

    std::size_t num_aps() const { return ap_positions.size(); }
    std::size_t num_clusters() const { return members.size(); }
    bool clustered() const { return grid_dim > 0; }
    /// AP density M / S in APs per km^2.
    double density_per_km2() const;
};

Topology generate_uniform_topology(double area_side, std::size_t num_aps, double ap_height, Rng& rng);

/// Grid of n x n square clusters with n = round(sqrt(M / target_q)), n >= 1.
Topology assign_square_clusters(Topology topo, double target_q);

/// Cluster index of a point under an n x n grid over [0, side]^2.
std::size_t grid_cell_of(double x, double y, double side, std::size_t n);

/// Reads the AP-CSV format (`x_m,y_m,z_m`). Clusters are not assigned.
Topology load_topology(const std::filesystem::path& path, double area_side);

}  // namespace cfmm
