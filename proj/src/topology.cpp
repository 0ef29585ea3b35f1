#include "cfmm/topology.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <stdexcept>

#include "cfmm/csv.hpp"
#include "cfmm/error.hpp"

namespace cfmm {

double Topology::density_per_km2() const
{
    return static_cast<double>(num_aps()) / (area_side * area_side * 1e-6);
}

Topology generate_uniform_topology(double area_side, std::size_t num_aps, double ap_height, Rng& rng)
{
    if (!(area_side > 0.0)) {
        throw std::invalid_argument("area side must be positive");
    }
    if (num_aps == 0) {
        throw std::invalid_argument("number of APs must be at least 1");
    }
    std::uniform_real_distribution<double> coord(0.0, area_side);
    Topology topo;
    topo.area_side = area_side;
    topo.ap_positions.reserve(num_aps);
    for (std::size_t m = 0; m < num_aps; ++m) {
        const double x = coord(rng);
        const double y = coord(rng);
        topo.ap_positions.push_back({x, y, ap_height});
    }
    return topo;
}

std::size_t grid_cell_of(double x, double y, double side, std::size_t n)
{
    const double cell = side / static_cast<double>(n);
    auto index = [&](double v) {
        const auto i = static_cast<std::size_t>(std::max(0.0, std::floor(v / cell)));
        return std::min(i, n - 1);
    };
    return index(x) * n + index(y);
}

Topology assign_square_clusters(Topology topo, double target_q)
{
    if (topo.num_aps() == 0) {
        throw std::invalid_argument("topology has no APs");
    }
    if (!(target_q >= 1.0)) {
        throw std::invalid_argument("target cluster size must be at least 1");
    }
    const double m = static_cast<double>(topo.num_aps());
    const auto n = static_cast<std::size_t>(std::max(1.0, std::round(std::sqrt(m / target_q))));
    topo.single_cluster_warning = target_q > m;
    topo.grid_dim = n;
    topo.members.assign(n * n, {});
    topo.cluster_of.resize(topo.num_aps());
    for (std::size_t a = 0; a < topo.num_aps(); ++a) {
        const auto& p = topo.ap_positions[a];
        const std::size_t c = grid_cell_of(p.x, p.y, topo.area_side, n);
        topo.cluster_of[a] = c;
        topo.members[c].push_back(a);
    }
    topo.q_avg = m / static_cast<double>(n * n);
    return topo;
}

Topology load_topology(const std::filesystem::path& path, double area_side)
{
    if (!(area_side > 0.0)) {
        throw std::invalid_argument("area side must be positive");
    }
    const CsvTable table = read_csv(path, {"x_m", "y_m", "z_m"});
    if (table.rows.empty()) {
        throw ValidationError(path.string() + ": no APs");
    }
    Topology topo;
    topo.area_side = area_side;
    for (const auto& row : table.rows) {
        const Position3 p{row.number(0), row.number(1), row.number(2)};
        if (!inside_square(p.x, p.y, area_side)) {
            throw ValidationError(path.string() + ":" + std::to_string(row.line) +
                                  ": AP outside the declared area");
        }
        topo.ap_positions.push_back(p);
    }
    return topo;
}

}  // namespace cfmm
