#include "cfmm/serving.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace cfmm {

double CooperationMatrix::average_set_size() const
{
    if (columns.empty()) {
        return 0.0;
    }
    std::size_t total = 0;
    for (const auto& c : columns) {
        total += static_cast<std::size_t>(std::count(c.begin(), c.end(), std::uint8_t{1}));
    }
    return static_cast<double>(total) / static_cast<double>(columns.size());
}

std::vector<std::size_t> strongest_aps(std::span<const double> beta_col, std::size_t best_aps)
{
    if (best_aps == 0 || best_aps > beta_col.size()) {
        throw std::invalid_argument("number of best APs must lie in [1, M]");
    }
    std::vector<std::size_t> order(beta_col.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    const auto stronger = [&](std::size_t a, std::size_t b) {
        return beta_col[a] != beta_col[b] ? beta_col[a] > beta_col[b] : a < b;
    };
    std::partial_sort(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(best_aps), order.end(),
                      stronger);
    order.resize(best_aps);
    return order;
}

ServingColumn candidate_set(std::span<const double> beta_col, const Topology& topo, std::size_t best_aps)
{
    if (!topo.clustered()) {
        throw std::invalid_argument("topology has no cluster assignment");
    }
    if (beta_col.size() != topo.num_aps()) {
        throw std::invalid_argument("SNR column length differs from the number of APs");
    }
    ServingColumn col(topo.num_aps(), 0);
    for (std::size_t ap : strongest_aps(beta_col, best_aps)) {
        for (std::size_t m : topo.members[topo.cluster_of[ap]]) {
            col[m] = 1;
        }
    }
    return col;
}

std::vector<std::size_t> clusters_of(const ServingColumn& col, const Topology& topo)
{
    if (col.size() != topo.num_aps()) {
        throw std::logic_error("serving column length differs from the number of APs");
    }
    std::vector<std::size_t> out;
    for (std::size_t c = 0; c < topo.num_clusters(); ++c) {
        const auto& members = topo.members[c];
        if (members.empty()) {
            continue;
        }
        const bool first = col[members.front()] != 0;
        for (std::size_t m : members) {
            if ((col[m] != 0) != first) {
                throw std::logic_error("serving column covers part of cluster " + std::to_string(c));
            }
        }
        if (first) {
            out.push_back(c);
        }
    }
    return out;
}

std::size_t count_cluster_changes(const ServingColumn& old_col, const ServingColumn& new_col,
                                  const Topology& topo)
{
    const auto a = clusters_of(old_col, topo);
    const auto b = clusters_of(new_col, topo);
    std::vector<std::size_t> diff;
    std::set_symmetric_difference(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(diff));
    return diff.size();
}

CooperationMatrix apply_decision(const CooperationMatrix& current, const CooperationMatrix& candidate,
                                 std::span<const std::uint8_t> decisions)
{
    if (current.num_ues() != candidate.num_ues() || decisions.size() != current.num_ues() ||
        current.num_aps() != candidate.num_aps()) {
        throw std::invalid_argument("cooperation matrix shapes disagree");
    }
    CooperationMatrix next = current;
    for (std::size_t k = 0; k < decisions.size(); ++k) {
        if (decisions[k] != 0) {
            next.columns[k] = candidate.columns[k];
        }
    }
    next.block_index = current.block_index + 1;
    return next;
}

double total_snr(std::span<const double> beta_col, const ServingColumn& col)
{
    double s = 0.0;
    for (std::size_t m = 0; m < beta_col.size(); ++m) {
        if (col[m] != 0) {
            s += beta_col[m];
        }
    }
    return s;
}

}  // namespace cfmm
