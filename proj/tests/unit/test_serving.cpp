#include <doctest.h>

#include <algorithm>
#include <numeric>
#include <set>

#include "cfmm/serving.hpp"

using namespace cfmm;

namespace {

// Four APs per row on a 2x2 grid over a 100 m square: cluster c holds APs 4c..4c+3.
Topology small_grid()
{
    Topology t;
    t.area_side = 100.0;
    const double centers[4][2] = {{25, 25}, {25, 75}, {75, 25}, {75, 75}};
    for (const auto& c : centers) {
        for (int i = 0; i < 4; ++i) {
            t.ap_positions.push_back({c[0] - 10 + 5 * i, c[1] + (i % 2 == 0 ? -5 : 5), 10.0});
        }
    }
    return assign_square_clusters(t, 4.0);
}

ServingColumn column_of(const Topology& topo, std::initializer_list<std::size_t> clusters)
{
    ServingColumn col(topo.num_aps(), 0);
    for (std::size_t c : clusters) {
        for (std::size_t m : topo.members[c]) {
            col[m] = 1;
        }
    }
    return col;
}

// Brute-force candidate: sort by (SNR desc, index asc), take E, union their clusters.
ServingColumn oracle_candidate(const std::vector<double>& beta, const Topology& topo, std::size_t e)
{
    std::vector<std::size_t> idx(beta.size());
    std::iota(idx.begin(), idx.end(), 0);
    std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return beta[a] > beta[b]; });
    std::set<std::size_t> clusters;
    for (std::size_t i = 0; i < e; ++i) {
        clusters.insert(topo.cluster_of[idx[i]]);
    }
    ServingColumn col(beta.size(), 0);
    for (std::size_t m = 0; m < beta.size(); ++m) {
        col[m] = clusters.count(topo.cluster_of[m]) ? 1 : 0;
    }
    return col;
}

}  // namespace

TEST_CASE("grid fixture has four clusters of four")
{
    const Topology t = small_grid();
    REQUIRE(t.num_clusters() == 4);
    for (const auto& members : t.members) {
        CHECK(members.size() == 4);
    }
}

TEST_CASE("candidate set examples")
{
    const Topology t = small_grid();
    std::vector<double> beta(16, 1.0);
    beta[t.members[2][1]] = 50.0;
    beta[t.members[1][0]] = 40.0;
    beta[t.members[1][3]] = 30.0;

    CHECK(candidate_set(beta, t, 1) == column_of(t, {2}));
    CHECK(candidate_set(beta, t, 3) == column_of(t, {1, 2}));
    CHECK(candidate_set(beta, t, 16) == column_of(t, {0, 1, 2, 3}));
    CHECK_THROWS_AS(candidate_set(beta, t, 0), std::invalid_argument);
    CHECK_THROWS_AS(candidate_set(beta, t, 17), std::invalid_argument);
}

TEST_CASE("ties go to the lower AP index")
{
    const Topology t = small_grid();
    std::vector<double> beta(16, 1.0);
    beta[t.members[3][0]] = 9.0;
    beta[t.members[0][0]] = 9.0;
    const auto best = strongest_aps(beta, 1);
    REQUIRE(best.size() == 1);
    CHECK(best[0] == std::min(t.members[3][0], t.members[0][0]));
    CHECK(candidate_set(beta, t, 1) == column_of(t, {t.cluster_of[best[0]]}));
}

TEST_CASE("candidate set matches the brute-force rule on random SNRs")
{
    Rng rng = substream(31, {0});
    Rng topo_rng = substream(31, {1});
    const Topology t = assign_square_clusters(generate_uniform_topology(500.0, 120, 10.0, topo_rng), 10.0);
    std::uniform_int_distribution<int> level(0, 20);  // coarse levels force ties
    for (int trial = 0; trial < 200; ++trial) {
        std::vector<double> beta(t.num_aps());
        for (double& b : beta) {
            b = static_cast<double>(level(rng));
        }
        for (std::size_t e : {1u, 3u, 7u, 20u}) {
            const auto col = candidate_set(beta, t, e);
            CHECK(col == oracle_candidate(beta, t, e));
            CHECK_NOTHROW(clusters_of(col, t));
        }
    }
}

TEST_CASE("cluster changes count the symmetric difference")
{
    const Topology t = small_grid();
    const auto abc = column_of(t, {0, 1, 2});
    const auto bcd = column_of(t, {1, 2, 3});
    CHECK(count_cluster_changes(abc, abc, t) == 0);
    CHECK(count_cluster_changes(abc, bcd, t) == 2);
    CHECK(count_cluster_changes(ServingColumn(16, 0), column_of(t, {0}), t) == 1);
    CHECK(count_cluster_changes(column_of(t, {0}), column_of(t, {1, 2, 3}), t) == 4);

    auto broken = abc;
    broken[t.members[0][0]] = 0;
    CHECK_THROWS_AS(clusters_of(broken, t), std::logic_error);
    CHECK_THROWS_AS(count_cluster_changes(broken, abc, t), std::logic_error);
}

TEST_CASE("apply decision picks columns per UE")
{
    const Topology t = small_grid();
    CooperationMatrix cur(16, 3);
    CooperationMatrix cand(16, 3);
    for (std::size_t k = 0; k < 3; ++k) {
        cur.columns[k] = column_of(t, {0});
        cand.columns[k] = column_of(t, {k + 1});
    }
    cur.block_index = 4;

    const std::vector<std::uint8_t> all{1, 1, 1};
    const std::vector<std::uint8_t> none{0, 0, 0};
    const std::vector<std::uint8_t> mixed{1, 0, 1};
    auto a = apply_decision(cur, cand, all);
    CHECK(a.columns == cand.columns);
    CHECK(a.block_index == 5);
    CHECK(apply_decision(cur, cand, none).columns == cur.columns);
    const auto m = apply_decision(cur, cand, mixed);
    CHECK(m.columns[0] == cand.columns[0]);
    CHECK(m.columns[1] == cur.columns[1]);
    CHECK(m.columns[2] == cand.columns[2]);

    CHECK(a.average_set_size() == doctest::Approx(4.0));
    CHECK_THROWS_AS(apply_decision(cur, CooperationMatrix(16, 2), all), std::invalid_argument);
}

TEST_CASE("total SNR over the serving set")
{
    const std::vector<double> beta{3.0, 1.0, 2.0};
    CHECK(total_snr(beta, ServingColumn{1, 0, 1}) == 5.0);
    CHECK(total_snr(beta, ServingColumn{0, 0, 0}) == 0.0);
}
