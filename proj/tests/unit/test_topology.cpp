#include <doctest.h>

#include <cmath>
#include <set>

#include "cfmm/error.hpp"
#include "cfmm/topology.hpp"
#include "test_util.hpp"

using namespace cfmm;

TEST_CASE("uniform topology places every AP inside the area at AP height")
{
    Rng rng = substream(7, {1});
    const Topology t = generate_uniform_topology(750.0, 308, 10.0, rng);
    CHECK(t.num_aps() == 308);
    for (const auto& p : t.ap_positions) {
        CHECK(p.x >= 0.0);
        CHECK(p.x <= 750.0);
        CHECK(p.y >= 0.0);
        CHECK(p.y <= 750.0);
        CHECK(p.z == 10.0);
    }
    CHECK_FALSE(t.clustered());
    CHECK(t.density_per_km2() == doctest::Approx(308.0 / 0.5625));
}

TEST_CASE("uniform topology edge cases")
{
    Rng rng = substream(7, {2});
    CHECK(generate_uniform_topology(750.0, 1, 10.0, rng).num_aps() == 1);
    CHECK(generate_uniform_topology(750.0, 665, 10.0, rng).num_aps() == 665);
    CHECK_THROWS_AS(generate_uniform_topology(0.0, 10, 10.0, rng), std::invalid_argument);
    CHECK_THROWS_AS(generate_uniform_topology(-5.0, 10, 10.0, rng), std::invalid_argument);
    CHECK_THROWS_AS(generate_uniform_topology(750.0, 0, 10.0, rng), std::invalid_argument);
}

TEST_CASE("same stream gives the same layout")
{
    Rng a = substream(99, {1, 2});
    Rng b = substream(99, {1, 2});
    Rng c = substream(99, {1, 3});
    const auto ta = generate_uniform_topology(500.0, 50, 10.0, a);
    const auto tb = generate_uniform_topology(500.0, 50, 10.0, b);
    const auto tc = generate_uniform_topology(500.0, 50, 10.0, c);
    CHECK(ta.ap_positions == tb.ap_positions);
    CHECK(ta.ap_positions != tc.ap_positions);
}

TEST_CASE("square clusters: grid size and partition")
{
    Rng rng = substream(3, {1});
    const Topology t = assign_square_clusters(generate_uniform_topology(750.0, 308, 10.0, rng), 20.0);
    // sqrt(308 / 20) = 3.92 rounds to 4.
    CHECK(t.grid_dim == 4);
    CHECK(t.num_clusters() == 16);
    CHECK(t.q_avg == doctest::Approx(19.25));
    CHECK_FALSE(t.single_cluster_warning);

    std::set<std::size_t> seen;
    const double cell = 750.0 / 4.0;
    for (std::size_t c = 0; c < t.num_clusters(); ++c) {
        for (std::size_t m : t.members[c]) {
            CHECK(t.cluster_of[m] == c);
            CHECK(seen.insert(m).second);
            const auto& p = t.ap_positions[m];
            const auto col = std::min<std::size_t>(3, static_cast<std::size_t>(p.x / cell));
            const auto row = std::min<std::size_t>(3, static_cast<std::size_t>(p.y / cell));
            CHECK(c == col * 4 + row);
        }
    }
    CHECK(seen.size() == 308);

    const Topology t34 = assign_square_clusters(t, 34.0);
    CHECK(t34.grid_dim == 3);
    CHECK(t34.q_avg == doctest::Approx(308.0 / 9.0));
}

TEST_CASE("cluster size larger than M collapses to one cluster")
{
    Rng rng = substream(3, {2});
    const Topology t = assign_square_clusters(generate_uniform_topology(100.0, 5, 10.0, rng), 50.0);
    CHECK(t.grid_dim == 1);
    CHECK(t.num_clusters() == 1);
    CHECK(t.single_cluster_warning);
    CHECK(t.members[0].size() == 5);
}

TEST_CASE("grid cell of boundary points")
{
    CHECK(grid_cell_of(0.0, 0.0, 100.0, 2) == 0);
    CHECK(grid_cell_of(100.0, 100.0, 100.0, 2) == 3);
    CHECK(grid_cell_of(50.0, 0.0, 100.0, 2) == 2);
    CHECK(grid_cell_of(49.9, 99.0, 100.0, 2) == 1);
}

TEST_CASE("AP-CSV ingestion")
{
    const auto good = write_temp("aps_good.csv", "x_m,y_m,z_m\n10,20,10\n\n700,5,12\n375,375,10\n");
    const Topology t = load_topology(good, 750.0);
    CHECK(t.num_aps() == 3);
    CHECK(t.ap_positions[1] == Position3{700.0, 5.0, 12.0});

    const auto bad_number = write_temp("aps_bad.csv", "x_m,y_m,z_m\n10,20,10\n10,abc,10\n");
    try {
        load_topology(bad_number, 750.0);
        FAIL("expected a parse error");
    } catch (const ParseError& e) {
        CHECK(e.line() == 3);
    }

    const auto short_row = write_temp("aps_short.csv", "x_m,y_m,z_m\n10,20\n");
    CHECK_THROWS_AS(load_topology(short_row, 750.0), ParseError);

    const auto outside = write_temp("aps_out.csv", "x_m,y_m,z_m\n10,20,10\n800,20,10\n");
    CHECK_THROWS_AS(load_topology(outside, 750.0), ValidationError);

    const auto empty = write_temp("aps_empty.csv", "x_m,y_m,z_m\n");
    CHECK_THROWS_AS(load_topology(empty, 750.0), ValidationError);

    const auto wrong_header = write_temp("aps_header.csv", "x,y,z\n1,2,3\n");
    CHECK_THROWS_AS(load_topology(wrong_header, 750.0), ParseError);
}
