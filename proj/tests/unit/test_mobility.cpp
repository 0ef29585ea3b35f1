#include <doctest.h>

#include <cmath>
#include <sstream>

#include "cfmm/error.hpp"
#include "cfmm/mobility.hpp"
#include "test_util.hpp"

using namespace cfmm;

TEST_CASE("random waypoint stays inside and respects the per-block step")
{
    for (std::uint64_t ue = 0; ue < 10; ++ue) {
        Rng rng = substream(11, {ue});
        const UETrace tr = generate_rwp_trace(750.0, 3.6, 3000, 0.02, 50.0, rng);
        REQUIRE(tr.positions.size() == 3000);
        for (const auto& p : tr.positions) {
            CHECK(inside_square(p.x, p.y, 750.0));
        }
        // 3.6 m/s over 20 ms.
        CHECK(max_step(tr) <= 0.072 + 1e-9);
    }
}

TEST_CASE("random waypoint keeps moving at constant speed between turns")
{
    Rng rng = substream(12, {0});
    const UETrace tr = generate_rwp_trace(200.0, 10.0, 500, 0.1, 30.0, rng);
    double travelled = 0.0;
    for (std::size_t i = 1; i < tr.positions.size(); ++i) {
        travelled += distance(tr.positions[i - 1], tr.positions[i]);
    }
    // Corners cut at waypoints only shorten the chord, never lengthen it.
    CHECK(travelled <= 499 * 1.0 + 1e-9);
    CHECK(travelled > 0.9 * 499);
}

TEST_CASE("zero speed is a fixed point")
{
    Rng rng = substream(13, {0});
    const UETrace tr = generate_rwp_trace(750.0, 0.0, 100, 0.02, 50.0, rng);
    for (const auto& p : tr.positions) {
        CHECK(p == tr.positions.front());
    }
    CHECK(tr.at(5000) == tr.positions.back());
}

TEST_CASE("random waypoint argument checks")
{
    Rng rng = substream(14, {0});
    CHECK_THROWS_AS(generate_rwp_trace(750.0, -1.0, 10, 0.02, 50.0, rng), std::invalid_argument);
    CHECK_THROWS_AS(generate_rwp_trace(750.0, 1.0, 0, 0.02, 50.0, rng), std::invalid_argument);
    CHECK_THROWS_AS(generate_rwp_trace(0.0, 1.0, 10, 0.02, 50.0, rng), std::invalid_argument);
}

TEST_CASE("trace ingestion resamples linearly onto the block grid")
{
    const auto path = write_temp("trace_lin.csv",
                                 "ue_id,t_s,x_m,y_m\n"
                                 "0,0,0,0\n"
                                 "0,1,10,0\n"
                                 "1,0.5,5,5\n"
                                 "1,0.9,5,9\n");
    const auto traces = load_traces(path, 0.1, 100.0);
    REQUIRE(traces.size() == 2);
    REQUIRE(traces[0].positions.size() == 11);
    for (std::size_t n = 0; n <= 10; ++n) {
        CHECK(traces[0].positions[n].x == doctest::Approx(static_cast<double>(n)));
        CHECK(traces[0].positions[n].y == 0.0);
    }
    CHECK(traces[0].speed == doctest::Approx(10.0));
    REQUIRE(traces[1].positions.size() == 5);
    CHECK(traces[1].positions[2].y == doctest::Approx(7.0));
}

TEST_CASE("a generated trace survives a CSV round trip")
{
    Rng rng = substream(15, {0});
    const double dt = 0.02;
    const UETrace tr = generate_rwp_trace(750.0, 3.6, 200, dt, 50.0, rng);
    std::ostringstream csv;
    csv.precision(17);
    csv << "ue_id,t_s,x_m,y_m\n";
    for (std::size_t n = 0; n < tr.positions.size(); ++n) {
        csv << 0 << ',' << static_cast<double>(n) * dt << ',' << tr.positions[n].x << ',' << tr.positions[n].y << '\n';
    }
    const auto back = load_traces(write_temp("trace_rt.csv", csv.str()), dt, 750.0);
    REQUIRE(back.size() == 1);
    REQUIRE(back[0].positions.size() == tr.positions.size());
    for (std::size_t n = 0; n < tr.positions.size(); ++n) {
        CHECK(back[0].positions[n].x == doctest::Approx(tr.positions[n].x).epsilon(1e-12));
        CHECK(back[0].positions[n].y == doctest::Approx(tr.positions[n].y).epsilon(1e-12));
    }
}

TEST_CASE("trace ingestion errors")
{
    const auto backwards = write_temp("trace_back.csv", "ue_id,t_s,x_m,y_m\n0,1,0,0\n0,0.5,1,1\n");
    try {
        load_traces(backwards, 0.1, 100.0);
        FAIL("expected a parse error");
    } catch (const ParseError& e) {
        CHECK(e.line() == 3);
    }
    const auto duplicate = write_temp("trace_dup.csv", "ue_id,t_s,x_m,y_m\n0,1,0,0\n0,1,1,1\n");
    CHECK_THROWS_AS(load_traces(duplicate, 0.1, 100.0), ParseError);

    const auto unsorted = write_temp("trace_unsorted.csv", "ue_id,t_s,x_m,y_m\n1,0,0,0\n0,1,1,1\n");
    CHECK_THROWS_AS(load_traces(unsorted, 0.1, 100.0), ParseError);

    const auto outside = write_temp("trace_out.csv", "ue_id,t_s,x_m,y_m\n0,0,0,0\n0,1,150,1\n");
    CHECK_THROWS_AS(load_traces(outside, 0.1, 100.0), ValidationError);

    const auto garbage = write_temp("trace_garbage.csv", "ue_id,t_s,x_m,y_m\n0,zero,0,0\n");
    CHECK_THROWS_AS(load_traces(garbage, 0.1, 100.0), ParseError);
}
