#include "cfmm/mobility.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <stdexcept>

#include "cfmm/csv.hpp"
#include "cfmm/error.hpp"

namespace cfmm {

const Position2& UETrace::at(std::size_t n) const
{
    if (positions.empty()) {
        throw std::out_of_range("empty trace");
    }
    return positions[std::min(n, positions.size() - 1)];
}

namespace {

struct Leg {
    Position2 from;
    Position2 to;
    double length;
};

Leg draw_leg(const Position2& from, double area_side, double transition_scale, Rng& rng)
{
    std::uniform_real_distribution<double> angle(0.0, 2.0 * std::numbers::pi);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    auto rayleigh = [&] {
        // 1 - U lies in (0, 1], so the log is finite.
        return transition_scale * std::sqrt(-2.0 * std::log(1.0 - unit(rng)));
    };
    double length = rayleigh();
    for (int attempt = 1;; ++attempt) {
        const double theta = angle(rng);
        const Position2 to{from.x + length * std::cos(theta), from.y + length * std::sin(theta)};
        if (inside_square(to.x, to.y, area_side)) {
            return {from, to, length};
        }
        // A leg longer than the room available in every direction would never fit.
        if (attempt % 32 == 0) {
            length = rayleigh();
        }
    }
}

}  // namespace

UETrace generate_rwp_trace(double area_side, double speed, std::size_t num_blocks,
                           double block_duration, double transition_scale, Rng& rng)
{
    if (!(area_side > 0.0)) {
        throw std::invalid_argument("area side must be positive");
    }
    if (!(speed >= 0.0)) {
        throw std::invalid_argument("speed must be non-negative");
    }
    if (num_blocks == 0) {
        throw std::invalid_argument("trace needs at least one block");
    }
    if (!(block_duration > 0.0)) {
        throw std::invalid_argument("block duration must be positive");
    }
    if (!(transition_scale > 0.0)) {
        throw std::invalid_argument("transition scale must be positive");
    }

    std::uniform_real_distribution<double> coord(0.0, area_side);
    UETrace trace;
    trace.speed = speed;
    trace.block_duration = block_duration;
    trace.positions.reserve(num_blocks);
    Position2 start;
    start.x = coord(rng);
    start.y = coord(rng);
    trace.positions.push_back(start);
    if (speed == 0.0) {
        trace.positions.resize(num_blocks, start);
        return trace;
    }

    const double step = speed * block_duration;
    Leg leg = draw_leg(start, area_side, transition_scale, rng);
    double along = 0.0;  // distance already travelled on `leg`
    while (trace.positions.size() < num_blocks) {
        double remaining = step;
        while (along + remaining > leg.length) {
            remaining -= leg.length - along;
            leg = draw_leg(leg.to, area_side, transition_scale, rng);
            along = 0.0;
        }
        along += remaining;
        const double f = leg.length > 0.0 ? along / leg.length : 0.0;
        trace.positions.push_back({leg.from.x + f * (leg.to.x - leg.from.x),
                                   leg.from.y + f * (leg.to.y - leg.from.y)});
    }
    return trace;
}

std::vector<UETrace> load_traces(const std::filesystem::path& path, double block_duration,
                                 double area_side)
{
    if (!(block_duration > 0.0)) {
        throw std::invalid_argument("block duration must be positive");
    }
    struct Waypoint {
        double t;
        Position2 p;
    };
    const CsvTable table = read_csv(path, {"ue_id", "t_s", "x_m", "y_m"});
    if (table.rows.empty()) {
        throw ValidationError(path.string() + ": no waypoints");
    }

    std::map<long long, std::vector<Waypoint>> by_ue;
    long long last_id = 0;
    bool first = true;
    for (const auto& row : table.rows) {
        const double id_value = row.number(0);
        if (id_value != std::floor(id_value)) {
            throw ParseError(row.path, row.line, "ue_id must be an integer");
        }
        const auto id = static_cast<long long>(id_value);
        if (!first && id < last_id) {
            throw ParseError(row.path, row.line, "rows must be sorted by ue_id");
        }
        first = false;
        last_id = id;
        const Waypoint w{row.number(1), {row.number(2), row.number(3)}};
        auto& wps = by_ue[id];
        if (!wps.empty() && !(w.t > wps.back().t)) {
            throw ParseError(row.path, row.line, "timestamps must be strictly increasing");
        }
        if (!inside_square(w.p.x, w.p.y, area_side)) {
            throw ValidationError(path.string() + ":" + std::to_string(row.line) +
                                  ": waypoint outside the declared area");
        }
        wps.push_back(w);
    }

    std::vector<UETrace> traces;
    traces.reserve(by_ue.size());
    for (const auto& [id, wps] : by_ue) {
        UETrace trace;
        trace.block_duration = block_duration;
        const double t0 = wps.front().t;
        const double span = wps.back().t - t0;
        // Grid points that coincide with the last waypoint up to rounding are kept.
        const auto samples = static_cast<std::size_t>(std::floor(span / block_duration + 1e-9)) + 1;
        std::size_t seg = 0;
        for (std::size_t n = 0; n < samples; ++n) {
            const double t = t0 + static_cast<double>(n) * block_duration;
            while (seg + 1 < wps.size() - 1 && wps[seg + 1].t <= t) {
                ++seg;
            }
            if (wps.size() == 1) {
                trace.positions.push_back(wps.front().p);
                continue;
            }
            const Waypoint& a = wps[seg];
            const Waypoint& b = wps[seg + 1];
            const double snap = 1e-9 * block_duration;
            if (std::abs(t - a.t) <= snap) {
                trace.positions.push_back(a.p);
                continue;
            }
            if (std::abs(b.t - t) <= snap) {
                trace.positions.push_back(b.p);
                continue;
            }
            const double f = std::clamp((t - a.t) / (b.t - a.t), 0.0, 1.0);
            trace.positions.push_back({a.p.x + f * (b.p.x - a.p.x), a.p.y + f * (b.p.y - a.p.y)});
        }
        trace.speed = max_step(trace) / block_duration;
        traces.push_back(std::move(trace));
    }
    return traces;
}

double max_step(const UETrace& trace)
{
    double worst = 0.0;
    for (std::size_t i = 1; i < trace.positions.size(); ++i) {
        worst = std::max(worst, distance(trace.positions[i - 1], trace.positions[i]));
    }
    return worst;
}

}  // namespace cfmm
