#pragma once

#include <cstddef>
#include <filesystem>
#include <vector>

#include "cfmm/geometry.hpp"
#include "cfmm/rng.hpp"

namespace cfmm {

/// Positions of one UE sampled at communication-block boundaries.
struct UETrace {
    /// Walking speed in m/s; for ingested traces the largest per-block speed observed.
    double speed = 0.0;
    double block_duration = 0.0;
    std::vector<Position2> positions;

    double duration() const { return static_cast<double>(positions.size()) * block_duration; }
    /// Position at block `n`; holds the final position once the trace is exhausted.
    const Position2& at(std::size_t n) const;
};

/// Random-waypoint walk with zero pause: uniform start, uniform leg direction,
/// Rayleigh(transition_scale) leg length, constant speed. Legs leaving the
/// square are redrawn.
UETrace generate_rwp_trace(double area_side, double speed, std::size_t num_blocks,
                           double block_duration, double transition_scale, Rng& rng);

/// Reads the trace-CSV format (`ue_id,t_s,x_m,y_m`) and resamples every UE's
/// waypoints by linear interpolation onto a `block_duration` grid starting at
/// its first timestamp. Traces are returned in ascending ue_id order.
std::vector<UETrace> load_traces(const std::filesystem::path& path, double block_duration,
                                 double area_side);

/// Largest distance between consecutive samples of `trace`.
double max_step(const UETrace& trace);

}  // namespace cfmm
