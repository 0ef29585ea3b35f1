#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>

namespace cfmm {

using Rng = std::mt19937_64;

/// Derives an independent generator from a master seed and a path of stream
/// tags, e.g. `substream(seed, {realization, StreamTag::fading, block, ue})`.
/// The result depends only on its arguments, never on call order.
Rng substream(std::uint64_t master_seed, std::initializer_list<std::uint64_t> path);

namespace stream {
inline constexpr std::uint64_t topology = 1;
inline constexpr std::uint64_t shadowing = 2;
inline constexpr std::uint64_t trace = 3;
inline constexpr std::uint64_t fading = 4;
inline constexpr std::uint64_t fading_samples = 5;
inline constexpr std::uint64_t realization = 6;
}  // namespace stream

}  // namespace cfmm
