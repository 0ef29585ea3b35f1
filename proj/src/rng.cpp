#include "cfmm/rng.hpp"

namespace cfmm {

namespace {

constexpr std::uint64_t splitmix64(std::uint64_t x)
{
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

}  // namespace

Rng substream(std::uint64_t master_seed, std::initializer_list<std::uint64_t> path)
{
    std::uint64_t key = splitmix64(master_seed);
    for (std::uint64_t tag : path) {
        key = splitmix64(key ^ splitmix64(tag + 0x632be59bd9b4e019ULL));
    }
    std::seed_seq seq{static_cast<std::uint32_t>(key), static_cast<std::uint32_t>(key >> 32),
                      static_cast<std::uint32_t>(splitmix64(key)),
                      static_cast<std::uint32_t>(splitmix64(key) >> 32)};
    return Rng(seq);
}

}  // namespace cfmm
