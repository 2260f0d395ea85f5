#pragma once

#include <cstdint>
#include <random>

namespace heatcoord {

// splitmix64; used to derive independent per-household seeds from the master
// seed so draws do not depend on population size or visit order.
inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ull;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
    return x ^ (x >> 31);
}

inline std::mt19937_64 substream(std::uint64_t master_seed, std::uint64_t stream_id) {
    return std::mt19937_64(splitmix64(master_seed ^ splitmix64(stream_id)));
}

}  // namespace heatcoord
