#pragma once

#include <cstdint>
#include <random>

namespace evx {

// 64-bit mixer (splitmix64 finalizer). Used to derive independent
// per-replication stream seeds from (master seed, replication id).
inline std::uint64_t mix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

inline std::uint64_t derive_stream_seed(std::uint64_t seed, std::uint64_t replication_id) {
    return mix64(mix64(seed) ^ mix64(replication_id ^ 0xA5A5A5A5A5A5A5A5ULL));
}

// mt19937_64 is fully specified by the standard, so sequences are
// reproducible across platforms; std::uniform_real_distribution is not,
// hence the explicit mapping below.
using Engine = std::mt19937_64;

inline Engine make_engine(std::uint64_t seed, std::uint64_t replication_id) {
    return Engine(derive_stream_seed(seed, replication_id));
}

// Uniform draw strictly inside (0,1): (k + 1/2) * 2^-52 with k on 52 bits.
inline double uniform_open01(Engine& eng) {
    const std::uint64_t bits = eng() >> 12;
    return (static_cast<double>(bits) + 0.5) * 0x1.0p-52;
}

} // namespace evx
