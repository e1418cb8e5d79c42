#pragma once

#include <cstdint>

namespace commvuln {

/// Stateless counter-based generator. Each draw is a pure function of
/// (seed, stream, row, column), so sampling is independent of evaluation
/// order and parallelism.
namespace rng {

inline std::uint64_t mix(std::uint64_t x) {
    // splitmix64 finalizer
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

inline std::uint64_t counter_hash(std::uint64_t seed, std::uint64_t stream,
                                  std::uint64_t row, std::uint64_t col) {
    std::uint64_t h = mix(seed);
    h = mix(h ^ (stream + 0x632be59bd9b4e019ULL));
    h = mix(h ^ (row + 0x9e3779b97f4a7c15ULL));
    h = mix(h ^ (col + 0xd1b54a32d192ed03ULL));
    return h;
}

/// Uniform double in [0, 1) with 53 random bits.
inline double uniform01(std::uint64_t seed, std::uint64_t stream,
                        std::uint64_t row, std::uint64_t col) {
    return static_cast<double>(counter_hash(seed, stream, row, col) >> 11) * 0x1.0p-53;
}

inline double uniform(std::uint64_t seed, std::uint64_t stream, std::uint64_t row,
                      std::uint64_t col, double lo, double hi) {
    return lo + (hi - lo) * uniform01(seed, stream, row, col);
}

} // namespace rng
} // namespace commvuln
