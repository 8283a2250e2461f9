#pragma once

#include <cstdint>
#include <random>

namespace qhj {

namespace detail {

// splitmix64 finalizer, used only to spread (seed, stream) pairs.
inline std::uint64_t mix64(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

} // namespace detail

/// Independent, reproducible engine for one stream of a master seed.
/// Stream indices are stable identifiers (chunk numbers), so results do
/// not depend on how streams are distributed over threads.
inline std::mt19937_64 make_stream(std::uint64_t seed, std::uint64_t stream) {
    return std::mt19937_64{detail::mix64(detail::mix64(seed) ^ detail::mix64(~stream))};
}

/// Uniform double in [0, 1) from the top 53 bits, identical on every
/// platform (avoids distribution-object implementation differences).
inline double uniform01(std::mt19937_64& gen) {
    return static_cast<double>(gen() >> 11) * 0x1.0p-53;
}

/// Uniform double in [lo, hi).
inline double uniform_in(std::mt19937_64& gen, double lo, double hi) {
    return lo + (hi - lo) * uniform01(gen);
}

} // namespace qhj
