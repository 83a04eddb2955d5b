#pragma once

#include <cstdint>
#include <random>

#include "carnot/scalar.hpp"

namespace carnot {

/// Stable seed-mixing (splitmix64). Used to derive independent per-trial
/// substreams so that parallel runs reduce to the same numbers as serial ones.
inline std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t index) {
    std::uint64_t z = seed + 0x9e3779b97f4a7c15ull * (index + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

using Rng = std::mt19937_64;

inline Rng make_rng(std::uint64_t seed) { return Rng(seed); }

/// Uniform double in [0,1). Implemented directly on the raw 64-bit stream so
/// results do not depend on the standard library's distribution internals.
inline double uniform01(Rng& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

inline double uniform(Rng& rng, double lo, double hi) { return lo + (hi - lo) * uniform01(rng); }

/// Uniform integer in [lo, hi] (inclusive).
inline long uniform_int(Rng& rng, long lo, long hi) {
    return lo + static_cast<long>(rng() % static_cast<std::uint64_t>(hi - lo + 1));
}

/// Random rational n/d with |n| <= magnitude and 1 <= d <= magnitude.
/// Bounded magnitudes keep exact arithmetic sizes under control during long
/// bracket/product chains.
inline Rational random_rational(Rng& rng, long magnitude = 10) {
    long num = uniform_int(rng, -magnitude, magnitude);
    long den = uniform_int(rng, 1, magnitude);
    Rational q(num, den);
    q.canonicalize();
    return q;
}

/// Random nonzero rational.
inline Rational random_nonzero_rational(Rng& rng, long magnitude = 10) {
    for (;;) {
        Rational q = random_rational(rng, magnitude);
        if (sgn(q) != 0) return q;
    }
}

} // namespace carnot
