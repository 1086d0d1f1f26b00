#pragma once

#include <cstdint>
#include <string_view>

#include "semcell/types.hpp"

namespace semcell {

// All randomness in the project flows through this keyed, counter-based
// generator. Streams are keyed explicitly by (seed, item, index), so values
// do not depend on call order, container iteration, or platform. Only
// integer arithmetic and IEEE-exact float ops are used, which keeps results
// bit-identical across machines.

inline std::uint64_t fnv1a64(std::string_view s) {
    std::uint64_t h = 1469598103934665603ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    return h;
}

// splitmix64 finalizer (Stafford mix13).
inline std::uint64_t mix64(std::uint64_t x) {
    x ^= x >> 30;
    x *= 0xbf58476d1ce4e5b9ULL;
    x ^= x >> 27;
    x *= 0x94d049bb133111ebULL;
    x ^= x >> 31;
    return x;
}

class KeyedRng {
public:
    KeyedRng(std::uint64_t seed, std::string_view item, std::uint64_t index) {
        state_ = mix64(seed + 0x9e3779b97f4a7c15ULL);
        state_ = mix64(state_ ^ fnv1a64(item));
        state_ = mix64(state_ ^ index);
    }

    std::uint64_t next_u64() {
        state_ += 0x9e3779b97f4a7c15ULL;
        return mix64(state_);
    }

    // Uniform in [0, 1), 53-bit resolution.
    double next_unit() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    // Uniform in [-scale, +scale].
    double next_symmetric(double scale) {
        return (2.0 * next_unit() - 1.0) * scale;
    }

private:
    std::uint64_t state_;
};

// Per-chromosome jitter offset, keyed by (seed, item, chromosome index).
inline Chromosome jitter_offset(std::uint64_t seed, std::string_view item,
                                std::uint64_t chromosome_index, int d, double scale) {
    KeyedRng rng(seed, item, chromosome_index);
    Chromosome delta(static_cast<std::size_t>(d));
    for (auto& x : delta) x = rng.next_symmetric(scale);
    return delta;
}

// Deterministic unit-norm vector keyed by (seed, item). Components are drawn
// uniform in [-1, 1] and normalized; vectors whose norm is too small to
// normalize safely are redrawn.
Chromosome deterministic_unit_vector(std::uint64_t seed, std::string_view item, int d);

} // namespace semcell
