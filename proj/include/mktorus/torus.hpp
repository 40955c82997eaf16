#pragma once

#include <cmath>
#include <cstdint>

#include "mktorus/rng.hpp"

namespace mktorus {

// Element of the discretized torus T = R/Z, stored as raw/2^32 in [0,1).
// Group operations are exact: uint32 wraparound is torus addition mod 1.
struct Torus32 {
    uint32_t raw = 0;

    friend Torus32 operator+(Torus32 a, Torus32 b) { return {a.raw + b.raw}; }
    friend Torus32 operator-(Torus32 a, Torus32 b) { return {a.raw - b.raw}; }
    friend Torus32 operator-(Torus32 a) { return {0u - a.raw}; }
    Torus32& operator+=(Torus32 o) { raw += o.raw; return *this; }
    Torus32& operator-=(Torus32 o) { raw -= o.raw; return *this; }
    friend bool operator==(Torus32 a, Torus32 b) { return a.raw == b.raw; }
    friend bool operator!=(Torus32 a, Torus32 b) { return a.raw != b.raw; }
};

// integer scalar multiple; distributes over addition mod 2^32
inline Torus32 scale(int64_t c, Torus32 t) {
    return {static_cast<uint32_t>(static_cast<uint64_t>(c) * t.raw)};
}

// round(frac(r) * 2^32) mod 2^32; exact for dyadic rationals with
// denominator <= 2^32
inline Torus32 torus_from_real(double r) {
    double f = r - std::floor(r);
    auto v = static_cast<uint64_t>(std::llround(f * 4294967296.0));
    return {static_cast<uint32_t>(v)};
}

// representative in [-1/2, 1/2)
inline double torus_to_signed_real(Torus32 t) {
    return static_cast<double>(static_cast<int32_t>(t.raw)) * 0x1.0p-32;
}

// torus distance |a - b| mod 1, as a raw 32-bit magnitude in [0, 2^31]
inline uint32_t torus_dist_raw(Torus32 a, Torus32 b) {
    uint32_t d = a.raw - b.raw;
    return d <= 0x80000000u ? d : 0u - d;
}

struct NoiseParams {
    double alpha = 0.0;     // Gaussian stddev on the torus
    uint64_t rng_seed = 0;
};

// centered Gaussian with stddev alpha, rounded to the 2^-32 grid
inline Torus32 sample_noise(const NoiseParams& p, SplitRng& rng) {
    if (p.alpha == 0.0) {
        return {0};
    }
    return torus_from_real(p.alpha * rng.next_gaussian());
}

struct DecodedBit {
    uint8_t bit = 0;
    // phase landed inside one of the two radius-1/8 decode bands
    // ([7/8,1/8) for 0, [1/8,3/8) for 1); clear means no-man's land
    bool in_band = false;
};

// Message space {0, 1/4}. Band boundaries are half-open; a phase at exactly
// 1/8 decodes to 1. Phases in [3/8, 5/8) resolve to 1 and [5/8, 7/8) to 0
// (nearer message), with in_band cleared.
inline DecodedBit decode_quarter_bit(Torus32 phase) {
    DecodedBit d;
    d.bit = (phase.raw - 0x20000000u) < 0x80000000u ? 1 : 0;
    d.in_band = (phase.raw - 0xE0000000u) < 0x80000000u;
    return d;
}

// |phase - mu/4| < 1/8 on the torus: the correctness condition for
// decrypting a known message mu. Exact on the 32-bit grid.
inline bool noise_within_budget(Torus32 phase, int mu) {
    Torus32 center{mu ? 0x40000000u : 0u};
    return torus_dist_raw(phase, center) < 0x20000000u;
}

}  // namespace mktorus
