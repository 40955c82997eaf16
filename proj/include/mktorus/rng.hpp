#pragma once

#include <cmath>
#include <cstdint>

namespace mktorus {

// Seedable, splittable PRNG (splitmix64 core). Every protocol role owns its
// own instance; split() derives an independent stream so separate processes
// replay identically from one root seed. Not cryptographically secure.
class SplitRng {
public:
    explicit SplitRng(uint64_t seed) : state_(seed) {}

    uint64_t next_u64() {
        state_ += 0x9E3779B97F4A7C15ull;
        uint64_t z = state_;
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
        return z ^ (z >> 31);
    }

    uint32_t next_u32() { return static_cast<uint32_t>(next_u64() >> 32); }

    bool next_bit() { return (next_u64() >> 63) != 0; }

    // uniform in (0, 1]; never returns 0 so it is safe under log()
    double next_unit() {
        return (static_cast<double>(next_u64() >> 11) + 1.0) * 0x1.0p-53;
    }

    // standard normal via Box-Muller, one draw per call
    double next_gaussian() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        double u1 = next_unit();
        double u2 = next_unit();
        double r = std::sqrt(-2.0 * std::log(u1));
        double a = 6.283185307179586476925286766559 * u2;
        spare_ = r * std::sin(a);
        have_spare_ = true;
        return r * std::cos(a);
    }

    // child generator on an independent stream; deterministic in (seed, stream)
    SplitRng split(uint64_t stream) const {
        uint64_t z = state_ ^ (0xD6E8FEB86659FD93ull * (stream + 1));
        z = (z ^ (z >> 32)) * 0xD6E8FEB86659FD93ull;
        z = (z ^ (z >> 32)) * 0xD6E8FEB86659FD93ull;
        return SplitRng(z ^ (z >> 32));
    }

private:
    uint64_t state_;
    double spare_ = 0.0;
    bool have_spare_ = false;
};

}  // namespace mktorus
