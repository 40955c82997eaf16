#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdint>

#include "mktorus/torus.hpp"

using namespace mktorus;

TEST_CASE("torus_from_real on dyadic rationals") {
    CHECK(torus_from_real(0.0).raw == 0x00000000u);
    CHECK(torus_from_real(0.25).raw == 0x40000000u);
    CHECK(torus_from_real(5.0 / 8.0).raw == 0xA0000000u);
    CHECK(torus_from_real(-0.125).raw == 0xE0000000u);
    CHECK(torus_from_real(1.25).raw == 0x40000000u);  // frac wraps
}

TEST_CASE("addition matches real addition for dyadics") {
    SplitRng rng(7);
    for (int i = 0; i < 2000; ++i) {
        // dyadics with denominator 2^20 so x, y, x+y are all exact
        double x = double(rng.next_u32() >> 12) * 0x1.0p-20;
        double y = double(rng.next_u32() >> 12) * 0x1.0p-20;
        CHECK((torus_from_real(x) + torus_from_real(y)).raw == torus_from_real(x + y).raw);
    }
}

TEST_CASE("integer scaling distributes over addition") {
    SplitRng rng(8);
    for (int i = 0; i < 2000; ++i) {
        Torus32 a{rng.next_u32()}, b{rng.next_u32()};
        int64_t c = int64_t(rng.next_u32() % 1000) - 500;
        CHECK(scale(c, a + b).raw == (scale(c, a) + scale(c, b)).raw);
    }
}

TEST_CASE("decode_quarter_bit bands") {
    CHECK(decode_quarter_bit(Torus32{0x40000000u}).bit == 1);  // exactly 1/4
    CHECK(decode_quarter_bit(Torus32{0x40000000u}).in_band);
    CHECK(decode_quarter_bit(Torus32{0x00000001u}).bit == 0);
    CHECK(decode_quarter_bit(Torus32{0x00000001u}).in_band);
    // 3/16 is within 1/8 of 1/4: 1/4 - 3/16 = 1/16 < 1/8
    CHECK(decode_quarter_bit(Torus32{0x30000000u}).bit == 1);
    // tie at exactly 1/8 decodes to 1
    CHECK(decode_quarter_bit(Torus32{0x20000000u}).bit == 1);
    CHECK(decode_quarter_bit(Torus32{0x20000000u}).in_band);
    // no-man's land [3/8, 7/8) resolves to the nearer message, flagged
    CHECK(decode_quarter_bit(torus_from_real(7.0 / 16.0)).bit == 1);
    CHECK_FALSE(decode_quarter_bit(torus_from_real(7.0 / 16.0)).in_band);
    CHECK(decode_quarter_bit(torus_from_real(11.0 / 16.0)).bit == 0);
    CHECK_FALSE(decode_quarter_bit(torus_from_real(11.0 / 16.0)).in_band);
}

TEST_CASE("decode recovers the message for every |e| < 1/8, grid step 2^-12") {
    for (int m = 0; m <= 1; ++m) {
        Torus32 msg{m ? 0x40000000u : 0u};
        for (int j = -511; j <= 511; ++j) {
            Torus32 e{static_cast<uint32_t>(int64_t(j) << 20)};  // j * 2^-12
            auto d = decode_quarter_bit(msg + e);
            CHECK(d.bit == m);
            CHECK(d.in_band);
        }
    }
}

TEST_CASE("negation identity: -e decodes to 0 for |e| < 1/8") {
    for (int j = -511; j <= 511; ++j) {
        Torus32 e{static_cast<uint32_t>(int64_t(j) << 20)};
        CHECK(decode_quarter_bit(-e).bit == 0);
    }
}

TEST_CASE("noise_within_budget is the exact |e| < 1/8 predicate") {
    for (int m = 0; m <= 1; ++m) {
        Torus32 msg{m ? 0x40000000u : 0u};
        CHECK(noise_within_budget(msg + Torus32{0x1FFFFFFFu}, m));
        CHECK(noise_within_budget(msg - Torus32{0x1FFFFFFFu}, m));
        CHECK_FALSE(noise_within_budget(msg + Torus32{0x20000000u}, m));
        CHECK_FALSE(noise_within_budget(msg - Torus32{0x20000000u}, m));
    }
}

TEST_CASE("noise sampler") {
    SplitRng rng(42);

    SUBCASE("alpha=0 is exactly zero") {
        NoiseParams p{0.0, 0};
        for (int i = 0; i < 100; ++i) CHECK(sample_noise(p, rng).raw == 0u);
    }

    SUBCASE("empirical 8-sigma tail bound at alpha=2^-25") {
        NoiseParams p{0x1.0p-25, 0};
        const double bound = 4294967296.0 * 8.0 * p.alpha;
        int inside = 0;
        const int trials = 100000;
        for (int i = 0; i < trials; ++i) {
            auto t = sample_noise(p, rng);
            double v = static_cast<double>(static_cast<int32_t>(t.raw));
            if (v < 0) v = -v;
            if (v < bound) ++inside;
        }
        CHECK(inside >= trials * 0.9999);
    }

    SUBCASE("different seeds give different sequences") {
        SplitRng r1(1), r2(2);
        NoiseParams p{0x1.0p-25, 0};
        bool any_diff = false;
        for (int i = 0; i < 16; ++i)
            if (sample_noise(p, r1).raw != sample_noise(p, r2).raw) any_diff = true;
        CHECK(any_diff);
    }

    SUBCASE("same seed replays identically") {
        SplitRng r1(9), r2(9);
        NoiseParams p{0x1.0p-20, 0};
        for (int i = 0; i < 64; ++i)
            CHECK(sample_noise(p, r1).raw == sample_noise(p, r2).raw);
    }
}

TEST_CASE("split streams are independent and reproducible") {
    SplitRng root(123);
    auto a1 = root.split(1);
    auto a2 = root.split(2);
    auto b1 = SplitRng(123).split(1);
    CHECK(a1.next_u64() == b1.next_u64());
    CHECK(a1.next_u64() != a2.next_u64());
}
