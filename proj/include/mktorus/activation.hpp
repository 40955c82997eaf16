#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>

#include "mktorus/int_ops.hpp"

namespace mktorus {

// Piecewise activation, pre-zoomed by 16: the tangent of 16*sigmoid(x) at
// the origin, clamped to [0, 16].
//   g(x) = 16        x > 2
//          4x + 8    -2 <= x <= 2
//          0         x < -2
inline int64_t g_clear_int(int64_t x) {
    if (x > 2) return 16;
    if (x < -2) return 0;
    return 4 * x + 8;
}

inline double g_clear(double x) {
    if (x > 2.0) return 16.0;
    if (x < -2.0) return 0.0;
    return 4.0 * x + 8.0;
}

inline double sigmoid_clear(double x) { return 1.0 / (1.0 + std::exp(-x)); }

// Maclaurin expansion of the sigmoid: 1/2 + x/4 - x^3/48 + x^5/480
// - 17x^7/80640, truncated at `order` (3 or 7).
inline double taylor_clear(double x, int order) {
    double v = 0.5 + x / 4.0;
    if (order >= 3) v -= x * x * x / 48.0;
    if (order >= 5) v += std::pow(x, 5) / 480.0;
    if (order >= 7) v -= 17.0 * std::pow(x, 7) / 80640.0;
    return v;
}

struct ActSpec {
    enum class Kind { piecewise_g, taylor } kind = Kind::piecewise_g;
    int order = 7;          // taylor only: 3 or 7
    uint32_t q = 16;        // power-of-two input scale for taylor

    static ActSpec g() { return {Kind::piecewise_g, 0, 16}; }
    static ActSpec taylor(int order, uint32_t q = 16) { return {Kind::taylor, order, q}; }
};

// Internal fixed-point scale of the sigmoid coefficients. 2^12 keeps the
// x^5 and x^7 terms from rounding to zero.
inline constexpr uint32_t kTaylorCoeffScale = 4096;
inline constexpr int kTaylorCoeffShift = 12;
inline constexpr int64_t kTaylorC1 = 1024;   // round(2^12 / 4)
inline constexpr int64_t kTaylorC3 = -85;    // round(2^12 / 48)
inline constexpr int64_t kTaylorC5 = 9;      // round(2^12 / 480)
inline constexpr int64_t kTaylorC7 = -1;     // round(17 * 2^12 / 80640)

inline int log2_exact(uint32_t q) {
    if (q == 0 || (q & (q - 1)) != 0) throw std::invalid_argument("scale must be a power of two");
    int s = 0;
    while ((q >> s) != 1) ++s;
    return s;
}

// g over an encrypted word. The input is an unscaled integer; the thresholds
// -2 and 2 are literal. Three headroom bits are added internally so 4x+8
// cannot overflow, then the result (always in [0,16]) is returned at the
// input width. Two compare-quads do all the work: the first picks between 0
// and the ramp, the second caps the ramp at 16.
template <class B>
EncWord<B> act_g(B& be, const EncWord<B>& x) {
    uint32_t l = x.width();
    if (l < 6) throw std::invalid_argument("act_g: width must be at least 6");
    uint32_t lw = l + 3;
    EncWord<B> xw = homogenize(be, x, lw);
    EncWord<B> ramp = add_const(be, shift_left_const(be, xw, 2), 8);
    EncWord<B> mid = compare_quads(be, xw, trivial_word(be, -2, lw),
                                   trivial_word(be, 0, lw), ramp);
    EncWord<B> capped = compare_quads(be, mid, trivial_word(be, 16, lw), mid,
                                      trivial_word(be, 16, lw));
    EncWord<B> out;
    out.bits.assign(capped.bits.begin(), capped.bits.begin() + l);
    return out;
}

namespace gate_cost {
constexpr uint64_t act_g(uint32_t l) {
    uint32_t lw = l + 3;
    return homogenize(l, lw) + add(lw) + 2 * compare_quads(lw);
}
}  // namespace gate_cost

// Fixed-point sigmoid via the truncated Maclaurin series. The input is at
// scale q; Horner steps run at the input width with every product fused
// with its rescale. Output is at the same *16 scale as g.
template <class B>
EncWord<B> act_taylor(B& be, const EncWord<B>& x, int order, uint32_t q) {
    if (order != 3 && order != 7) throw std::invalid_argument("act_taylor: order must be 3 or 7");
    uint32_t l = x.width();
    int qs = log2_exact(q);
    if (l <= uint32_t(kTaylorCoeffShift))
        throw std::invalid_argument("act_taylor: width too small for coefficient scale");

    EncWord<B> u2 = mk_mul_rescale(be, x, x, qs, l);  // x^2 at scale q
    EncWord<B> t;
    if (order == 7) {
        t = trivial_word(be, kTaylorC7, l);
        t = add_const(be, mk_mul_rescale(be, t, u2, qs, l), kTaylorC5);
        t = add_const(be, mk_mul_rescale(be, t, u2, qs, l), kTaylorC3);
    } else {
        t = trivial_word(be, kTaylorC3, l);
    }
    t = add_const(be, mk_mul_rescale(be, t, u2, qs, l), kTaylorC1);
    // odd series times x, then down from coefficient scale to the *16 output
    EncWord<B> s = mk_mul_rescale(be, t, x, qs, l);
    s = rescale(be, s, kTaylorCoeffShift - 4, l);
    return add_const(be, s, 8);
}

namespace gate_cost {
constexpr uint64_t act_taylor(uint32_t l, int order, uint32_t q) {
    uint32_t qs = 0;
    while ((q >> qs) != 1) ++qs;
    uint64_t m = mul_rescale(l, qs, l);
    uint64_t steps = order == 7 ? 4 : 2;  // multiplies after u2; as many adds
    return m /*u2*/ + steps * m + steps * add(l) + rescale(l, 12 - 4, l);
}
}  // namespace gate_cost

// Clear fixed-point reference of act_taylor, same schedule on native
// integers; used by tests and by the integer training engine.
inline int64_t taylor_fixed_int(int64_t x_scaled, int order, uint32_t q, uint32_t l) {
    int qs = log2_exact(q);
    auto wrap = [l](int64_t v) {
        uint64_t u = static_cast<uint64_t>(v) & ((l == 64) ? ~0ull : ((1ull << l) - 1));
        if (l < 64 && (u >> (l - 1)) & 1) u |= ~0ull << l;
        return static_cast<int64_t>(u);
    };
    auto mul_rs = [&](int64_t a, int64_t b) {
        uint32_t W = qs + l;
        uint64_t mask = W >= 64 ? ~0ull : ((1ull << W) - 1);
        uint64_t prod = (static_cast<uint64_t>(a) * static_cast<uint64_t>(b)) & mask;
        return wrap(static_cast<int64_t>(prod >> qs));
    };
    int64_t u2 = mul_rs(x_scaled, x_scaled);
    int64_t t;
    if (order == 7) {
        t = kTaylorC7;
        t = wrap(mul_rs(t, u2) + kTaylorC5);
        t = wrap(mul_rs(t, u2) + kTaylorC3);
    } else {
        t = kTaylorC3;
    }
    t = wrap(mul_rs(t, u2) + kTaylorC1);
    int64_t s = mul_rs(t, x_scaled);
    s = wrap(s >> (kTaylorCoeffShift - 4));
    return wrap(s + 8);
}

}  // namespace mktorus
