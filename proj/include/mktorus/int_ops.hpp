#pragma once

#include <cstdint>
#include <stdexcept>

#include "mktorus/enc_word.hpp"
#include "mktorus/gate_backend.hpp"

namespace mktorus {

// Deterministic bootstrapped-gate budgets of every operator, mirrored by the
// implementations below and asserted in the tests. NOT gates are free.
namespace gate_cost {

constexpr uint64_t add(uint32_t l) { return 5ull * l - 3; }  // ripple carry
constexpr uint64_t sub(uint32_t l) { return add(l); }
constexpr uint64_t mux(uint32_t l) { return 3ull * l; }
constexpr uint64_t homogenize(uint32_t l, uint32_t lp) { return lp - l; }

// schoolbook rows accumulated at their offset, operands already at width W
constexpr uint64_t mul_core(uint32_t W) {
    uint64_t rows = uint64_t(W) * (W + 1) / 2;          // AND gates
    uint64_t adds = 0;
    for (uint32_t w = 1; w < W; ++w) adds += add(w);    // row accumulation
    return rows + adds;
}

constexpr uint64_t mul(uint32_t l) { return mul_core(2 * l) + 2ull * l; }

constexpr uint64_t mul_rescale(uint32_t l, uint32_t shift, uint32_t out) {
    uint32_t W = shift + out;
    uint64_t ext = W > l ? 2ull * (W - l) : 0;
    return mul_core(W) + ext;
}

constexpr uint64_t rescale(uint32_t l, uint32_t shift, uint32_t out) {
    return shift + out > l ? (shift + out - l) : 0;
}

constexpr uint64_t compare_quads(uint32_t l) {
    return 2 * homogenize(l, l + 1) + sub(l + 1) + 2ull * l + l;
}

constexpr uint64_t div(uint32_t l) {
    uint32_t L = 2 * l;      // dividend width
    uint32_t w = l + 2;      // remainder register width
    uint64_t abs_a = add(L) + mux(L);
    uint64_t abs_b = add(l) + mux(l);
    uint64_t loop = uint64_t(L) * (sub(w) + mux(w));
    uint64_t sign = 1;                       // XOR of the two signs
    uint64_t negq = add(l) + mux(l);
    uint64_t zdiv = (l - 1) + mux(l);        // divisor==0 fold and -1 mux
    return abs_a + abs_b + loop + sign + negq + zdiv;
}

}  // namespace gate_cost

namespace detail {

template <class B>
void check_same_width(const EncWord<B>& a, const EncWord<B>& b) {
    if (a.width() != b.width()) throw std::invalid_argument("operand width mismatch");
}

// ripple-carry add of b into bits [offset, offset+b.width()) of a
template <class B>
void add_into(B& be, EncWord<B>& a, uint32_t offset, const EncWord<B>& b,
              typename B::Bit carry) {
    uint32_t m = b.width();
    for (uint32_t i = 0; i < m; ++i) {
        auto& ai = a.bits[offset + i];
        const auto& bi = b.bits[i];
        auto t = be.gate(Gate::Xor, ai, bi);
        auto s = be.gate(Gate::Xor, t, carry);
        if (i + 1 < m) {
            auto g1 = be.gate(Gate::And, ai, bi);
            auto g2 = be.gate(Gate::And, t, carry);
            carry = be.gate(Gate::Or, g1, g2);
        }
        ai = s;
    }
}

}  // namespace detail

// sum mod 2^l, carry-out discarded
template <class B>
EncWord<B> mk_add(B& be, const EncWord<B>& a, const EncWord<B>& b) {
    detail::check_same_width(a, b);
    EncWord<B> out = a;
    detail::add_into(be, out, 0, b, be.trivial(0));
    return out;
}

// a + ~b + 1
template <class B>
EncWord<B> mk_sub(B& be, const EncWord<B>& a, const EncWord<B>& b) {
    detail::check_same_width(a, b);
    EncWord<B> nb;
    nb.bits.reserve(b.width());
    for (const auto& bit : b.bits) nb.bits.push_back(be.gate_not(bit));
    EncWord<B> out = a;
    detail::add_into(be, out, 0, nb, be.trivial(1));
    return out;
}

// MSB; costs nothing
template <class B>
typename B::Bit extract_sign(const EncWord<B>& w) {
    if (w.bits.empty()) throw std::invalid_argument("extract_sign: empty word");
    return w.bits.back();
}

// Value-preserving sign extension. Plain ciphertext copies are not allowed,
// so every added high bit is a fresh encryption of the sign minted by
// AND(trivial(1), sign); the low bits move as-is.
template <class B>
EncWord<B> homogenize(B& be, const EncWord<B>& w, uint32_t lp) {
    if (lp < w.width()) throw std::invalid_argument("homogenize: target narrower than source");
    EncWord<B> out = w;
    auto sign = extract_sign(w);
    auto one = be.trivial(1);
    out.bits.reserve(lp);
    for (uint32_t i = w.width(); i < lp; ++i)
        out.bits.push_back(be.gate(Gate::And, one, sign));
    return out;
}

// The zero-fill variant AND(trivial(0), sign) kept only so tests can document
// that it does not preserve negative values.
template <class B>
EncWord<B> homogenize_literal_zero(B& be, const EncWord<B>& w, uint32_t lp) {
    if (lp < w.width()) throw std::invalid_argument("homogenize: target narrower than source");
    EncWord<B> out = w;
    auto sign = extract_sign(w);
    auto zero = be.trivial(0);
    for (uint32_t i = w.width(); i < lp; ++i)
        out.bits.push_back(be.gate(Gate::And, zero, sign));
    return out;
}

// exact signed product in 2l bits: sign-extend both operands, schoolbook
// shift-add mod 2^2l
template <class B>
EncWord<B> mk_mul(B& be, const EncWord<B>& a, const EncWord<B>& b) {
    detail::check_same_width(a, b);
    uint32_t l = a.width();
    uint32_t W = 2 * l;
    EncWord<B> aw = homogenize(be, a, W);
    EncWord<B> bw = homogenize(be, b, W);
    EncWord<B> acc;
    for (uint32_t i = 0; i < W; ++i) {
        EncWord<B> row;
        row.bits.reserve(W - i);
        for (uint32_t j = 0; j < W - i; ++j)
            row.bits.push_back(be.gate(Gate::And, bw.bits[i], aw.bits[j]));
        if (i == 0) {
            acc = std::move(row);
        } else {
            detail::add_into(be, acc, i, row, be.trivial(0));
        }
    }
    return acc;
}

// Fused multiply + arithmetic right shift: computes the product only up to
// bit shift+out-1 and returns bits [shift, shift+out). This is the workhorse
// of fixed-point evaluation, where every product is immediately rescaled.
template <class B>
EncWord<B> mk_mul_rescale(B& be, const EncWord<B>& a, const EncWord<B>& b,
                          uint32_t shift, uint32_t out_width) {
    detail::check_same_width(a, b);
    uint32_t l = a.width();
    uint32_t W = shift + out_width;
    EncWord<B> aw, bw;
    if (W > l) {
        aw = homogenize(be, a, W);
        bw = homogenize(be, b, W);
    } else {
        aw.bits.assign(a.bits.begin(), a.bits.begin() + W);  // cut-off semantics
        bw.bits.assign(b.bits.begin(), b.bits.begin() + W);
    }
    EncWord<B> acc;
    for (uint32_t i = 0; i < W; ++i) {
        EncWord<B> row;
        row.bits.reserve(W - i);
        for (uint32_t j = 0; j < W - i; ++j)
            row.bits.push_back(be.gate(Gate::And, bw.bits[i], aw.bits[j]));
        if (i == 0) {
            acc = std::move(row);
        } else {
            detail::add_into(be, acc, i, row, be.trivial(0));
        }
    }
    EncWord<B> res;
    res.bits.assign(acc.bits.begin() + shift, acc.bits.end());
    return res;
}

// out_i = s ? x_i : y_i, branch-free
template <class B>
EncWord<B> mux_word(B& be, const typename B::Bit& s, const EncWord<B>& x,
                    const EncWord<B>& y) {
    detail::check_same_width(x, y);
    auto ns = be.gate_not(s);
    EncWord<B> out;
    out.bits.reserve(x.width());
    for (uint32_t i = 0; i < x.width(); ++i) {
        auto mx = be.gate(Gate::And, s, x.bits[i]);
        auto my = be.gate(Gate::And, ns, y.bits[i]);
        out.bits.push_back(be.gate(Gate::Or, mx, my));
    }
    return out;
}

// Signed division, truncating toward zero: sign-magnitude restoring division
// on the magnitudes, sign reapplied, quotient reduced mod 2^l. A zero
// divisor yields the all-ones word (-1); control flow is data independent.
template <class B>
EncWord<B> mk_div(B& be, const EncWord<B>& a, const EncWord<B>& b) {
    uint32_t l = b.width();
    if (a.width() != 2 * l) throw std::invalid_argument("mk_div: dividend must be 2l bits");
    uint32_t L = 2 * l;
    uint32_t w = l + 2;

    auto sign_a = extract_sign(a);
    auto sign_b = extract_sign(b);
    EncWord<B> neg_a = mk_sub(be, trivial_word(be, 0, L), a);
    EncWord<B> abs_a = mux_word(be, sign_a, neg_a, a);
    EncWord<B> neg_b = mk_sub(be, trivial_word(be, 0, l), b);
    EncWord<B> abs_b = mux_word(be, sign_b, neg_b, b);

    EncWord<B> bext;  // divisor magnitude at remainder-register width
    bext.bits = abs_b.bits;
    for (uint32_t i = l; i < w; ++i) bext.bits.push_back(be.trivial(0));

    EncWord<B> rem = trivial_word(be, 0, w);
    std::vector<typename B::Bit> qm(L, be.trivial(0));
    for (uint32_t t = L; t-- > 0;) {
        EncWord<B> shifted;
        shifted.bits.reserve(w);
        shifted.bits.push_back(abs_a.bits[t]);
        for (uint32_t i = 0; i + 1 < w; ++i) shifted.bits.push_back(rem.bits[i]);
        EncWord<B> trial = mk_sub(be, shifted, bext);
        auto q = be.gate_not(extract_sign(trial));
        rem = mux_word(be, q, trial, shifted);
        qm[t] = q;
    }

    EncWord<B> quot;
    quot.bits.assign(qm.begin(), qm.begin() + l);
    auto sign_q = be.gate(Gate::Xor, sign_a, sign_b);
    EncWord<B> neg_q = mk_sub(be, trivial_word(be, 0, l), quot);
    EncWord<B> signed_q = mux_word(be, sign_q, neg_q, quot);

    auto any = b.bits[0];
    for (uint32_t i = 1; i < l; ++i) any = be.gate(Gate::Or, any, b.bits[i]);
    auto bzero = be.gate_not(any);
    return mux_word(be, bzero, trivial_word(be, -1, l), signed_q);
}

enum class CqCombine { bitwise_or, adder };

// Branch-free selector: a >= b picks d, a < b picks c (equality lands on d,
// the sign of a-b being 0). The operands of the subtraction are widened one
// bit so it cannot overflow. The two masked halves are disjoint, so a
// per-bit OR combines them; CqCombine::adder restores the full-adder
// combiner for cost comparisons.
template <class B>
EncWord<B> compare_quads(B& be, const EncWord<B>& a, const EncWord<B>& b,
                         const EncWord<B>& c, const EncWord<B>& d,
                         CqCombine combine = CqCombine::bitwise_or) {
    detail::check_same_width(a, b);
    detail::check_same_width(c, d);
    detail::check_same_width(a, c);
    uint32_t l = a.width();
    EncWord<B> diff = mk_sub(be, homogenize(be, a, l + 1), homogenize(be, b, l + 1));
    auto s = extract_sign(diff);       // 1 iff a < b
    auto ns = be.gate_not(s);
    EncWord<B> mc, md;
    mc.bits.reserve(l);
    md.bits.reserve(l);
    for (uint32_t i = 0; i < l; ++i) {
        mc.bits.push_back(be.gate(Gate::And, s, c.bits[i]));
        md.bits.push_back(be.gate(Gate::And, ns, d.bits[i]));
    }
    if (combine == CqCombine::adder) return mk_add(be, mc, md);
    EncWord<B> out;
    out.bits.reserve(l);
    for (uint32_t i = 0; i < l; ++i)
        out.bits.push_back(be.gate(Gate::Or, mc.bits[i], md.bits[i]));
    return out;
}

// value * 2^s mod 2^l; pure relabeling, no gates
template <class B>
EncWord<B> shift_left_const(B& be, const EncWord<B>& w, uint32_t s) {
    EncWord<B> out;
    uint32_t l = w.width();
    out.bits.reserve(l);
    for (uint32_t i = 0; i < s && i < l; ++i) out.bits.push_back(be.trivial(0));
    for (uint32_t i = s; i < l; ++i) out.bits.push_back(w.bits[i - s]);
    return out;
}

template <class B>
EncWord<B> add_const(B& be, const EncWord<B>& w, int64_t c) {
    return mk_add(be, w, trivial_word(be, c, w.width()));
}

template <class B>
EncWord<B> sub_const(B& be, const EncWord<B>& w, int64_t c) {
    return mk_sub(be, w, trivial_word(be, c, w.width()));
}

// Arithmetic right shift by `shift`, keeping out_width bits: selects bits
// [shift, shift+out_width) of the word, sign-extending first when the slice
// reaches past the top. Free whenever the word already covers the slice.
template <class B>
EncWord<B> rescale(B& be, const EncWord<B>& w, uint32_t shift, uint32_t out_width) {
    uint32_t need = shift + out_width;
    const EncWord<B>* src = &w;
    EncWord<B> widened;
    if (need > w.width()) {
        widened = homogenize(be, w, need);
        src = &widened;
    }
    EncWord<B> out;
    out.bits.assign(src->bits.begin() + shift, src->bits.begin() + need);
    return out;
}

}  // namespace mktorus
