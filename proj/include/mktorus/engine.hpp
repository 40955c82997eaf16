#pragma once

#include <cstdint>
#include <mutex>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "mktorus/activation.hpp"
#include "mktorus/int_ops.hpp"

namespace mktorus {

// The training schedules are written once against this engine surface and
// instantiated twice: IntEngine runs the identical integer schedule on
// native words (the reference the encrypted run must reproduce bit for
// bit), CircuitEngine runs it through the homomorphic operators.

// Native two's-complement engine. In strict mode any narrowing that loses
// value throws, which is how encrypted-mode width schedules get validated
// before gates are spent; in permissive mode it wraps exactly like the
// circuits do.
class IntEngine {
public:
    struct Word {
        int64_t v = 0;
        uint32_t width = 0;
    };

    static constexpr bool parallel_safe = true;

    explicit IntEngine(bool strict = true) : strict_(strict) {}

    Word from_const(int64_t v, uint32_t l) const {
        detail::check_word_range(v, l);
        return {v, l};
    }
    Word encrypt(int64_t v, uint32_t l, uint32_t /*party*/ = 1) const {
        return from_const(v, l);
    }
    int64_t decode(const Word& w) const { return w.v; }

    Word add(const Word& a, const Word& b) const {
        same(a, b);
        return narrowed(a.v + b.v, a.width, "add");
    }
    Word sub(const Word& a, const Word& b) const {
        same(a, b);
        return narrowed(a.v - b.v, a.width, "sub");
    }
    Word mul(const Word& a, const Word& b) const {
        same(a, b);
        return {a.v * b.v, 2 * a.width};  // exact in 2l bits
    }
    Word mul_rescale(const Word& a, const Word& b, uint32_t shift, uint32_t out) const {
        same(a, b);
        uint32_t W = shift + out;
        int64_t prod = wrap(a.v * b.v, W);
        return narrowed(prod >> shift, out, "mul_rescale");
    }
    Word rescale(const Word& w, uint32_t shift, uint32_t out) const {
        return narrowed(w.v >> shift, out, "rescale");
    }
    Word shift_left(const Word& w, uint32_t s) const {
        return narrowed(w.v << s, w.width, "shift_left");
    }
    Word homogenize(const Word& w, uint32_t lp) const {
        if (lp < w.width) throw std::invalid_argument("homogenize: narrower target");
        return {w.v, lp};
    }
    Word div(const Word& num, const Word& den) const {
        if (num.width != 2 * den.width) throw std::invalid_argument("div: widths must be 2l,l");
        if (den.v == 0) return {-1, den.width};
        return narrowed(num.v / den.v, den.width, "div");
    }
    Word act_g(const Word& u) const {
        if (u.width < 6) throw std::invalid_argument("act_g: width");
        return {g_clear_int(u.v), u.width};
    }
    Word act_taylor(const Word& u, int order, uint32_t q) const {
        return {taylor_fixed_int(u.v, order, q, u.width), u.width};
    }

private:
    static void same(const Word& a, const Word& b) {
        if (a.width != b.width) throw std::invalid_argument("width mismatch");
    }
    static int64_t wrap(int64_t v, uint32_t l) {
        uint64_t u = static_cast<uint64_t>(v) & ((l >= 64) ? ~0ull : ((1ull << l) - 1));
        if (l < 64 && (u >> (l - 1)) & 1) u |= ~0ull << l;
        return static_cast<int64_t>(u);
    }
    Word narrowed(int64_t v, uint32_t l, const char* op) const {
        int64_t w = wrap(v, l);
        if (strict_ && w != v)
            throw std::overflow_error(std::string("int engine: ") + op +
                                      " overflows the width schedule");
        return {w, l};
    }

    bool strict_;
};

// Homomorphic engine over a gate backend.
template <class B>
class CircuitEngine {
public:
    using Word = EncWord<B>;

    static constexpr bool parallel_safe = std::is_same_v<B, ClearBackend>;

    explicit CircuitEngine(B& backend) : be_(backend) {}

    Word from_const(int64_t v, uint32_t l) const { return trivial_word(be_, v, l); }
    Word encrypt(int64_t v, uint32_t l, uint32_t party = 1) const {
        return mk_enc_word(be_, v, l, party);
    }
    int64_t decode(const Word& w) const { return decode_word(be_, w); }

    Word add(const Word& a, const Word& b) const { return mk_add(be_, a, b); }
    Word sub(const Word& a, const Word& b) const { return mk_sub(be_, a, b); }
    Word mul(const Word& a, const Word& b) const { return mk_mul(be_, a, b); }
    Word mul_rescale(const Word& a, const Word& b, uint32_t shift, uint32_t out) const {
        return mk_mul_rescale(be_, a, b, shift, out);
    }
    Word rescale(const Word& w, uint32_t shift, uint32_t out) const {
        return mktorus::rescale(be_, w, shift, out);
    }
    Word shift_left(const Word& w, uint32_t s) const {
        return shift_left_const(be_, w, s);
    }
    Word homogenize(const Word& w, uint32_t lp) const {
        return mktorus::homogenize(be_, w, lp);
    }
    Word div(const Word& num, const Word& den) const { return mk_div(be_, num, den); }
    Word act_g(const Word& u) const { return mktorus::act_g(be_, u); }
    Word act_taylor(const Word& u, int order, uint32_t q) const {
        return mktorus::act_taylor(be_, u, order, q);
    }

    B& backend() const { return be_; }

private:
    B& be_;
};

// Neuron-level parallel map; falls back to a sequential loop when the
// engine's backend cannot take concurrent gate calls.
template <class F>
void parallel_for(size_t n, bool enable, unsigned max_threads, F&& f) {
    if (!enable || n < 2 || max_threads < 2) {
        for (size_t i = 0; i < n; ++i) f(i);
        return;
    }
    unsigned nt = std::min<size_t>(max_threads, n);
    std::vector<std::thread> threads;
    std::exception_ptr err;
    std::mutex err_m;
    for (unsigned t = 0; t < nt; ++t) {
        threads.emplace_back([&, t] {
            try {
                for (size_t i = t; i < n; i += nt) f(i);
            } catch (...) {
                std::lock_guard lk(err_m);
                if (!err) err = std::current_exception();
            }
        });
    }
    for (auto& th : threads) th.join();
    if (err) std::rethrow_exception(err);
}

}  // namespace mktorus
