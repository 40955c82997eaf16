#pragma once

#include <atomic>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "mktorus/mk_tlwe.hpp"

namespace mktorus {

enum class Gate : uint8_t { Nand, And, Or, Xor };

struct GateCounter {
    uint64_t bootstrapped_gates = 0;
    uint64_t free_ops = 0;
};

// Live counters on a backend; atomics so per-bit parallel circuit evaluation
// can share one session.
struct LiveCounter {
    std::atomic<uint64_t> bootstrapped{0};
    std::atomic<uint64_t> free_ops{0};

    GateCounter snapshot() const {
        return {bootstrapped.load(std::memory_order_relaxed),
                free_ops.load(std::memory_order_relaxed)};
    }
};

// RAII scope over a backend's counters; nests, delta() gives gates spent
// since construction.
template <class Backend>
class CounterScope {
public:
    explicit CounterScope(const Backend& be) : be_(be), start_(be.counters()) {}
    GateCounter delta() const {
        GateCounter now = be_.counters();
        return {now.bootstrapped_gates - start_.bootstrapped_gates,
                now.free_ops - start_.free_ops};
    }

private:
    const Backend& be_;
    GateCounter start_;
};

// Plaintext backend: exact boolean semantics with the same gate accounting
// as the encrypted path. Used as the differential oracle and for fast
// encrypted-mode training runs.
class ClearBackend {
public:
    struct Bit {
        uint8_t v = 0;
    };

    Bit trivial(int b) { return {uint8_t(b & 1)}; }
    Bit encrypt(int b, uint32_t /*party*/ = 1) { return {uint8_t(b & 1)}; }
    int decode(const Bit& x) const { return x.v; }

    Bit gate(Gate g, const Bit& x, const Bit& y) {
        counter_.bootstrapped.fetch_add(1, std::memory_order_relaxed);
        switch (g) {
            case Gate::Nand: return {uint8_t(!(x.v && y.v))};
            case Gate::And: return {uint8_t(x.v && y.v)};
            case Gate::Or: return {uint8_t(x.v || y.v)};
            case Gate::Xor: return {uint8_t(x.v ^ y.v)};
        }
        throw std::logic_error("unreachable");
    }

    Bit gate_not(const Bit& x) {
        counter_.free_ops.fetch_add(1, std::memory_order_relaxed);
        return {uint8_t(1 - x.v)};
    }

    GateCounter counters() const { return counter_.snapshot(); }

private:
    LiveCounter counter_;
};

// Encrypted backend over multi-key TLWE samples. Gates form the usual
// offset linear combinations:
//   NAND: (0,...,0, 5/8) - c1 - c2      AND: (0,...,0,-1/8) + c1 + c2
//   OR:   (0,...,0, 1/8) + c1 + c2      XOR: 2*(c1 - c2)
//   NOT:  (0,...,0, 1/4) - c            (no bootstrapping)
// followed by a bootstrap oracle standing in for gate bootstrapping. The
// oracle holds all session keys privately and reproduces GB's observable
// contract: the output is a fresh encryption, with fresh noise alpha, of
// the bit selected by the phase sign band. With the 1/4 message scaling the
// decision band is phase in [1/4, 3/4) -> 1, else 0; every zero-noise gate
// combination sits 1/8 away from a band edge.
class NoiseSimBackend {
public:
    struct Bit {
        MKCiphertext ct;
        uint64_t session = 0;
    };

    NoiseSimBackend(const MKParams& params, uint64_t seed)
        : params_(params), rng_(seed), session_(rng_.next_u64() | 1) {
        for (uint32_t i = 1; i <= params_.k; ++i) {
            auto krng = rng_.split(1000 + i);
            keys_.push_back(keygen(params_, i, krng));
        }
    }

    const MKParams& params() const { return params_; }
    std::span<const SecretKey> session_keys() const { return keys_; }

    Bit trivial(int b) { return {trivial_ciphertext(b, params_), session_}; }

    Bit encrypt(int b, uint32_t party = 1) {
        return {encrypt_bit(b, keys_.at(party - 1), params_, rng_), session_};
    }

    int decode(const Bit& x) const { return decrypt_naive(x.ct, keys_).bit; }

    Torus32 phase_of(const Bit& x) const { return phase(x.ct, keys_); }

    Bit gate(Gate g, const Bit& x, const Bit& y) {
        check(x);
        check(y);
        MKCiphertext a = extend(x.ct, params_.k);
        MKCiphertext b = extend(y.ct, params_.k);
        MKCiphertext lin = trivial_ciphertext(0, params_);
        switch (g) {
            case Gate::Nand:
                lin.b = torus_from_real(5.0 / 8.0);
                sub_inplace(lin, a);
                sub_inplace(lin, b);
                break;
            case Gate::And:
                lin.b = torus_from_real(-1.0 / 8.0);
                add_inplace(lin, a);
                add_inplace(lin, b);
                break;
            case Gate::Or:
                lin.b = torus_from_real(1.0 / 8.0);
                add_inplace(lin, a);
                add_inplace(lin, b);
                break;
            case Gate::Xor:
                add_inplace(lin, a);
                sub_inplace(lin, b);
                scale_inplace(lin, 2);
                break;
        }
        counter_.bootstrapped.fetch_add(1, std::memory_order_relaxed);
        return {bootstrap_oracle(lin), session_};
    }

    Bit gate_not(const Bit& x) {
        check(x);
        MKCiphertext a = extend(x.ct, params_.k);
        MKCiphertext out = trivial_ciphertext(0, params_);
        out.b = Torus32{0x40000000u};
        sub_inplace(out, a);
        counter_.free_ops.fetch_add(1, std::memory_order_relaxed);
        return {std::move(out), session_};
    }

    GateCounter counters() const { return counter_.snapshot(); }

private:
    void check(const Bit& x) const {
        if (x.session != session_)
            throw std::invalid_argument("gate: operand from a different session");
    }

    static void add_inplace(MKCiphertext& acc, const MKCiphertext& c) {
        for (size_t i = 0; i < acc.a.size(); ++i) acc.a[i] += c.a[i];
        acc.b += c.b;
        for (uint32_t i = 0; i < acc.slots; ++i) acc.active[i] |= c.active[i];
    }
    static void sub_inplace(MKCiphertext& acc, const MKCiphertext& c) {
        for (size_t i = 0; i < acc.a.size(); ++i) acc.a[i] -= c.a[i];
        acc.b -= c.b;
        for (uint32_t i = 0; i < acc.slots; ++i) acc.active[i] |= c.active[i];
    }
    static void scale_inplace(MKCiphertext& acc, int64_t c) {
        for (auto& t : acc.a) t = scale(c, t);
        acc.b = scale(c, acc.b);
    }

    MKCiphertext bootstrap_oracle(const MKCiphertext& lin) {
        Torus32 p = phase(lin, keys_);
        int bit = (p.raw - 0x40000000u) < 0x80000000u ? 1 : 0;
        // fresh multi-key encryption under the joint key set; output noise
        // is a single fresh alpha sample, independent of the input
        MKCiphertext out;
        out.n = params_.n;
        out.slots = params_.k;
        out.a.assign(size_t(params_.k) * params_.n, Torus32{0});
        out.active.assign(params_.k, 1);
        Torus32 dot{0};
        for (uint32_t i = 1; i <= params_.k; ++i) {
            auto blk = out.block(i);
            const auto& s = keys_[i - 1].s;
            for (uint32_t j = 0; j < params_.n; ++j) {
                blk[j] = Torus32{rng_.next_u32()};
                if (s[j]) dot += blk[j];
            }
        }
        Torus32 msg{bit ? 0x40000000u : 0u};
        out.b = msg - dot + sample_noise(params_.noise, rng_);
        return out;
    }

    MKParams params_;
    SplitRng rng_;
    uint64_t session_;
    std::vector<SecretKey> keys_;
    LiveCounter counter_;
};

}  // namespace mktorus
