#pragma once

#include <cstdint>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

#include "mktorus/rng.hpp"
#include "mktorus/serial.hpp"

namespace mktorus {

// Two-party additive sharing over Z_{2^32}, matching the torus word size.
// Public constants are incorporated on server 0 only, so transcripts are
// byte-reproducible.
enum class Holder : uint8_t { server0 = 0, server1 = 1 };

struct ArithShare {
    Holder holder = Holder::server0;
    uint32_t v = 0;
};

inline std::pair<ArithShare, ArithShare> share(uint32_t x, SplitRng& rng) {
    uint32_t r = rng.next_u32();
    return {{Holder::server0, x - r}, {Holder::server1, r}};
}

inline uint32_t reconstruct(const ArithShare& x0, const ArithShare& x1) {
    if (x0.holder == x1.holder)
        throw std::invalid_argument("reconstruct: shares held by the same server");
    return x0.v + x1.v;
}

// sum_i coeff_i * x_i, plus a public constant on server 0; local, no
// communication. All inputs must be held by one server.
inline ArithShare linear_eval(std::span<const ArithShare> shares,
                              std::span<const int64_t> coeffs, uint32_t constant) {
    if (shares.empty()) throw std::invalid_argument("linear_eval: empty input");
    if (shares.size() != coeffs.size())
        throw std::invalid_argument("linear_eval: size mismatch");
    Holder h = shares[0].holder;
    uint32_t acc = 0;
    for (size_t i = 0; i < shares.size(); ++i) {
        if (shares[i].holder != h)
            throw std::invalid_argument("linear_eval: mixed holders");
        acc += static_cast<uint32_t>(static_cast<uint64_t>(coeffs[i]) * shares[i].v);
    }
    if (h == Holder::server0) acc += constant;
    return {h, acc};
}

// Flat SIMD layout: one batch carries shares of many ciphertext bits.
struct ShareBatch {
    Holder holder = Holder::server0;
    std::vector<uint32_t> words;
};

inline std::pair<ShareBatch, ShareBatch> share_batch(std::span<const uint32_t> xs,
                                                     SplitRng& rng) {
    ShareBatch b0{Holder::server0, {}};
    ShareBatch b1{Holder::server1, {}};
    b0.words.reserve(xs.size());
    b1.words.reserve(xs.size());
    for (uint32_t x : xs) {
        auto [s0, s1] = share(x, rng);
        b0.words.push_back(s0.v);
        b1.words.push_back(s1.v);
    }
    return {std::move(b0), std::move(b1)};
}

inline void serialize(ByteWriter& w, const ShareBatch& b) {
    w.u8(static_cast<uint8_t>(b.holder));
    w.words(b.words);
}

inline ShareBatch deserialize_share_batch(ByteReader& r) {
    ShareBatch b;
    b.holder = static_cast<Holder>(r.u8());
    b.words = r.words();
    return b;
}

}  // namespace mktorus
