#pragma once

#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

#include "mktorus/serial.hpp"
#include "mktorus/torus.hpp"

namespace mktorus {

struct MKParams {
    uint32_t n = 560;           // TLWE dimension per party
    uint32_t k = 2;             // party count
    NoiseParams noise{3.05e-5, 0};  // placeholder stddev, configurable
    uint32_t lambda = 110;      // nominal security label, informational

    uint32_t ciphertext_len() const { return k * n + 1; }
};

inline MKParams setup(uint32_t n, uint32_t k, NoiseParams noise) {
    if (n == 0 || k == 0) throw std::invalid_argument("setup: n and k must be >= 1");
    MKParams p;
    p.n = n;
    p.k = k;
    p.noise = noise;
    return p;
}

struct SecretKey {
    uint32_t party_index = 0;       // 1-based
    std::vector<uint8_t> s;         // n bits
};

// Bootstrapping key material is out of scope; keygen still emits an opaque
// handle so the framework message flow stays complete.
struct PublicKey {
    uint32_t party_index = 0;
    uint64_t opaque = 0;
};

inline SecretKey keygen(const MKParams& params, uint32_t party_index, SplitRng& rng) {
    if (params.n == 0) throw std::invalid_argument("keygen: n must be >= 1");
    if (party_index < 1 || party_index > params.k)
        throw std::out_of_range("keygen: party index out of range");
    SecretKey sk;
    sk.party_index = party_index;
    sk.s.resize(params.n);
    for (auto& b : sk.s) b = rng.next_bit() ? 1 : 0;
    return sk;
}

inline PublicKey derive_public_key(const SecretKey& sk) {
    return {sk.party_index, fnv1a64(sk.s.data(), sk.s.size())};
}

// Multi-key TLWE sample (a_1,...,a_slots, b). Slot i holds party i+1's mask
// block; inactive slots are all-zero. A fresh single-key ciphertext of party
// p carries p slots with only the last active; extension pads with zeros.
struct MKCiphertext {
    uint32_t n = 0;
    uint32_t slots = 0;
    std::vector<Torus32> a;         // slots * n
    Torus32 b{0};
    std::vector<uint8_t> active;    // per slot

    std::span<const Torus32> block(uint32_t party) const {
        return {a.data() + size_t(party - 1) * n, n};
    }
    std::span<Torus32> block(uint32_t party) {
        return {a.data() + size_t(party - 1) * n, n};
    }
};

inline MKCiphertext trivial_ciphertext(int mu, const MKParams& params) {
    MKCiphertext ct;
    ct.n = params.n;
    ct.slots = params.k;
    ct.a.assign(size_t(ct.slots) * ct.n, Torus32{0});
    ct.active.assign(ct.slots, 0);
    ct.b = Torus32{mu ? 0x40000000u : 0u};
    return ct;
}

inline MKCiphertext encrypt_bit(int mu, const SecretKey& sk, const MKParams& params,
                                SplitRng& rng) {
    MKCiphertext ct;
    ct.n = params.n;
    ct.slots = sk.party_index;
    ct.a.assign(size_t(ct.slots) * ct.n, Torus32{0});
    ct.active.assign(ct.slots, 0);
    ct.active[sk.party_index - 1] = 1;
    auto blk = ct.block(sk.party_index);
    Torus32 dot{0};
    for (uint32_t j = 0; j < params.n; ++j) {
        blk[j] = Torus32{rng.next_u32()};
        if (sk.s[j]) dot += blk[j];
    }
    Torus32 msg{mu ? 0x40000000u : 0u};
    ct.b = msg - dot + sample_noise(params.noise, rng);
    return ct;
}

// Place blocks at their party indices in a k-slot ciphertext, zero elsewhere.
// Phase under the joint key set is unchanged.
inline MKCiphertext extend(const MKCiphertext& ct, uint32_t k) {
    uint32_t highest = 0;
    for (uint32_t i = 0; i < ct.slots; ++i)
        if (ct.active[i]) highest = i + 1;
    if (k < highest) throw std::invalid_argument("extend: k below highest active slot");
    if (ct.slots == k) return ct;
    MKCiphertext out;
    out.n = ct.n;
    out.slots = k;
    out.a.assign(size_t(k) * ct.n, Torus32{0});
    out.active.assign(k, 0);
    out.b = ct.b;
    for (uint32_t i = 0; i < ct.slots && i < k; ++i) {
        if (!ct.active[i]) continue;
        out.active[i] = 1;
        auto src = ct.block(i + 1);
        auto dst = out.block(i + 1);
        for (uint32_t j = 0; j < ct.n; ++j) dst[j] = src[j];
    }
    return out;
}

// b + sum_i <a_i, s_i> mod 1
inline Torus32 phase(const MKCiphertext& ct, std::span<const SecretKey> keys) {
    Torus32 p = ct.b;
    for (uint32_t slot = 0; slot < ct.slots; ++slot) {
        if (!ct.active[slot]) continue;
        const SecretKey* sk = nullptr;
        for (const auto& key : keys)
            if (key.party_index == slot + 1) { sk = &key; break; }
        if (!sk) throw std::invalid_argument("phase: missing key for active slot");
        auto blk = ct.block(slot + 1);
        for (uint32_t j = 0; j < ct.n; ++j)
            if (sk->s[j]) p += blk[j];
    }
    return p;
}

inline DecodedBit decrypt_naive(const MKCiphertext& ct, std::span<const SecretKey> keys) {
    return decode_quarter_bit(phase(ct, keys));
}

struct PartialDec {
    uint32_t party_index = 0;
    Torus32 p{0};
};

// p_i = b + <a_i, s_i>
inline PartialDec part_dec(const MKCiphertext& ct, const SecretKey& sk) {
    Torus32 p = ct.b;
    if (sk.party_index >= 1 && sk.party_index <= ct.slots) {
        auto blk = ct.block(sk.party_index);
        for (uint32_t j = 0; j < ct.n; ++j)
            if (sk.s[j]) p += blk[j];
    }
    return {sk.party_index, p};
}

// sum_i p_i - (k-1) b: the noisy scaled message, before rounding
inline Torus32 fin_dec(std::span<const PartialDec> partials, Torus32 b, uint32_t k) {
    if (partials.size() != k) throw std::invalid_argument("fin_dec: need one partial per party");
    std::vector<uint8_t> seen(k, 0);
    Torus32 acc{0};
    for (const auto& pd : partials) {
        if (pd.party_index < 1 || pd.party_index > k || seen[pd.party_index - 1])
            throw std::invalid_argument("fin_dec: duplicate or out-of-range party index");
        seen[pd.party_index - 1] = 1;
        acc += pd.p;
    }
    return acc - scale(int64_t(k) - 1, b);
}

// ---- serialization: length-prefixed little-endian 32-bit word layouts ----

inline void serialize(ByteWriter& w, const MKCiphertext& ct) {
    std::vector<uint32_t> words;
    words.reserve(2 + (ct.slots + 31) / 32 + ct.a.size() + 1);
    words.push_back(ct.n);
    words.push_back(ct.slots);
    uint32_t mask = 0;
    for (uint32_t i = 0; i < ct.slots; ++i) {
        if (ct.active[i]) mask |= 1u << (i % 32);
        if (i % 32 == 31 || i + 1 == ct.slots) { words.push_back(mask); mask = 0; }
    }
    for (auto t : ct.a) words.push_back(t.raw);
    words.push_back(ct.b.raw);
    w.words(words);
}

inline MKCiphertext deserialize_ciphertext(ByteReader& r) {
    auto words = r.words();
    size_t pos = 0;
    auto next = [&]() {
        if (pos >= words.size()) throw std::runtime_error("ciphertext: truncated words");
        return words[pos++];
    };
    MKCiphertext ct;
    ct.n = next();
    ct.slots = next();
    ct.active.assign(ct.slots, 0);
    for (uint32_t i = 0; i < ct.slots; i += 32) {
        uint32_t mask = next();
        for (uint32_t j = 0; j < 32 && i + j < ct.slots; ++j)
            ct.active[i + j] = (mask >> j) & 1;
    }
    ct.a.resize(size_t(ct.slots) * ct.n);
    for (auto& t : ct.a) t.raw = next();
    ct.b.raw = next();
    if (pos != words.size()) throw std::runtime_error("ciphertext: trailing words");
    return ct;
}

inline void serialize(ByteWriter& w, const SecretKey& sk) {
    std::vector<uint32_t> words;
    words.push_back(sk.party_index);
    words.push_back(static_cast<uint32_t>(sk.s.size()));
    uint32_t packed = 0;
    for (size_t i = 0; i < sk.s.size(); ++i) {
        if (sk.s[i]) packed |= 1u << (i % 32);
        if (i % 32 == 31 || i + 1 == sk.s.size()) { words.push_back(packed); packed = 0; }
    }
    w.words(words);
}

inline SecretKey deserialize_secret_key(ByteReader& r) {
    auto words = r.words();
    if (words.size() < 2) throw std::runtime_error("secret key: truncated");
    SecretKey sk;
    sk.party_index = words[0];
    uint32_t n = words[1];
    if (words.size() != 2 + (n + 31) / 32) throw std::runtime_error("secret key: bad length");
    sk.s.assign(n, 0);
    for (uint32_t i = 0; i < n; ++i)
        sk.s[i] = (words[2 + i / 32] >> (i % 32)) & 1;
    return sk;
}

inline void serialize(ByteWriter& w, const PartialDec& pd) {
    w.words({pd.party_index, pd.p.raw});
}

inline PartialDec deserialize_partial(ByteReader& r) {
    auto words = r.words();
    if (words.size() != 2) throw std::runtime_error("partial: bad length");
    return {words[0], Torus32{words[1]}};
}

}  // namespace mktorus
