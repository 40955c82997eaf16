#pragma once

#include <cstdint>
#include <stdexcept>
#include <vector>

namespace mktorus {

// Two's-complement encrypted integer, one backend bit per position, LSB
// first. Words are immutable values; operators return new words.
template <class B>
struct EncWord {
    std::vector<typename B::Bit> bits;

    uint32_t width() const { return static_cast<uint32_t>(bits.size()); }
};

namespace detail {
inline void check_word_range(int64_t m, uint32_t l) {
    if (l == 0 || l > 63) throw std::invalid_argument("word width out of range");
    int64_t lo = -(int64_t(1) << (l - 1));
    int64_t hi = (int64_t(1) << (l - 1)) - 1;
    if (m < lo || m > hi) throw std::out_of_range("value does not fit the word width");
}
}  // namespace detail

// per-bit encryption of the complement encoding
template <class B>
EncWord<B> mk_enc_word(B& be, int64_t m, uint32_t l, uint32_t party = 1) {
    detail::check_word_range(m, l);
    EncWord<B> w;
    w.bits.reserve(l);
    auto u = static_cast<uint64_t>(m);
    for (uint32_t i = 0; i < l; ++i) w.bits.push_back(be.encrypt(int((u >> i) & 1), party));
    return w;
}

// noiseless public constant
template <class B>
EncWord<B> trivial_word(B& be, int64_t m, uint32_t l) {
    detail::check_word_range(m, l);
    EncWord<B> w;
    w.bits.reserve(l);
    auto u = static_cast<uint64_t>(m);
    for (uint32_t i = 0; i < l; ++i) w.bits.push_back(be.trivial(int((u >> i) & 1)));
    return w;
}

template <class B>
int64_t decode_word(const B& be, const EncWord<B>& w) {
    uint64_t u = 0;
    for (uint32_t i = 0; i < w.width(); ++i)
        if (be.decode(w.bits[i])) u |= uint64_t(1) << i;
    uint32_t l = w.width();
    if (l < 64 && (u >> (l - 1)) & 1) u |= ~uint64_t(0) << l;  // sign extend
    return static_cast<int64_t>(u);
}

}  // namespace mktorus
