#pragma once

#include <cstdint>
#include <cstring>
#include <stdexcept>
#include <string>
#include <vector>

namespace mktorus {

// Little-endian byte codec shared by file formats and the wire protocol.
class ByteWriter {
public:
    void u8(uint8_t v) { buf_.push_back(v); }
    void u16(uint16_t v) { for (int i = 0; i < 2; ++i) buf_.push_back(uint8_t(v >> (8 * i))); }
    void u32(uint32_t v) { for (int i = 0; i < 4; ++i) buf_.push_back(uint8_t(v >> (8 * i))); }
    void u64(uint64_t v) { for (int i = 0; i < 8; ++i) buf_.push_back(uint8_t(v >> (8 * i))); }

    void bytes(const void* p, size_t n) {
        const auto* b = static_cast<const uint8_t*>(p);
        buf_.insert(buf_.end(), b, b + n);
    }

    // count-prefixed array of 32-bit words
    void words(const std::vector<uint32_t>& w) {
        u32(static_cast<uint32_t>(w.size()));
        for (uint32_t v : w) u32(v);
    }

    const std::vector<uint8_t>& data() const { return buf_; }
    std::vector<uint8_t> take() { return std::move(buf_); }

private:
    std::vector<uint8_t> buf_;
};

class ByteReader {
public:
    ByteReader(const uint8_t* p, size_t n) : p_(p), end_(p + n) {}
    explicit ByteReader(const std::vector<uint8_t>& v) : ByteReader(v.data(), v.size()) {}

    uint8_t u8() { need(1); return *p_++; }
    uint16_t u16() { need(2); uint16_t v = uint16_t(p_[0]) | uint16_t(p_[1]) << 8; p_ += 2; return v; }
    uint32_t u32() {
        need(4);
        uint32_t v = 0;
        for (int i = 0; i < 4; ++i) v |= uint32_t(p_[i]) << (8 * i);
        p_ += 4;
        return v;
    }
    uint64_t u64() {
        need(8);
        uint64_t v = 0;
        for (int i = 0; i < 8; ++i) v |= uint64_t(p_[i]) << (8 * i);
        p_ += 8;
        return v;
    }

    std::vector<uint32_t> words() {
        uint32_t n = u32();
        need(size_t(n) * 4);
        std::vector<uint32_t> w(n);
        for (auto& v : w) v = u32();
        return w;
    }

    size_t remaining() const { return size_t(end_ - p_); }
    bool done() const { return p_ == end_; }

private:
    void need(size_t n) const {
        if (size_t(end_ - p_) < n) throw std::runtime_error("serial: truncated input");
    }
    const uint8_t* p_;
    const uint8_t* end_;
};

// FNV-1a, used for transcript payload digests
inline uint64_t fnv1a64(const void* p, size_t n) {
    const auto* b = static_cast<const uint8_t*>(p);
    uint64_t h = 0xCBF29CE484222325ull;
    for (size_t i = 0; i < n; ++i) {
        h ^= b[i];
        h *= 0x100000001B3ull;
    }
    return h;
}

inline uint64_t fnv1a64(const std::vector<uint8_t>& v) { return fnv1a64(v.data(), v.size()); }

}  // namespace mktorus
