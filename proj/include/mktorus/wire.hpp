#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "mktorus/serial.hpp"
#include "mktorus/shares.hpp"

namespace mktorus {

// Byte-exact frame layout:
//   magic 'MKDD' | version u8=1 | msg-type u8 | session-id u64 LE |
//   payload-length u32 LE | payload
inline constexpr uint8_t kWireVersion = 1;
inline constexpr size_t kFrameHeaderSize = 4 + 1 + 1 + 8 + 4;

enum class MsgType : uint8_t {
    Setup = 0,
    PubKey = 1,
    CtBatch = 2,
    ShareBatch = 3,
    ResultShare = 4,
    Abort = 5,
};

struct Frame {
    MsgType type = MsgType::Setup;
    uint64_t session_id = 0;
    std::vector<uint8_t> payload;
};

inline std::vector<uint8_t> encode_frame(const Frame& f) {
    ByteWriter w;
    w.bytes("MKDD", 4);
    w.u8(kWireVersion);
    w.u8(static_cast<uint8_t>(f.type));
    w.u64(f.session_id);
    w.u32(static_cast<uint32_t>(f.payload.size()));
    w.bytes(f.payload.data(), f.payload.size());
    return w.take();
}

inline Frame decode_frame(const std::vector<uint8_t>& bytes) {
    ByteReader r(bytes);
    char magic[4];
    for (auto& c : magic) c = static_cast<char>(r.u8());
    if (std::string(magic, 4) != "MKDD") throw std::runtime_error("wire: bad magic");
    if (r.u8() != kWireVersion) throw std::runtime_error("wire: unsupported version");
    Frame f;
    f.type = static_cast<MsgType>(r.u8());
    f.session_id = r.u64();
    uint32_t len = r.u32();
    if (r.remaining() != len) throw std::runtime_error("wire: payload length mismatch");
    f.payload.resize(len);
    for (auto& b : f.payload) b = r.u8();
    return f;
}

// SHAREBATCH payload:
//   party-index u16 LE | holder-tag u8 | bit-count u32 LE | bit-count u32 words
struct ShareBatchMsg {
    uint16_t party_index = 0;
    Holder holder = Holder::server0;
    std::vector<uint32_t> words;
};

inline std::vector<uint8_t> encode_share_batch(const ShareBatchMsg& m) {
    ByteWriter w;
    w.u16(m.party_index);
    w.u8(static_cast<uint8_t>(m.holder));
    w.u32(static_cast<uint32_t>(m.words.size()));
    for (uint32_t v : m.words) w.u32(v);
    return w.take();
}

inline ShareBatchMsg decode_share_batch(const std::vector<uint8_t>& payload) {
    ByteReader r(payload);
    ShareBatchMsg m;
    m.party_index = r.u16();
    m.holder = static_cast<Holder>(r.u8());
    uint32_t count = r.u32();
    m.words.resize(count);
    for (auto& v : m.words) v = r.u32();
    if (!r.done()) throw std::runtime_error("sharebatch: trailing bytes");
    return m;
}

// RESULTSHARE payload: holder-tag u8 | bit-count u32 LE | words
struct ResultShareMsg {
    Holder holder = Holder::server0;
    std::vector<uint32_t> words;
};

inline std::vector<uint8_t> encode_result_share(const ResultShareMsg& m) {
    ByteWriter w;
    w.u8(static_cast<uint8_t>(m.holder));
    w.u32(static_cast<uint32_t>(m.words.size()));
    for (uint32_t v : m.words) w.u32(v);
    return w.take();
}

inline ResultShareMsg decode_result_share(const std::vector<uint8_t>& payload) {
    ByteReader r(payload);
    ResultShareMsg m;
    m.holder = static_cast<Holder>(r.u8());
    uint32_t count = r.u32();
    m.words.resize(count);
    for (auto& v : m.words) v = r.u32();
    if (!r.done()) throw std::runtime_error("resultshare: trailing bytes");
    return m;
}

inline std::vector<uint8_t> encode_abort(const std::string& cause) {
    return {cause.begin(), cause.end()};
}

}  // namespace mktorus
