#pragma once

#include <cstdint>
#include <mutex>
#include <string>
#include <vector>

#include "mktorus/serial.hpp"
#include "mktorus/wire.hpp"

namespace mktorus {

struct TranscriptEntry {
    std::string sender;
    std::string receiver;
    uint8_t msg_type = 0;
    uint64_t payload_hash = 0;
    uint64_t chain = 0;
};

// Append-only record of every frame a session sends, hash-chained so tests
// can assert protocol structure and prove what never went on the wire.
class Transcript {
public:
    void record(const std::string& sender, const std::string& receiver, MsgType type,
                const std::vector<uint8_t>& payload) {
        std::lock_guard lk(m_);
        TranscriptEntry e;
        e.sender = sender;
        e.receiver = receiver;
        e.msg_type = static_cast<uint8_t>(type);
        e.payload_hash = fnv1a64(payload);
        e.chain = link(entries_.empty() ? 0xA5A5A5A5A5A5A5A5ull : entries_.back().chain, e);
        entries_.push_back(std::move(e));
    }

    std::vector<TranscriptEntry> snapshot() const {
        std::lock_guard lk(m_);
        return entries_;
    }

    bool chain_consistent() const {
        std::lock_guard lk(m_);
        uint64_t prev = 0xA5A5A5A5A5A5A5A5ull;
        for (const auto& e : entries_) {
            if (e.chain != link(prev, e)) return false;
            prev = e.chain;
        }
        return true;
    }

    size_t size() const {
        std::lock_guard lk(m_);
        return entries_.size();
    }

private:
    static uint64_t link(uint64_t prev, const TranscriptEntry& e) {
        ByteWriter w;
        w.u64(prev);
        w.bytes(e.sender.data(), e.sender.size());
        w.u8(0);
        w.bytes(e.receiver.data(), e.receiver.size());
        w.u8(e.msg_type);
        w.u64(e.payload_hash);
        return fnv1a64(w.data());
    }

    mutable std::mutex m_;
    std::vector<TranscriptEntry> entries_;
};

}  // namespace mktorus
