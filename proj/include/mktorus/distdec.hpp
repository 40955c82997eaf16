#pragma once

#include <chrono>
#include <memory>
#include <stdexcept>
#include <thread>
#include <vector>

#include "mktorus/mk_tlwe.hpp"
#include "mktorus/transcript.hpp"
#include "mktorus/transport.hpp"

namespace mktorus {

// The decryption session has four kinds of entities: participants P1..Pk,
// the cloud server S0, the decryption party S1, and a CRS step that fixes
// parameters out of band. Participants partially decrypt and share; the two
// non-colluding servers aggregate locally and return result shares; the
// participants reconstruct. Only SHAREBATCH and RESULTSHARE frames cross the
// wire: 2k + 2k messages per session, independent of the bit count.

inline std::string participant_name(uint32_t i) { return "P" + std::to_string(i); }
inline constexpr const char* kServer0Name = "S0";  // cloud server
inline constexpr const char* kServer1Name = "S1";  // decryption party

// Step 1 + 2: partial decryption and secret sharing. Sends one batch to each
// server; the raw p_i never leaves this function.
inline void run_participant_send(const std::vector<MKCiphertext>& cts, const SecretKey& sk,
                                 uint64_t session, SplitRng& rng, Channel& to_s0,
                                 Channel& to_s1, Transcript* tr) {
    std::vector<uint32_t> p_words;
    p_words.reserve(cts.size());
    for (const auto& ct : cts) p_words.push_back(part_dec(ct, sk).p.raw);
    auto [s0, s1] = share_batch(p_words, rng);

    Frame f0{MsgType::ShareBatch, session,
             encode_share_batch({uint16_t(sk.party_index), Holder::server0, s0.words})};
    Frame f1{MsgType::ShareBatch, session,
             encode_share_batch({uint16_t(sk.party_index), Holder::server1, s1.words})};
    if (tr) tr->record(participant_name(sk.party_index), kServer0Name, f0.type, f0.payload);
    to_s0.send_frame(f0);
    if (tr) tr->record(participant_name(sk.party_index), kServer1Name, f1.type, f1.payload);
    to_s1.send_frame(f1);
}

// Step 3: offline aggregation. Receives one share batch per party, computes
// sum_i [p_i] - (k-1)[b] per bit (the public (k-1)b constant lands on the
// cloud server, per the share convention), then sends every participant its
// result share. The two servers never talk to each other.
inline void run_server(Holder which, uint32_t parties, const std::vector<uint32_t>& b_words,
                       uint64_t session, const std::vector<Channel*>& participant_chans,
                       std::chrono::milliseconds timeout, Transcript* tr) {
    if (participant_chans.size() != parties)
        throw std::invalid_argument("run_server: one channel per participant required");
    const char* me = which == Holder::server0 ? kServer0Name : kServer1Name;

    std::vector<std::vector<uint32_t>> batches(parties);
    std::vector<bool> seen(parties, false);
    for (uint32_t i = 0; i < parties; ++i) {
        auto f = participant_chans[i]->recv_frame(timeout);
        if (!f) {
            Frame abort{MsgType::Abort, session, encode_abort("missing share batch")};
            for (uint32_t j = 0; j < parties; ++j) {
                if (tr) tr->record(me, participant_name(j + 1), abort.type, abort.payload);
                participant_chans[j]->send_frame(abort);
            }
            throw SessionAbort(std::string(me) + ": timed out waiting for a share batch");
        }
        if (f->type != MsgType::ShareBatch || f->session_id != session)
            throw SessionAbort(std::string(me) + ": unexpected frame");
        auto msg = decode_share_batch(f->payload);
        if (msg.holder != which) throw SessionAbort(std::string(me) + ": wrong holder tag");
        if (msg.party_index < 1 || msg.party_index > parties || seen[msg.party_index - 1])
            throw SessionAbort(std::string(me) + ": bad party index");
        if (msg.words.size() != b_words.size())
            throw SessionAbort(std::string(me) + ": batch size mismatch");
        seen[msg.party_index - 1] = true;
        batches[msg.party_index - 1] = std::move(msg.words);
    }

    std::vector<uint32_t> acc(b_words.size(), 0);
    for (uint32_t p = 0; p < parties; ++p)
        for (size_t i = 0; i < acc.size(); ++i) acc[i] += batches[p][i];
    if (which == Holder::server0)
        for (size_t i = 0; i < acc.size(); ++i)
            acc[i] -= uint32_t(uint64_t(parties - 1) * b_words[i]);

    Frame out{MsgType::ResultShare, session, encode_result_share({which, acc})};
    for (uint32_t i = 0; i < parties; ++i) {
        if (tr) tr->record(me, participant_name(i + 1), out.type, out.payload);
        participant_chans[i]->send_frame(out);
    }
}

// Step 4: reconstruct and round. Requires both result shares; with either
// one missing there is no output (the sharing is semi-honest, not fair).
inline std::vector<uint8_t> run_reconstruct(Channel& from_s0, Channel& from_s1,
                                            std::chrono::milliseconds timeout) {
    auto f0 = from_s0.recv_frame(timeout);
    auto f1 = from_s1.recv_frame(timeout);
    if (!f0 || !f1) throw SessionAbort("reconstruct: missing result share");
    if (f0->type == MsgType::Abort || f1->type == MsgType::Abort)
        throw SessionAbort("reconstruct: session aborted by a server");
    auto r0 = decode_result_share(f0->payload);
    auto r1 = decode_result_share(f1->payload);
    if (r0.holder == r1.holder) throw SessionAbort("reconstruct: duplicate holder");
    if (r0.words.size() != r1.words.size()) throw SessionAbort("reconstruct: size mismatch");
    std::vector<uint8_t> bits(r0.words.size());
    for (size_t i = 0; i < bits.size(); ++i)
        bits[i] = decode_quarter_bit(Torus32{r0.words[i] + r1.words[i]}).bit;
    return bits;
}

struct DistDecOutcome {
    std::vector<uint8_t> bits;
    std::shared_ptr<Transcript> transcript;
};

// All roles in-process, one thread per role, deterministic under the seed.
inline DistDecOutcome distributed_decrypt(const MKParams& params,
                                          const std::vector<MKCiphertext>& cts,
                                          std::span<const SecretKey> keys, uint64_t seed,
                                          uint64_t session_id = 1,
                                          std::chrono::milliseconds timeout =
                                              std::chrono::milliseconds(10000)) {
    if (keys.size() != params.k) throw std::invalid_argument("need one key per party");
    std::vector<MKCiphertext> ext;
    ext.reserve(cts.size());
    for (const auto& ct : cts) ext.push_back(extend(ct, params.k));
    std::vector<uint32_t> b_words;
    b_words.reserve(ext.size());
    for (const auto& ct : ext) b_words.push_back(ct.b.raw);

    auto transcript = std::make_shared<Transcript>();
    SplitRng root(seed);

    // participant-side and server-side ends of every link
    std::vector<std::unique_ptr<Channel>> p_to_s0(params.k), s0_from_p(params.k);
    std::vector<std::unique_ptr<Channel>> p_to_s1(params.k), s1_from_p(params.k);
    for (uint32_t i = 0; i < params.k; ++i) {
        auto [pe0, se0] = InProcChannel::make_pair();
        p_to_s0[i] = std::move(pe0);
        s0_from_p[i] = std::move(se0);
        auto [pe1, se1] = InProcChannel::make_pair();
        p_to_s1[i] = std::move(pe1);
        s1_from_p[i] = std::move(se1);
    }

    std::vector<std::vector<uint8_t>> results(params.k);
    std::exception_ptr failure;
    std::mutex failure_m;
    auto capture = [&](auto fn) {
        try {
            fn();
        } catch (...) {
            std::lock_guard lk(failure_m);
            if (!failure) failure = std::current_exception();
        }
    };

    std::vector<std::thread> threads;
    for (uint32_t i = 0; i < params.k; ++i) {
        threads.emplace_back([&, i] {
            capture([&] {
                auto rng = root.split(100 + i + 1);
                run_participant_send(ext, keys[i], session_id, rng, *p_to_s0[i],
                                     *p_to_s1[i], transcript.get());
                results[i] = run_reconstruct(*p_to_s0[i], *p_to_s1[i], timeout);
            });
        });
    }
    threads.emplace_back([&] {
        capture([&] {
            std::vector<Channel*> chans;
            for (auto& c : s0_from_p) chans.push_back(c.get());
            run_server(Holder::server0, params.k, b_words, session_id, chans, timeout,
                       transcript.get());
        });
    });
    threads.emplace_back([&] {
        capture([&] {
            std::vector<Channel*> chans;
            for (auto& c : s1_from_p) chans.push_back(c.get());
            run_server(Holder::server1, params.k, b_words, session_id, chans, timeout,
                       transcript.get());
        });
    });
    for (auto& t : threads) t.join();
    if (failure) std::rethrow_exception(failure);

    for (uint32_t i = 1; i < params.k; ++i)
        if (results[i] != results[0])
            throw SessionAbort("participants reconstructed different outputs");
    return {std::move(results[0]), std::move(transcript)};
}

}  // namespace mktorus
