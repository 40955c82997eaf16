#pragma once

#include <arpa/inet.h>
#include <netinet/in.h>
#include <poll.h>
#include <sys/socket.h>
#include <unistd.h>

#include <chrono>
#include <condition_variable>
#include <cstring>
#include <deque>
#include <memory>
#include <mutex>
#include <optional>
#include <stdexcept>
#include <string>

#include "mktorus/wire.hpp"

namespace mktorus {

struct SessionAbort : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// One direction of a point-to-point link, carrying encoded frame bytes.
class Channel {
public:
    virtual ~Channel() = default;
    virtual void send_frame(const Frame& f) = 0;
    virtual std::optional<Frame> recv_frame(std::chrono::milliseconds timeout) = 0;
};

// In-process link. Frames cross the queue as encoded bytes so the tested
// path is byte-identical to the socket transport.
class InProcChannel : public Channel {
    struct Queue {
        std::mutex m;
        std::condition_variable cv;
        std::deque<std::vector<uint8_t>> frames;
    };

public:
    static std::pair<std::unique_ptr<Channel>, std::unique_ptr<Channel>> make_pair() {
        auto fwd = std::make_shared<Queue>();
        auto bwd = std::make_shared<Queue>();
        auto a = std::unique_ptr<Channel>(new InProcChannel(fwd, bwd));
        auto b = std::unique_ptr<Channel>(new InProcChannel(bwd, fwd));
        return {std::move(a), std::move(b)};
    }

    void send_frame(const Frame& f) override {
        auto bytes = encode_frame(f);
        {
            std::lock_guard lk(out_->m);
            out_->frames.push_back(std::move(bytes));
        }
        out_->cv.notify_all();
    }

    std::optional<Frame> recv_frame(std::chrono::milliseconds timeout) override {
        std::unique_lock lk(in_->m);
        if (!in_->cv.wait_for(lk, timeout, [&] { return !in_->frames.empty(); }))
            return std::nullopt;
        auto bytes = std::move(in_->frames.front());
        in_->frames.pop_front();
        lk.unlock();
        return decode_frame(bytes);
    }

private:
    InProcChannel(std::shared_ptr<Queue> out, std::shared_ptr<Queue> in)
        : out_(std::move(out)), in_(std::move(in)) {}
    std::shared_ptr<Queue> out_;
    std::shared_ptr<Queue> in_;
};

// Length-prefixed frames over a connected stream socket.
class TcpChannel : public Channel {
public:
    explicit TcpChannel(int fd) : fd_(fd) {}
    TcpChannel(const TcpChannel&) = delete;
    TcpChannel& operator=(const TcpChannel&) = delete;
    ~TcpChannel() override {
        if (fd_ >= 0) ::close(fd_);
    }

    void send_frame(const Frame& f) override {
        auto bytes = encode_frame(f);
        size_t off = 0;
        while (off < bytes.size()) {
            ssize_t n = ::send(fd_, bytes.data() + off, bytes.size() - off, 0);
            if (n <= 0) throw SessionAbort("transport: send failed");
            off += size_t(n);
        }
    }

    std::optional<Frame> recv_frame(std::chrono::milliseconds timeout) override {
        std::vector<uint8_t> header(kFrameHeaderSize);
        if (!read_exact(header.data(), header.size(), timeout)) return std::nullopt;
        uint32_t len = uint32_t(header[14]) | uint32_t(header[15]) << 8 |
                       uint32_t(header[16]) << 16 | uint32_t(header[17]) << 24;
        std::vector<uint8_t> bytes = header;
        bytes.resize(kFrameHeaderSize + len);
        if (len && !read_exact(bytes.data() + kFrameHeaderSize, len, timeout))
            return std::nullopt;
        return decode_frame(bytes);
    }

private:
    bool read_exact(uint8_t* dst, size_t n, std::chrono::milliseconds timeout) {
        size_t off = 0;
        while (off < n) {
            pollfd pfd{fd_, POLLIN, 0};
            int pr = ::poll(&pfd, 1, int(timeout.count()));
            if (pr <= 0) return false;
            ssize_t got = ::recv(fd_, dst + off, n - off, 0);
            if (got <= 0) throw SessionAbort("transport: connection closed");
            off += size_t(got);
        }
        return true;
    }

    int fd_;
};

inline std::pair<std::string, uint16_t> parse_addr(const std::string& addr) {
    auto pos = addr.rfind(':');
    if (pos == std::string::npos) throw std::invalid_argument("address must be host:port");
    return {addr.substr(0, pos), static_cast<uint16_t>(std::stoi(addr.substr(pos + 1)))};
}

class TcpListener {
public:
    explicit TcpListener(uint16_t port) {
        fd_ = ::socket(AF_INET, SOCK_STREAM, 0);
        if (fd_ < 0) throw SessionAbort("transport: socket failed");
        int one = 1;
        ::setsockopt(fd_, SOL_SOCKET, SO_REUSEADDR, &one, sizeof(one));
        sockaddr_in sa{};
        sa.sin_family = AF_INET;
        sa.sin_addr.s_addr = htonl(INADDR_ANY);
        sa.sin_port = htons(port);
        if (::bind(fd_, reinterpret_cast<sockaddr*>(&sa), sizeof(sa)) != 0)
            throw SessionAbort("transport: bind failed");
        if (::listen(fd_, 64) != 0) throw SessionAbort("transport: listen failed");
    }
    ~TcpListener() {
        if (fd_ >= 0) ::close(fd_);
    }

    std::unique_ptr<Channel> accept(std::chrono::milliseconds timeout) {
        pollfd pfd{fd_, POLLIN, 0};
        if (::poll(&pfd, 1, int(timeout.count())) <= 0)
            throw SessionAbort("transport: accept timed out");
        int cfd = ::accept(fd_, nullptr, nullptr);
        if (cfd < 0) throw SessionAbort("transport: accept failed");
        return std::make_unique<TcpChannel>(cfd);
    }

private:
    int fd_ = -1;
};

inline std::unique_ptr<Channel> tcp_connect(const std::string& host, uint16_t port,
                                            int retries = 50) {
    for (int attempt = 0;; ++attempt) {
        int fd = ::socket(AF_INET, SOCK_STREAM, 0);
        if (fd < 0) throw SessionAbort("transport: socket failed");
        sockaddr_in sa{};
        sa.sin_family = AF_INET;
        sa.sin_port = htons(port);
        if (::inet_pton(AF_INET, host == "localhost" ? "127.0.0.1" : host.c_str(),
                        &sa.sin_addr) != 1) {
            ::close(fd);
            throw SessionAbort("transport: bad address");
        }
        if (::connect(fd, reinterpret_cast<sockaddr*>(&sa), sizeof(sa)) == 0)
            return std::make_unique<TcpChannel>(fd);
        ::close(fd);
        if (attempt >= retries) throw SessionAbort("transport: connect failed");
        ::usleep(100 * 1000);
    }
}

}  // namespace mktorus
