#include "iaxrsw/udp_gateway.hpp"

#include "iaxrsw/error.hpp"
#include "iaxrsw/trace.hpp"

#include <array>
#include <atomic>
#include <cerrno>
#include <charconv>
#include <chrono>
#include <cstring>
#include <mutex>
#include <thread>

#include <arpa/inet.h>
#include <netinet/in.h>
#include <poll.h>
#include <sys/socket.h>
#include <unistd.h>

namespace iaxrsw {

namespace {

constexpr int kPollTimeoutMs = 20;
constexpr std::size_t kMaxDatagram = 2048;

sockaddr_in to_sockaddr(const Endpoint& ep)
{
    sockaddr_in addr{};
    addr.sin_family = AF_INET;
    addr.sin_port = htons(ep.port);
    if (::inet_pton(AF_INET, ep.host.c_str(), &addr.sin_addr) != 1)
        throw Error(Errc::InvalidConfig, "not an IPv4 address: " + ep.host);
    return addr;
}

class UdpSocket {
public:
    explicit UdpSocket(const Endpoint& local)
    {
        const sockaddr_in addr = to_sockaddr(local);
        fd_ = ::socket(AF_INET, SOCK_DGRAM, 0);
        if (fd_ < 0)
            throw Error(Errc::BindFailure, std::string("socket: ") + std::strerror(errno));
        if (::bind(fd_, reinterpret_cast<const sockaddr*>(&addr), sizeof addr) != 0) {
            const int err = errno;
            ::close(fd_);
            throw Error(Errc::BindFailure, to_string(local) + ": " + std::strerror(err));
        }
    }
    UdpSocket(const UdpSocket&) = delete;
    UdpSocket& operator=(const UdpSocket&) = delete;
    ~UdpSocket() { close(); }

    void close() noexcept
    {
        if (fd_ >= 0)
            ::close(fd_);
        fd_ = -1;
    }

    int fd() const noexcept { return fd_; }

    Endpoint local() const
    {
        sockaddr_in addr{};
        socklen_t len = sizeof addr;
        ::getsockname(fd_, reinterpret_cast<sockaddr*>(&addr), &len);
        char host[INET_ADDRSTRLEN] = {};
        ::inet_ntop(AF_INET, &addr.sin_addr, host, sizeof host);
        return Endpoint{host, ntohs(addr.sin_port)};
    }

private:
    int fd_ = -1;
};

std::uint64_t ms_since(std::chrono::steady_clock::time_point t0)
{
    return static_cast<std::uint64_t>(std::chrono::duration_cast<std::chrono::milliseconds>(
                                          std::chrono::steady_clock::now() - t0)
                                          .count());
}

} // namespace

Endpoint parse_endpoint(std::string_view text)
{
    const auto colon = text.rfind(':');
    if (colon == std::string_view::npos || colon == 0)
        throw Error(Errc::InvalidConfig, "endpoint must be host:port, got '" + std::string(text) + "'");
    const std::string_view port_text = text.substr(colon + 1);
    unsigned port = 0;
    const auto [ptr, ec] = std::from_chars(port_text.data(), port_text.data() + port_text.size(), port);
    if (ec != std::errc{} || ptr != port_text.data() + port_text.size() || port > 65535)
        throw Error(Errc::InvalidConfig, "bad port in '" + std::string(text) + "'");
    Endpoint ep{std::string(text.substr(0, colon)), static_cast<std::uint16_t>(port)};
    to_sockaddr(ep);
    return ep;
}

std::string to_string(const Endpoint& ep)
{
    return ep.host + ":" + std::to_string(ep.port);
}

std::string format_stats_line(const RelayStats& s)
{
    auto dir = [](const char* name, const DirectionStats& d) {
        return std::string(name) + " in=" + std::to_string(d.packets_in)
             + " out=" + std::to_string(d.packets_relayed) + " bytes=" + std::to_string(d.bytes_relayed)
             + " rejects=" + std::to_string(d.parse_errors) + " drops=" + std::to_string(d.drops);
    };
    return "uptime_ms=" + std::to_string(s.uptime_ms) + " " + dir("iax_to_rsw", s.iax_to_rsw) + " "
         + dir("rsw_to_iax", s.rsw_to_iax);
}

struct RelayHandle::Impl {
    Impl(const RelayConfig& config, const CodecProfile& profile)
        : session(profile, config.iax_call_number, config.seed, config.buffer_capacity)
        , iax_socket(config.iax_listen)
        , rsw_socket(config.rsw_listen)
        , iax_peer(to_sockaddr(config.iax_peer))
        , rsw_peer(to_sockaddr(config.rsw_peer))
        , started(std::chrono::steady_clock::now())
    {
    }

    void launch()
    {
        iax_worker = std::thread([this] { serve(Direction::IaxToRsw); });
        rsw_worker = std::thread([this] { serve(Direction::RswToIax); });
    }

    void serve(Direction direction)
    {
        const bool from_iax = direction == Direction::IaxToRsw;
        const int in_fd = from_iax ? iax_socket.fd() : rsw_socket.fd();
        const int out_fd = from_iax ? rsw_socket.fd() : iax_socket.fd();
        const sockaddr_in& peer = from_iax ? rsw_peer : iax_peer;
        std::array<std::uint8_t, kMaxDatagram> buf{};

        while (!stopping.load(std::memory_order_acquire)) {
            pollfd pfd{in_fd, POLLIN, 0};
            const int ready = ::poll(&pfd, 1, kPollTimeoutMs);
            if (ready <= 0 || !(pfd.revents & POLLIN))
                continue;
            const ssize_t n = ::recv(in_fd, buf.data(), buf.size(), 0);
            if (n < 0)
                continue;
            handle(direction, ByteView(buf.data(), static_cast<std::size_t>(n)), out_fd, peer);
        }
    }

    void handle(Direction direction, ByteView datagram, int out_fd, const sockaddr_in& peer)
    {
        std::lock_guard lock(mutex);
        DirectionStats& stats = direction == Direction::IaxToRsw ? iax_to_rsw : rsw_to_iax;
        ++stats.packets_in;

        Bytes out;
        try {
            bool dropped = false;
            bool emitted = false;
            if (direction == Direction::IaxToRsw) {
                if (classify_iax_datagram(datagram) != IaxFrameKind::Mini) {
                    ++stats.parse_errors;
                    return;
                }
                dropped = session.accept_from_iax(parse_mini(datagram));
                if (auto rtp = session.emit_to_rsw()) {
                    out = serialize(*rtp);
                    emitted = true;
                }
            } else {
                dropped = session.accept_from_rsw(parse_rtp(datagram));
                if (auto mini = session.emit_to_iax()) {
                    out = serialize(*mini);
                    emitted = true;
                }
            }
            if (dropped)
                ++stats.drops;
            if (!emitted)
                return;
        } catch (const Error&) {
            ++stats.parse_errors;
            return;
        }

        const ssize_t sent = ::sendto(out_fd, out.data(), out.size(), 0,
                                      reinterpret_cast<const sockaddr*>(&peer), sizeof peer);
        if (sent == static_cast<ssize_t>(out.size())) {
            ++stats.packets_relayed;
            stats.bytes_relayed += out.size();
        } else {
            ++stats.drops;
        }
    }

    RelayStats snapshot() const
    {
        std::lock_guard lock(mutex);
        return RelayStats{iax_to_rsw, rsw_to_iax, ms_since(started)};
    }

    RelayStats shutdown()
    {
        stopping.store(true, std::memory_order_release);
        if (iax_worker.joinable())
            iax_worker.join();
        if (rsw_worker.joinable())
            rsw_worker.join();
        iax_socket.close();
        rsw_socket.close();
        RelayStats final_stats = snapshot();
        running = false;
        return final_stats;
    }

    mutable std::mutex mutex; // guards session and both DirectionStats
    GatewaySession session;
    DirectionStats iax_to_rsw;
    DirectionStats rsw_to_iax;
    UdpSocket iax_socket;
    UdpSocket rsw_socket;
    sockaddr_in iax_peer;
    sockaddr_in rsw_peer;
    std::chrono::steady_clock::time_point started;
    std::atomic<bool> stopping{false};
    bool running = true;
    std::thread iax_worker;
    std::thread rsw_worker;
};

RelayHandle::RelayHandle(std::unique_ptr<Impl> impl) : impl_(std::move(impl)) {}
RelayHandle::RelayHandle(RelayHandle&&) noexcept = default;

RelayHandle& RelayHandle::operator=(RelayHandle&& other) noexcept
{
    if (this != &other) {
        if (impl_ && impl_->running)
            impl_->shutdown();
        impl_ = std::move(other.impl_);
    }
    return *this;
}

RelayHandle::~RelayHandle()
{
    if (impl_ && impl_->running)
        impl_->shutdown();
}

RelayStats RelayHandle::snapshot_stats() const
{
    if (!running())
        throw Error(Errc::NotRunning);
    return impl_->snapshot();
}

RelayStats RelayHandle::stop()
{
    if (!running())
        throw Error(Errc::NotRunning);
    return impl_->shutdown();
}

bool RelayHandle::running() const noexcept
{
    return impl_ && impl_->running;
}

Endpoint RelayHandle::iax_local() const
{
    if (!running())
        throw Error(Errc::NotRunning);
    return impl_->iax_socket.local();
}

Endpoint RelayHandle::rsw_local() const
{
    if (!running())
        throw Error(Errc::NotRunning);
    return impl_->rsw_socket.local();
}

SessionBinding RelayHandle::binding() const
{
    std::lock_guard lock(impl_->mutex);
    return impl_->session.binding();
}

RelayHandle start_relay(const RelayConfig& config, const CodecRegistry& codecs)
{
    if (config.iax_call_number == 0 || config.iax_call_number > kMaxCallNumber)
        throw Error(Errc::InvalidConfig, "call number must be in 1..32767");
    if (config.iax_listen == config.rsw_listen && config.iax_listen.port != 0)
        throw Error(Errc::InvalidConfig, "IAX and RSW listen endpoints must differ");
    to_sockaddr(config.iax_peer);
    to_sockaddr(config.rsw_peer);

    const CodecProfile* profile = nullptr;
    try {
        profile = &codecs.lookup(config.codec);
    } catch (const Error& e) {
        throw Error(Errc::InvalidConfig, e.what());
    }

    auto impl = std::make_unique<RelayHandle::Impl>(config, *profile);
    impl->launch();
    return RelayHandle(std::move(impl));
}

} // namespace iaxrsw
