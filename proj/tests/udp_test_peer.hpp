#pragma once

// Minimal loopback UDP endpoint for driving the relay from tests.

#include "iaxrsw/packet_codecs.hpp"
#include "iaxrsw/udp_gateway.hpp"

#include <array>
#include <optional>
#include <stdexcept>

#include <arpa/inet.h>
#include <netinet/in.h>
#include <poll.h>
#include <sys/socket.h>
#include <unistd.h>

namespace iaxrsw::test {

class UdpPeer {
public:
    UdpPeer()
    {
        fd_ = ::socket(AF_INET, SOCK_DGRAM, 0);
        sockaddr_in addr{};
        addr.sin_family = AF_INET;
        addr.sin_addr.s_addr = htonl(INADDR_LOOPBACK);
        if (fd_ < 0 || ::bind(fd_, reinterpret_cast<sockaddr*>(&addr), sizeof addr) != 0)
            throw std::runtime_error("test peer bind failed");
        socklen_t len = sizeof addr;
        ::getsockname(fd_, reinterpret_cast<sockaddr*>(&addr), &len);
        port_ = ntohs(addr.sin_port);
    }
    UdpPeer(const UdpPeer&) = delete;
    UdpPeer& operator=(const UdpPeer&) = delete;
    ~UdpPeer() { ::close(fd_); }

    Endpoint endpoint() const { return Endpoint{"127.0.0.1", port_}; }

    void send_to(const Endpoint& to, ByteView data) const
    {
        sockaddr_in addr{};
        addr.sin_family = AF_INET;
        addr.sin_port = htons(to.port);
        ::inet_pton(AF_INET, to.host.c_str(), &addr.sin_addr);
        ::sendto(fd_, data.data(), data.size(), 0, reinterpret_cast<sockaddr*>(&addr), sizeof addr);
    }

    std::optional<Bytes> receive(int timeout_ms = 1000) const
    {
        pollfd pfd{fd_, POLLIN, 0};
        if (::poll(&pfd, 1, timeout_ms) <= 0)
            return std::nullopt;
        std::array<std::uint8_t, 2048> buf{};
        const ssize_t n = ::recv(fd_, buf.data(), buf.size(), 0);
        if (n < 0)
            return std::nullopt;
        return Bytes(buf.begin(), buf.begin() + n);
    }

private:
    int fd_ = -1;
    std::uint16_t port_ = 0;
};

} // namespace iaxrsw::test
