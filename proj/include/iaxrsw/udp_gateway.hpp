#pragma once

// Live relay: one UDP socket per side, each serviced by its own worker,
// sharing a single GatewaySession.
//
//   IAX peer --mini--> [iax_listen]  ==>  [rsw_listen] --RTP--> RSW peer
//   IAX peer <--mini-- [iax_listen]  <==  [rsw_listen] <--RTP-- RSW peer
//
// Full frames and anything unparseable are counted and dropped.

#include "iaxrsw/framing.hpp"
#include "iaxrsw/translator.hpp"

#include <cstdint>
#include <memory>
#include <string>
#include <string_view>

namespace iaxrsw {

struct Endpoint {
    std::string host = "127.0.0.1"; // IPv4 dotted quad
    std::uint16_t port = 0;

    friend bool operator==(const Endpoint&, const Endpoint&) = default;
};

/// "host:port". Throws Error{InvalidConfig}.
Endpoint parse_endpoint(std::string_view text);
std::string to_string(const Endpoint& ep);

struct RelayConfig {
    Endpoint iax_listen{"127.0.0.1", 4569};
    Endpoint rsw_listen{"127.0.0.1", 5004};
    Endpoint iax_peer{"127.0.0.1", 4570};
    Endpoint rsw_peer{"127.0.0.1", 5006};
    std::string codec = "gsm";
    std::uint16_t iax_call_number = 1;
    std::uint64_t seed = 1;
    std::uint32_t stats_interval_ms = 1000;
    std::size_t buffer_capacity = kDefaultBufferCapacity;
};

struct DirectionStats {
    std::uint64_t packets_in = 0;
    std::uint64_t packets_relayed = 0;
    std::uint64_t bytes_relayed = 0;
    std::uint64_t parse_errors = 0; // malformed, full frames, binding mismatches
    std::uint64_t drops = 0;        // buffer overflow or send failure

    friend bool operator==(const DirectionStats&, const DirectionStats&) = default;
};

struct RelayStats {
    DirectionStats iax_to_rsw;
    DirectionStats rsw_to_iax;
    std::uint64_t uptime_ms = 0;
};

std::string format_stats_line(const RelayStats& stats);

class RelayHandle {
public:
    RelayHandle(RelayHandle&&) noexcept;
    RelayHandle& operator=(RelayHandle&&) noexcept;
    ~RelayHandle(); // stops if still running

    /// Consistent point-in-time counters. Throws Error{NotRunning}.
    RelayStats snapshot_stats() const;

    /// Joins the workers and closes the sockets; no datagram is handled after
    /// this returns. Throws Error{NotRunning} on a second call.
    RelayStats stop();

    bool running() const noexcept;

    /// Actually bound addresses (useful when the config asked for port 0).
    Endpoint iax_local() const;
    Endpoint rsw_local() const;

    /// The session binding as of now (SSRC the RSW peer must use, etc.).
    SessionBinding binding() const;

private:
    struct Impl;
    explicit RelayHandle(std::unique_ptr<Impl> impl);
    friend RelayHandle start_relay(const RelayConfig&, const CodecRegistry&);

    std::unique_ptr<Impl> impl_;
};

/// Binds both listen endpoints and starts the workers.
/// Throws Error{InvalidConfig | BindFailure}.
RelayHandle start_relay(const RelayConfig& config, const CodecRegistry& codecs = CodecRegistry{});

inline RelayStats snapshot_stats(const RelayHandle& handle) { return handle.snapshot_stats(); }
inline RelayStats stop_relay(RelayHandle& handle) { return handle.stop(); }

} // namespace iaxrsw
