#pragma once

// Per-packet timing records produced by the simulator and consumed by metrics.
// Times are integer microseconds of virtual time.

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace iaxrsw {

using Micros = std::int64_t;

enum class Direction { IaxToRsw, RswToIax };

const char* to_string(Direction d) noexcept;
std::optional<Direction> parse_direction(std::string_view text) noexcept;

inline double to_ms(Micros t) noexcept { return static_cast<double>(t) / 1000.0; }

/// "12.345" for 12345 us; exact, no floating point involved.
std::string format_ms(Micros t);

struct PacketTraceEvent {
    std::uint32_t packet_id = 0;
    Direction direction = Direction::IaxToRsw;
    Micros send_us = 0;
    Micros gateway_in_us = 0;
    std::optional<Micros> gateway_out_us; // empty when dropped in the gateway buffer
    std::optional<Micros> receive_us;
    std::uint32_t size_bytes_in = 0;  // UDP payload entering the gateway
    std::uint32_t size_bytes_out = 0; // UDP payload leaving it, 0 if dropped

    bool delivered() const noexcept { return receive_us.has_value(); }

    friend bool operator==(const PacketTraceEvent&, const PacketTraceEvent&) = default;
};

inline constexpr std::string_view kTraceCsvHeader =
    "packet_id,direction,send_ms,gw_in_ms,gw_out_ms,recv_ms,bytes_in,bytes_out";

/// Optional `# ...` preamble lines, the header row, then one row per event.
/// Dropped packets leave gw_out_ms and recv_ms empty.
std::string trace_csv(std::span<const PacketTraceEvent> trace,
                      std::span<const std::string> preamble = {});

} // namespace iaxrsw
