#pragma once

// Media-plane header codecs for the two sides of the gateway.
//
// RSW side: UDP payload = 12-byte RTP header + codec frame.
// IAX side: UDP payload = 4-byte mini-frame header + codec frame.
//
// Everything works on UDP payloads; IP and UDP headers belong to the OS and
// are only accounted for in framing arithmetic. All fields are big-endian.

#include <cstddef>
#include <cstdint>
#include <span>
#include <variant>
#include <vector>

namespace iaxrsw {

using Bytes = std::vector<std::uint8_t>;
using ByteView = std::span<const std::uint8_t>;

inline constexpr std::size_t kRtpHeaderSize = 12;
inline constexpr std::size_t kMiniHeaderSize = 4;
inline constexpr std::uint8_t kRtpVersion = 2;
inline constexpr std::uint16_t kMaxCallNumber = 0x7FFF;

struct RtpHeader {
    std::uint8_t version = kRtpVersion; // 2 bits
    bool padding = false;
    bool extension = false;
    std::uint8_t csrc_count = 0;   // 4 bits, always 0 here
    bool marker = false;
    std::uint8_t payload_type = 0; // 7 bits
    std::uint16_t sequence_number = 0;
    std::uint32_t timestamp = 0;   // sample clock
    std::uint32_t ssrc = 0;

    friend bool operator==(const RtpHeader&, const RtpHeader&) = default;
};

struct IaxMiniHeader {
    std::uint16_t source_call_number = 1; // 15 bits, 1..=32767
    std::uint16_t timestamp_low16 = 0;    // milliseconds, truncated

    friend bool operator==(const IaxMiniHeader&, const IaxMiniHeader&) = default;
};

struct RtpPacket {
    RtpHeader header;
    Bytes payload;

    friend bool operator==(const RtpPacket&, const RtpPacket&) = default;
};

struct MiniPacket {
    IaxMiniHeader header;
    Bytes payload;

    friend bool operator==(const MiniPacket&, const MiniPacket&) = default;
};

using MediaPacket = std::variant<RtpPacket, MiniPacket>;

enum class IaxFrameKind { Mini, Full, Invalid };

/// Throws Error{TooShort | UnsupportedVersion | CsrcPresent}.
RtpPacket parse_rtp(ByteView datagram);

/// Throws Error{InvalidHeader} when the header is not one this gateway emits
/// (version != 2, csrc_count != 0, or a field wider than its bit width).
Bytes serialize_rtp(const RtpHeader& header, ByteView payload);
inline Bytes serialize(const RtpPacket& p) { return serialize_rtp(p.header, p.payload); }

/// Throws Error{TooShort | NotMediaFrame | ZeroCallNumber}.
MiniPacket parse_mini(ByteView datagram);

/// Throws Error{InvalidHeader} for call numbers outside 1..=32767.
Bytes serialize_mini(const IaxMiniHeader& header, ByteView payload);
inline Bytes serialize(const MiniPacket& p) { return serialize_mini(p.header, p.payload); }

/// Total: never throws. Mini iff >= 4 bytes and the F bit is clear.
IaxFrameKind classify_iax_datagram(ByteView datagram) noexcept;

const char* to_string(IaxFrameKind kind) noexcept;

} // namespace iaxrsw
