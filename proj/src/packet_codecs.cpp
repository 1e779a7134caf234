#include "iaxrsw/packet_codecs.hpp"

#include "iaxrsw/error.hpp"

#include <string>

namespace iaxrsw {

namespace {

constexpr std::uint16_t kFullFrameBit = 0x8000;

std::uint16_t load16(ByteView b, std::size_t at)
{
    return static_cast<std::uint16_t>((b[at] << 8) | b[at + 1]);
}

std::uint32_t load32(ByteView b, std::size_t at)
{
    return (static_cast<std::uint32_t>(b[at]) << 24) | (static_cast<std::uint32_t>(b[at + 1]) << 16)
        | (static_cast<std::uint32_t>(b[at + 2]) << 8) | static_cast<std::uint32_t>(b[at + 3]);
}

void store16(Bytes& out, std::uint16_t v)
{
    out.push_back(static_cast<std::uint8_t>(v >> 8));
    out.push_back(static_cast<std::uint8_t>(v));
}

void store32(Bytes& out, std::uint32_t v)
{
    out.push_back(static_cast<std::uint8_t>(v >> 24));
    out.push_back(static_cast<std::uint8_t>(v >> 16));
    out.push_back(static_cast<std::uint8_t>(v >> 8));
    out.push_back(static_cast<std::uint8_t>(v));
}

} // namespace

RtpPacket parse_rtp(ByteView datagram)
{
    if (datagram.size() < kRtpHeaderSize)
        throw Error(Errc::TooShort, "RTP datagram of " + std::to_string(datagram.size()) + " bytes");

    RtpPacket packet;
    RtpHeader& h = packet.header;
    const std::uint8_t b0 = datagram[0];
    const std::uint8_t b1 = datagram[1];
    h.version = b0 >> 6;
    h.padding = (b0 & 0x20) != 0;
    h.extension = (b0 & 0x10) != 0;
    h.csrc_count = b0 & 0x0F;
    h.marker = (b1 & 0x80) != 0;
    h.payload_type = b1 & 0x7F;

    if (h.version != kRtpVersion)
        throw Error(Errc::UnsupportedVersion, "version " + std::to_string(h.version));
    if (h.csrc_count != 0)
        throw Error(Errc::CsrcPresent, "csrc_count " + std::to_string(h.csrc_count));

    h.sequence_number = load16(datagram, 2);
    h.timestamp = load32(datagram, 4);
    h.ssrc = load32(datagram, 8);
    packet.payload.assign(datagram.begin() + kRtpHeaderSize, datagram.end());
    return packet;
}

Bytes serialize_rtp(const RtpHeader& h, ByteView payload)
{
    if (h.version != kRtpVersion)
        throw Error(Errc::InvalidHeader, "version must be 2");
    if (h.csrc_count != 0)
        throw Error(Errc::InvalidHeader, "csrc_count must be 0");
    if (h.payload_type > 0x7F)
        throw Error(Errc::InvalidHeader, "payload type exceeds 7 bits");

    Bytes out;
    out.reserve(kRtpHeaderSize + payload.size());
    out.push_back(static_cast<std::uint8_t>((h.version << 6) | (h.padding ? 0x20 : 0)
                                            | (h.extension ? 0x10 : 0)));
    out.push_back(static_cast<std::uint8_t>((h.marker ? 0x80 : 0) | h.payload_type));
    store16(out, h.sequence_number);
    store32(out, h.timestamp);
    store32(out, h.ssrc);
    out.insert(out.end(), payload.begin(), payload.end());
    return out;
}

MiniPacket parse_mini(ByteView datagram)
{
    if (datagram.size() < kMiniHeaderSize)
        throw Error(Errc::TooShort, "mini frame of " + std::to_string(datagram.size()) + " bytes");

    const std::uint16_t word = load16(datagram, 0);
    if (word & kFullFrameBit)
        throw Error(Errc::NotMediaFrame, "F bit set (full frame)");
    if (word == 0)
        throw Error(Errc::ZeroCallNumber);

    MiniPacket packet;
    packet.header.source_call_number = word;
    packet.header.timestamp_low16 = load16(datagram, 2);
    packet.payload.assign(datagram.begin() + kMiniHeaderSize, datagram.end());
    return packet;
}

Bytes serialize_mini(const IaxMiniHeader& h, ByteView payload)
{
    if (h.source_call_number == 0 || h.source_call_number > kMaxCallNumber)
        throw Error(Errc::InvalidHeader,
                    "call number " + std::to_string(h.source_call_number) + " outside 1..32767");

    Bytes out;
    out.reserve(kMiniHeaderSize + payload.size());
    store16(out, h.source_call_number);
    store16(out, h.timestamp_low16);
    out.insert(out.end(), payload.begin(), payload.end());
    return out;
}

IaxFrameKind classify_iax_datagram(ByteView datagram) noexcept
{
    if (datagram.size() < kMiniHeaderSize)
        return IaxFrameKind::Invalid;
    return (datagram[0] & 0x80) ? IaxFrameKind::Full : IaxFrameKind::Mini;
}

const char* to_string(IaxFrameKind kind) noexcept
{
    switch (kind) {
    case IaxFrameKind::Mini: return "mini";
    case IaxFrameKind::Full: return "full";
    case IaxFrameKind::Invalid: return "invalid";
    }
    return "invalid";
}

} // namespace iaxrsw
