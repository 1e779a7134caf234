#pragma once

// Codec framing model: frame sizes, packet rates, on-wire overhead and a
// deterministic opaque media source.

#include "iaxrsw/packet_codecs.hpp"

#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace iaxrsw {

inline constexpr std::uint32_t kIpHeaderBytes = 20;
inline constexpr std::uint32_t kUdpHeaderBytes = 8;

struct CodecProfile {
    std::string name;
    std::uint32_t bitrate_bps = 0;
    std::uint32_t frame_interval_ms = 0;
    std::uint32_t frame_payload_bytes = 0;
    std::uint8_t rtp_payload_type = 0;
    std::uint32_t sample_rate_hz = 0;

    friend bool operator==(const CodecProfile&, const CodecProfile&) = default;
};

/// GSM full rate as used by both sides: 13.2 kb/s, 20 ms frames, 33 bytes,
/// 8 kHz clock, static RTP payload type 3.
const CodecProfile& gsm_profile();

/// Throws Error{InvalidProfile} unless interval, payload size and sample rate
/// are positive and the payload type fits in 7 bits.
void validate_profile(const CodecProfile& profile);

enum class Side { Iax, Rsw };

const char* to_string(Side side) noexcept;

/// 1000 / frame_interval_ms. Throws Error{NonIntegralRate}.
std::uint32_t frames_per_second(const CodecProfile& profile);

/// IP + UDP + media header + frame payload.
std::uint32_t on_wire_bytes(const CodecProfile& profile, Side side) noexcept;

/// on_wire_bytes * 8 * frames_per_second. Throws Error{NonIntegralRate}.
std::uint64_t on_wire_bandwidth_bps(const CodecProfile& profile, Side side);

/// Codec payload only: frame_payload_bytes * 8 * frames_per_second.
std::uint64_t payload_bandwidth_bps(const CodecProfile& profile);

struct AudioFrame {
    Bytes payload;
    std::uint64_t capture_time_ms = 0;
    std::uint32_t frame_index = 0;

    friend bool operator==(const AudioFrame&, const AudioFrame&) = default;
};

/// n_frames opaque frames at 0, interval, 2*interval ... ms. A pure function
/// of (profile, n_frames, seed).
std::vector<AudioFrame> generate_talkspurt(const CodecProfile& profile, std::uint32_t n_frames,
                                           std::uint64_t seed);

/// Name-keyed set of profiles. Starts with GSM; config may add more.
class CodecRegistry {
public:
    CodecRegistry();

    /// Validates, then inserts or replaces.
    void add(CodecProfile profile);

    /// Throws Error{UnknownCodec}.
    const CodecProfile& lookup(std::string_view name) const;

    const std::map<std::string, CodecProfile, std::less<>>& profiles() const noexcept
    {
        return profiles_;
    }

private:
    std::map<std::string, CodecProfile, std::less<>> profiles_;
};

} // namespace iaxrsw
