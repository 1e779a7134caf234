#include "iaxrsw/framing.hpp"

#include "iaxrsw/error.hpp"
#include "iaxrsw/rng.hpp"

namespace iaxrsw {

const CodecProfile& gsm_profile()
{
    static const CodecProfile gsm{
        .name = "gsm",
        .bitrate_bps = 13200,
        .frame_interval_ms = 20,
        .frame_payload_bytes = 33,
        .rtp_payload_type = 3,
        .sample_rate_hz = 8000,
    };
    return gsm;
}

void validate_profile(const CodecProfile& p)
{
    if (p.name.empty())
        throw Error(Errc::InvalidProfile, "profile needs a name");
    if (p.frame_interval_ms == 0)
        throw Error(Errc::InvalidProfile, p.name + ": frame_interval_ms must be > 0");
    if (p.frame_payload_bytes == 0)
        throw Error(Errc::InvalidProfile, p.name + ": frame_payload_bytes must be > 0");
    if (p.sample_rate_hz == 0)
        throw Error(Errc::InvalidProfile, p.name + ": sample_rate_hz must be > 0");
    if (p.rtp_payload_type > 0x7F)
        throw Error(Errc::InvalidProfile, p.name + ": payload type exceeds 7 bits");
}

const char* to_string(Side side) noexcept
{
    return side == Side::Iax ? "iax" : "rsw";
}

std::uint32_t frames_per_second(const CodecProfile& profile)
{
    const std::uint32_t interval = profile.frame_interval_ms;
    if (interval == 0 || 1000 % interval != 0)
        throw Error(Errc::NonIntegralRate,
                    "1000 ms is not a whole number of " + std::to_string(interval) + " ms frames");
    return 1000 / interval;
}

std::uint32_t on_wire_bytes(const CodecProfile& profile, Side side) noexcept
{
    const std::uint32_t media_header =
        side == Side::Rsw ? static_cast<std::uint32_t>(kRtpHeaderSize) : static_cast<std::uint32_t>(kMiniHeaderSize);
    return kIpHeaderBytes + kUdpHeaderBytes + media_header + profile.frame_payload_bytes;
}

std::uint64_t on_wire_bandwidth_bps(const CodecProfile& profile, Side side)
{
    return std::uint64_t{on_wire_bytes(profile, side)} * 8 * frames_per_second(profile);
}

std::uint64_t payload_bandwidth_bps(const CodecProfile& profile)
{
    return std::uint64_t{profile.frame_payload_bytes} * 8 * frames_per_second(profile);
}

std::vector<AudioFrame> generate_talkspurt(const CodecProfile& profile, std::uint32_t n_frames,
                                           std::uint64_t seed)
{
    constexpr std::uint64_t kMediaStream = 0x6d65646961; // "media"
    Rng rng(derive_seed(seed, kMediaStream));

    std::vector<AudioFrame> frames;
    frames.reserve(n_frames);
    for (std::uint32_t i = 0; i < n_frames; ++i) {
        AudioFrame frame;
        frame.frame_index = i;
        frame.capture_time_ms = std::uint64_t{i} * profile.frame_interval_ms;
        frame.payload.resize(profile.frame_payload_bytes);
        std::uint64_t word = 0;
        for (std::size_t b = 0; b < frame.payload.size(); ++b) {
            if (b % 8 == 0)
                word = rng.next_u64();
            frame.payload[b] = static_cast<std::uint8_t>(word >> (8 * (b % 8)));
        }
        frames.push_back(std::move(frame));
    }
    return frames;
}

CodecRegistry::CodecRegistry()
{
    add(gsm_profile());
}

void CodecRegistry::add(CodecProfile profile)
{
    validate_profile(profile);
    auto name = profile.name;
    profiles_.insert_or_assign(std::move(name), std::move(profile));
}

const CodecProfile& CodecRegistry::lookup(std::string_view name) const
{
    auto it = profiles_.find(name);
    if (it == profiles_.end())
        throw Error(Errc::UnknownCodec, std::string(name));
    return it->second;
}

} // namespace iaxrsw
