#include "iaxrsw/translator.hpp"

#include "iaxrsw/error.hpp"
#include "iaxrsw/rng.hpp"

#include <string>

namespace iaxrsw {

namespace {

constexpr std::uint64_t kWrap = 0x10000;
constexpr std::int64_t kHalfWrap = 0x8000;

void check_payload(std::size_t size, const CodecProfile& profile)
{
    if (size != profile.frame_payload_bytes)
        throw Error(Errc::PayloadSizeMismatch, std::to_string(size) + " bytes, " + profile.name
                                                   + " frames are "
                                                   + std::to_string(profile.frame_payload_bytes));
}

} // namespace

std::uint64_t extend_timestamp(std::uint16_t low16, std::uint64_t last_extended_ms) noexcept
{
    std::uint64_t candidate = (last_extended_ms & ~(kWrap - 1)) | low16;
    const auto diff = static_cast<std::int64_t>(candidate - last_extended_ms);
    if (diff > kHalfWrap && candidate >= kWrap)
        candidate -= kWrap;
    else if (diff <= -kHalfWrap)
        candidate += kWrap;
    return candidate;
}

SessionBinding open_binding(std::uint16_t iax_call_number, std::uint64_t ssrc_seed)
{
    if (iax_call_number == 0 || iax_call_number > kMaxCallNumber)
        throw Error(Errc::InvalidCallNumber, std::to_string(iax_call_number));

    SessionBinding b;
    b.iax_call_number = iax_call_number;
    b.rtp_ssrc = static_cast<std::uint32_t>(derive_seed(ssrc_seed, 1));
    b.next_rtp_seq = static_cast<std::uint16_t>(derive_seed(ssrc_seed, 2));
    return b;
}

RtpPacket iax_to_rsw(const MiniPacket& packet, SessionBinding& binding, const CodecProfile& profile)
{
    if (packet.header.source_call_number != binding.iax_call_number)
        throw Error(Errc::CallNumberMismatch,
                    "call " + std::to_string(packet.header.source_call_number) + ", binding is "
                        + std::to_string(binding.iax_call_number));
    check_payload(packet.payload.size(), profile);

    const std::uint64_t extended = extend_timestamp(packet.header.timestamp_low16,
                                                    binding.last_extended_ms);
    const std::uint64_t ticks = extended * profile.sample_rate_hz / 1000;

    RtpPacket out;
    out.header.payload_type = profile.rtp_payload_type;
    out.header.ssrc = binding.rtp_ssrc;
    out.header.sequence_number = binding.next_rtp_seq;
    out.header.timestamp = static_cast<std::uint32_t>(binding.rtp_ts_base + ticks);
    out.header.marker = !binding.first_packet_sent;
    out.payload = packet.payload;

    binding.next_rtp_seq = static_cast<std::uint16_t>(binding.next_rtp_seq + 1);
    binding.first_packet_sent = true;
    if (extended > binding.last_extended_ms)
        binding.last_extended_ms = extended;
    return out;
}

MiniPacket rsw_to_iax(const RtpPacket& packet, SessionBinding& binding, const CodecProfile& profile)
{
    if (packet.header.ssrc != binding.rtp_ssrc)
        throw Error(Errc::SsrcMismatch, "ssrc " + std::to_string(packet.header.ssrc));
    check_payload(packet.payload.size(), profile);
    if (profile.sample_rate_hz % 1000 != 0)
        throw Error(Errc::NonIntegralRate,
                    profile.name + ": sample rate is not a whole number of samples per ms");

    const std::uint32_t samples_per_ms = profile.sample_rate_hz / 1000;
    const std::uint32_t delta = packet.header.timestamp - binding.rtp_ts_base;
    if (delta % samples_per_ms != 0)
        throw Error(Errc::NonIntegralTimestamp,
                    std::to_string(delta) + " samples is not a whole millisecond");

    RtpReceiveAccounting& rx = binding.rsw_rx;
    const std::uint16_t seq = packet.header.sequence_number;
    if (!rx.started) {
        rx.started = true;
        rx.highest_seq = seq;
    } else {
        const auto ahead = static_cast<std::int16_t>(static_cast<std::uint16_t>(seq - rx.highest_seq));
        if (ahead > 0) {
            rx.gaps += static_cast<std::uint64_t>(ahead - 1);
            rx.highest_seq = seq;
        } else {
            ++rx.out_of_order;
        }
    }
    ++rx.received;

    MiniPacket out;
    out.header.source_call_number = binding.iax_call_number;
    out.header.timestamp_low16 = static_cast<std::uint16_t>(delta / samples_per_ms);
    out.payload = packet.payload;
    return out;
}

GatewaySession::GatewaySession(CodecProfile profile, std::uint16_t iax_call_number,
                               std::uint64_t seed, std::size_t buffer_capacity)
    : profile_(std::move(profile))
    , binding_(open_binding(iax_call_number, seed))
    , iax_to_rsw_(buffer_capacity)
    , rsw_to_iax_(buffer_capacity)
{
    validate_profile(profile_);
}

std::optional<RtpPacket> GatewaySession::emit_to_rsw()
{
    auto packet = iax_to_rsw_.pop();
    if (!packet)
        return std::nullopt;
    return iax_to_rsw(*packet, binding_, profile_);
}

std::optional<MiniPacket> GatewaySession::emit_to_iax()
{
    auto packet = rsw_to_iax_.pop();
    if (!packet)
        return std::nullopt;
    return rsw_to_iax(*packet, binding_, profile_);
}

} // namespace iaxrsw
