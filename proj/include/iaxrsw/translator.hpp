#pragma once

// IAX <-> RSW media translation: per-call session state, header rewriting in
// both directions, and the two gateway FIFOs.
//
// Clock mapping: mini-frame timestamps are milliseconds (16 bits, wrapping),
// RTP timestamps count codec samples (32 bits, wrapping). With an 8 kHz
// clock one millisecond is 8 RTP ticks.

#include "iaxrsw/framing.hpp"
#include "iaxrsw/packet_codecs.hpp"

#include <cstddef>
#include <cstdint>
#include <deque>
#include <optional>
#include <utility>

namespace iaxrsw {

/// Sequence bookkeeping for RTP arriving from the RSW side. Mini frames have
/// no sequence field, so this is all that survives of it.
struct RtpReceiveAccounting {
    bool started = false;
    std::uint16_t highest_seq = 0;
    std::uint64_t received = 0;
    std::uint64_t gaps = 0;        // sequence numbers skipped ahead of highest_seq
    std::uint64_t out_of_order = 0; // arrivals at or behind highest_seq

    friend bool operator==(const RtpReceiveAccounting&, const RtpReceiveAccounting&) = default;
};

struct SessionBinding {
    std::uint16_t iax_call_number = 1;
    std::uint32_t rtp_ssrc = 0;
    std::uint16_t next_rtp_seq = 0;
    std::uint32_t rtp_ts_base = 0;
    std::uint64_t session_epoch_ms = 0;
    std::uint64_t last_extended_ms = 0; // never decreases
    bool first_packet_sent = false;
    RtpReceiveAccounting rsw_rx;

    friend bool operator==(const SessionBinding&, const SessionBinding&) = default;
};

/// The value v >= 0 with (v & 0xFFFF) == low16 that lies closest to
/// last_extended_ms; ties go to the larger candidate.
std::uint64_t extend_timestamp(std::uint16_t low16, std::uint64_t last_extended_ms) noexcept;

/// SSRC and initial sequence number are drawn from ssrc_seed; time bases
/// start at zero. Throws Error{InvalidCallNumber}.
SessionBinding open_binding(std::uint16_t iax_call_number, std::uint64_t ssrc_seed);

/// Replaces the mini header with an RTP header. Advances next_rtp_seq and
/// last_extended_ms, and sets the marker on the first packet of the binding.
/// Throws Error{CallNumberMismatch | PayloadSizeMismatch}.
RtpPacket iax_to_rsw(const MiniPacket& packet, SessionBinding& binding, const CodecProfile& profile);

/// Replaces the RTP header with a mini header. The RTP sequence number only
/// feeds binding.rsw_rx.
/// Throws Error{SsrcMismatch | PayloadSizeMismatch | NonIntegralTimestamp | NonIntegralRate}.
MiniPacket rsw_to_iax(const RtpPacket& packet, SessionBinding& binding, const CodecProfile& profile);

/// Bounded FIFO. When full, the oldest queued packet is discarded to make
/// room (fresh audio beats stale audio).
template <class Packet>
class TranslationBuffer {
public:
    explicit TranslationBuffer(std::size_t capacity) : capacity_(capacity) {}

    /// Returns true iff a packet was dropped to make room (with capacity 0,
    /// the pushed packet itself is the one dropped).
    bool push(Packet packet)
    {
        ++pushed_;
        if (capacity_ == 0) {
            ++dropped_;
            return true;
        }
        bool dropped = false;
        if (queue_.size() == capacity_) {
            queue_.pop_front();
            ++dropped_;
            dropped = true;
        }
        queue_.push_back(std::move(packet));
        return dropped;
    }

    std::optional<Packet> pop()
    {
        if (queue_.empty())
            return std::nullopt;
        std::optional<Packet> front{std::move(queue_.front())};
        queue_.pop_front();
        ++popped_;
        return front;
    }

    std::size_t size() const noexcept { return queue_.size(); }
    bool empty() const noexcept { return queue_.empty(); }
    std::size_t capacity() const noexcept { return capacity_; }
    std::uint64_t dropped() const noexcept { return dropped_; }
    std::uint64_t pushed() const noexcept { return pushed_; }
    std::uint64_t popped() const noexcept { return popped_; }
    const std::deque<Packet>& queued() const noexcept { return queue_; }

private:
    std::deque<Packet> queue_;
    std::size_t capacity_;
    std::uint64_t dropped_ = 0;
    std::uint64_t pushed_ = 0;
    std::uint64_t popped_ = 0;
};

inline constexpr std::size_t kDefaultBufferCapacity = 50;

/// One call through the gateway: the binding plus the IAX->RSW and RSW->IAX
/// buffers. Buffers hold packets in their source format; translation happens
/// as they leave. Not thread-safe; one owner at a time.
class GatewaySession {
public:
    GatewaySession(CodecProfile profile, std::uint16_t iax_call_number, std::uint64_t seed,
                   std::size_t buffer_capacity = kDefaultBufferCapacity);

    /// Returns true iff a queued packet was dropped.
    bool accept_from_iax(MiniPacket packet) { return iax_to_rsw_.push(std::move(packet)); }
    bool accept_from_rsw(RtpPacket packet) { return rsw_to_iax_.push(std::move(packet)); }

    /// Pops the oldest queued packet and translates it. The packet is consumed
    /// even when translation throws.
    std::optional<RtpPacket> emit_to_rsw();
    std::optional<MiniPacket> emit_to_iax();

    const SessionBinding& binding() const noexcept { return binding_; }
    const CodecProfile& profile() const noexcept { return profile_; }
    const TranslationBuffer<MiniPacket>& iax_to_rsw_buffer() const noexcept { return iax_to_rsw_; }
    const TranslationBuffer<RtpPacket>& rsw_to_iax_buffer() const noexcept { return rsw_to_iax_; }

private:
    CodecProfile profile_;
    SessionBinding binding_;
    TranslationBuffer<MiniPacket> iax_to_rsw_;
    TranslationBuffer<RtpPacket> rsw_to_iax_;
};

} // namespace iaxrsw
