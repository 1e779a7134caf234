#include "iaxrsw/simnet.hpp"

#include "iaxrsw/error.hpp"

#include <cmath>
#include <cstdio>
#include <functional>
#include <queue>
#include <stdexcept>

namespace iaxrsw {

namespace {

// Seed stream ids; each consumer of randomness gets its own generator.
constexpr std::uint64_t kStreamBinding = 20;
constexpr std::uint64_t kStreamMedia = 30;
constexpr std::uint64_t kStreamIngress = 40;
constexpr std::uint64_t kStreamEgress = 50;
constexpr std::uint64_t kStreamRtpSender = 60;

Micros delay_to_us(double ms)
{
    return static_cast<Micros>(std::floor(ms * 1000.0));
}

Micros constant_to_us(double ms)
{
    return static_cast<Micros>(std::llround(ms * 1000.0));
}

std::string num(double v)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, "%g", v);
    return buf;
}

std::uint64_t direction_index(Direction d)
{
    return d == Direction::IaxToRsw ? 0 : 1;
}

struct Queued {
    std::uint32_t id = 0;
    MediaPacket packet;
};

class Simulation {
public:
    Simulation(const ScenarioConfig& config, const CodecProfile& profile)
        : config_(config)
        , profile_(profile)
        , binding_(open_binding(config.iax_call_number, derive_seed(config.seed, kStreamBinding)))
        , processing_us_(constant_to_us(config.gateway_processing_delay_ms))
    {
        if (config.direction != ScenarioDirection::RswToIax)
            lanes_.push_back(make_lane(Direction::IaxToRsw));
        if (config.direction != ScenarioDirection::IaxToRsw)
            lanes_.push_back(make_lane(Direction::RswToIax));
    }

    ScenarioResult run()
    {
        const Micros interval_us = Micros{profile_.frame_interval_ms} * 1000;
        for (auto& lane : lanes_)
            for (std::uint32_t id = 0; id < config_.packet_count; ++id)
                schedule({Micros{id} * interval_us, SimEventKind::FrameCaptured, id, lane.direction});

        ScenarioResult result;
        while (!queue_.empty()) {
            const SimEvent ev = queue_.top();
            queue_.pop();
            result.executed.push_back(ev);
            Lane& lane = lane_for(ev.direction);
            switch (ev.kind) {
            case SimEventKind::FrameCaptured: on_capture(lane, ev); break;
            case SimEventKind::LinkDeliver: on_gateway_arrival(lane, ev); break;
            case SimEventKind::GatewayTranslate: on_translate(lane, ev); break;
            case SimEventKind::Received: on_receive(lane, ev); break;
            }
        }
        for (auto& lane : lanes_)
            result.trace.insert(result.trace.end(), lane.trace.begin(), lane.trace.end());
        return result;
    }

private:
    struct Lane {
        Direction direction;
        LinkModel ingress_link;
        LinkModel egress_link;
        Rng ingress_rng;
        Rng egress_rng;
        std::vector<AudioFrame> frames;
        std::vector<Bytes> wire; // datagram currently on a link, by packet id
        std::vector<PacketTraceEvent> trace;
        TranslationBuffer<Queued> buffer;
        bool busy = false;
        std::uint16_t rtp_seq0 = 0;
    };

    Lane make_lane(Direction d)
    {
        const std::uint64_t di = direction_index(d);
        const bool from_iax = d == Direction::IaxToRsw;
        Lane lane{
            .direction = d,
            .ingress_link = from_iax ? config_.iax_link : config_.rsw_link,
            .egress_link = from_iax ? config_.rsw_link : config_.iax_link,
            .ingress_rng = Rng(derive_seed(config_.seed, kStreamIngress + di)),
            .egress_rng = Rng(derive_seed(config_.seed, kStreamEgress + di)),
            .frames = generate_talkspurt(profile_, config_.packet_count,
                                         derive_seed(config_.seed, kStreamMedia + di)),
            .wire = std::vector<Bytes>(config_.packet_count),
            .trace = std::vector<PacketTraceEvent>(config_.packet_count),
            .buffer = TranslationBuffer<Queued>(config_.buffer_capacity),
            .busy = false,
            .rtp_seq0 = static_cast<std::uint16_t>(derive_seed(config_.seed, kStreamRtpSender)),
        };
        for (std::uint32_t id = 0; id < config_.packet_count; ++id) {
            lane.trace[id].packet_id = id;
            lane.trace[id].direction = d;
        }
        return lane;
    }

    Lane& lane_for(Direction d)
    {
        for (auto& lane : lanes_)
            if (lane.direction == d)
                return lane;
        throw std::logic_error("event for an inactive direction");
    }

    void schedule(const SimEvent& ev) { queue_.push(ev); }

    // The sending client builds a native datagram for its own protocol.
    Bytes sender_datagram(const Lane& lane, std::uint32_t id) const
    {
        const AudioFrame& frame = lane.frames[id];
        if (lane.direction == Direction::IaxToRsw) {
            const IaxMiniHeader h{config_.iax_call_number,
                                  static_cast<std::uint16_t>(frame.capture_time_ms)};
            return serialize_mini(h, frame.payload);
        }
        RtpHeader h;
        h.payload_type = profile_.rtp_payload_type;
        h.marker = id == 0;
        h.sequence_number = static_cast<std::uint16_t>(lane.rtp_seq0 + id);
        h.timestamp = static_cast<std::uint32_t>(
            binding_.rtp_ts_base + frame.capture_time_ms * profile_.sample_rate_hz / 1000);
        h.ssrc = binding_.rtp_ssrc;
        return serialize_rtp(h, frame.payload);
    }

    void on_capture(Lane& lane, const SimEvent& ev)
    {
        lane.wire[ev.packet_id] = sender_datagram(lane, ev.packet_id);
        lane.trace[ev.packet_id].send_us = ev.time_us;
        const Micros delay = delay_to_us(sample_link_delay(
            lane.ingress_link.base_ms, lane.ingress_link.jitter_span_ms, lane.ingress_rng));
        schedule({ev.time_us + delay, SimEventKind::LinkDeliver, ev.packet_id, lane.direction});
    }

    void on_gateway_arrival(Lane& lane, const SimEvent& ev)
    {
        Bytes datagram = std::move(lane.wire[ev.packet_id]);
        PacketTraceEvent& rec = lane.trace[ev.packet_id];
        rec.gateway_in_us = ev.time_us;
        rec.size_bytes_in = static_cast<std::uint32_t>(datagram.size());

        Queued item{ev.packet_id, {}};
        if (lane.direction == Direction::IaxToRsw)
            item.packet = parse_mini(datagram);
        else
            item.packet = parse_rtp(datagram);

        // Drop-oldest evicts the head, or the newcomer when capacity is 0.
        // The evicted packet keeps an empty gw_out / recv in the trace.
        lane.buffer.push(std::move(item));

        if (!lane.busy && !lane.buffer.empty()) {
            lane.busy = true;
            schedule({ev.time_us + processing_us_, SimEventKind::GatewayTranslate,
                      lane.buffer.queued().front().id, lane.direction});
        }
    }

    void on_translate(Lane& lane, const SimEvent& ev)
    {
        auto item = lane.buffer.pop();
        if (!item)
            throw std::logic_error("gateway service with an empty buffer");

        Bytes out;
        if (auto* mini = std::get_if<MiniPacket>(&item->packet))
            out = serialize(iax_to_rsw(*mini, binding_, profile_));
        else
            out = serialize(rsw_to_iax(std::get<RtpPacket>(item->packet), binding_, profile_));

        PacketTraceEvent& rec = lane.trace[item->id];
        rec.gateway_out_us = ev.time_us;
        rec.size_bytes_out = static_cast<std::uint32_t>(out.size());
        lane.wire[item->id] = std::move(out);

        const Micros delay = delay_to_us(sample_link_delay(
            lane.egress_link.base_ms, lane.egress_link.jitter_span_ms, lane.egress_rng));
        schedule({ev.time_us + delay, SimEventKind::Received, item->id, lane.direction});

        if (lane.buffer.empty()) {
            lane.busy = false;
        } else {
            schedule({ev.time_us + processing_us_, SimEventKind::GatewayTranslate,
                      lane.buffer.queued().front().id, lane.direction});
        }
    }

    void on_receive(Lane& lane, const SimEvent& ev)
    {
        const Bytes& datagram = lane.wire[ev.packet_id];
        const Bytes payload = lane.direction == Direction::IaxToRsw ? parse_rtp(datagram).payload
                                                                    : parse_mini(datagram).payload;
        if (payload != lane.frames[ev.packet_id].payload)
            throw std::logic_error("payload altered in transit");
        lane.trace[ev.packet_id].receive_us = ev.time_us;
        lane.wire[ev.packet_id].clear();
    }

    const ScenarioConfig& config_;
    const CodecProfile& profile_;
    SessionBinding binding_;
    Micros processing_us_;
    std::vector<Lane> lanes_;
    std::priority_queue<SimEvent, std::vector<SimEvent>, std::greater<>> queue_;
};

} // namespace

const char* to_string(ScenarioDirection d) noexcept
{
    switch (d) {
    case ScenarioDirection::IaxToRsw: return "iax_to_rsw";
    case ScenarioDirection::RswToIax: return "rsw_to_iax";
    case ScenarioDirection::Both: return "both";
    }
    return "both";
}

std::optional<ScenarioDirection> parse_scenario_direction(std::string_view text) noexcept
{
    if (text == "both")
        return ScenarioDirection::Both;
    if (auto d = parse_direction(text))
        return *d == Direction::IaxToRsw ? ScenarioDirection::IaxToRsw : ScenarioDirection::RswToIax;
    return std::nullopt;
}

void validate(const ScenarioConfig& c)
{
    auto bad = [](const std::string& what) { throw Error(Errc::InvalidConfig, what); };
    if (c.packet_count < 1)
        bad("packet_count must be >= 1");
    for (const LinkModel* link : {&c.iax_link, &c.rsw_link})
        if (!(link->base_ms >= 0.0) || !(link->jitter_span_ms >= 0.0) || !std::isfinite(link->base_ms)
            || !std::isfinite(link->jitter_span_ms))
            bad("link delays must be finite and >= 0");
    if (!(c.gateway_processing_delay_ms >= 0.0) || !std::isfinite(c.gateway_processing_delay_ms))
        bad("gateway processing delay must be finite and >= 0");
    if (c.iax_call_number == 0 || c.iax_call_number > kMaxCallNumber)
        bad("iax call number must be in 1..32767");
}

double sample_link_delay(double base_ms, double span_ms, Rng& rng)
{
    const double u = rng.next_unit();
    return span_ms == 0.0 ? base_ms : base_ms + span_ms * u;
}

ScenarioResult run_scenario_detailed(const ScenarioConfig& config, const CodecRegistry& codecs)
{
    validate(config);
    const CodecProfile& profile = codecs.lookup(config.codec);
    return Simulation(config, profile).run();
}

std::vector<PacketTraceEvent> run_scenario(const ScenarioConfig& config, const CodecRegistry& codecs)
{
    return run_scenario_detailed(config, codecs).trace;
}

std::vector<MetricsSummary> run_sweep(const ScenarioConfig& base_config,
                                      std::span<const std::uint32_t> packet_counts,
                                      const CodecRegistry& codecs)
{
    if (packet_counts.empty())
        throw Error(Errc::InvalidConfig, "sweep needs at least one packet count");

    std::vector<Direction> directions;
    if (base_config.direction != ScenarioDirection::RswToIax)
        directions.push_back(Direction::IaxToRsw);
    if (base_config.direction != ScenarioDirection::IaxToRsw)
        directions.push_back(Direction::RswToIax);

    std::vector<std::vector<MetricsSummary>> per_direction(directions.size());
    for (std::uint32_t count : packet_counts) {
        ScenarioConfig config = base_config;
        config.packet_count = count;
        const auto trace = run_scenario(config, codecs);
        for (std::size_t i = 0; i < directions.size(); ++i)
            per_direction[i].push_back(summarize(trace, directions[i]));
    }

    std::vector<MetricsSummary> out;
    for (auto& summaries : per_direction)
        for (auto& s : summaries)
            out.push_back(std::move(s));
    return out;
}

double delay_bound_ms(const ScenarioConfig& config, Direction)
{
    const auto worst = [](const LinkModel& l) { return l.base_ms + l.jitter_span_ms; };
    return worst(config.iax_link) + worst(config.rsw_link) + config.gateway_processing_delay_ms;
}

std::vector<std::string> describe(const ScenarioConfig& c)
{
    return {
        std::string("sim.direction = ") + to_string(c.direction),
        "sim.packets = " + std::to_string(c.packet_count),
        "sim.seed = " + std::to_string(c.seed),
        "sim.codec = " + c.codec,
        "sim.buffer_capacity = " + std::to_string(c.buffer_capacity),
        "sim.processing_ms = " + num(c.gateway_processing_delay_ms),
        "sim.call_number = " + std::to_string(c.iax_call_number),
        "link.iax.base_ms = " + num(c.iax_link.base_ms),
        "link.iax.span_ms = " + num(c.iax_link.jitter_span_ms),
        "link.rsw.base_ms = " + num(c.rsw_link.base_ms),
        "link.rsw.span_ms = " + num(c.rsw_link.jitter_span_ms),
        std::string("rng = ") + kRngName,
    };
}

} // namespace iaxrsw
