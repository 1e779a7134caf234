#pragma once

// Discrete-event model of the one-to-one call: an IAX client and an RSW
// client talking through the gateway. Each direction is
//
//   sender --link--> gateway buffer --(processing)--> translate --link--> receiver
//
// Virtual time is integer microseconds; a run is a pure function of its
// ScenarioConfig.

#include "iaxrsw/framing.hpp"
#include "iaxrsw/metrics.hpp"
#include "iaxrsw/rng.hpp"
#include "iaxrsw/trace.hpp"
#include "iaxrsw/translator.hpp"

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace iaxrsw {

struct LinkModel {
    double base_ms = 1.0;
    double jitter_span_ms = 5.0;

    friend bool operator==(const LinkModel&, const LinkModel&) = default;
};

enum class ScenarioDirection { IaxToRsw, RswToIax, Both };

const char* to_string(ScenarioDirection d) noexcept;
std::optional<ScenarioDirection> parse_scenario_direction(std::string_view text) noexcept;

// Default link and processing values are a calibration that keeps every
// delay inside 2 * (1 + 5) + 0.5 = 12.5 ms.
struct ScenarioConfig {
    ScenarioDirection direction = ScenarioDirection::Both;
    std::uint32_t packet_count = 100;
    LinkModel iax_link;
    LinkModel rsw_link;
    double gateway_processing_delay_ms = 0.5;
    std::size_t buffer_capacity = kDefaultBufferCapacity;
    std::string codec = "gsm";
    std::uint16_t iax_call_number = 1;
    std::uint64_t seed = 1;

    friend bool operator==(const ScenarioConfig&, const ScenarioConfig&) = default;
};

/// Throws Error{InvalidConfig}.
void validate(const ScenarioConfig& config);

/// base + uniform[0, span) drawn from `rng`.
double sample_link_delay(double base_ms, double span_ms, Rng& rng);

enum class SimEventKind { FrameCaptured, LinkDeliver, GatewayTranslate, Received };

/// Queue key. Events run in (time, kind, packet_id, direction) order.
struct SimEvent {
    Micros time_us = 0;
    SimEventKind kind = SimEventKind::FrameCaptured;
    std::uint32_t packet_id = 0;
    Direction direction = Direction::IaxToRsw;

    friend auto operator<=>(const SimEvent&, const SimEvent&) = default;
};

struct ScenarioResult {
    std::vector<PacketTraceEvent> trace;  // direction, then packet_id
    std::vector<SimEvent> executed;       // every event in execution order
};

/// Runs the scenario and returns one trace record per sent packet.
/// Throws Error{UnknownCodec | InvalidConfig}.
std::vector<PacketTraceEvent> run_scenario(const ScenarioConfig& config,
                                           const CodecRegistry& codecs = CodecRegistry{});

/// run_scenario plus the executed event log, for ordering checks.
ScenarioResult run_scenario_detailed(const ScenarioConfig& config,
                                     const CodecRegistry& codecs = CodecRegistry{});

/// One summary per (direction, count), ordered by direction then by position
/// in `packet_counts`. Throws Error{InvalidConfig} for an empty list.
std::vector<MetricsSummary> run_sweep(const ScenarioConfig& base_config,
                                      std::span<const std::uint32_t> packet_counts,
                                      const CodecRegistry& codecs = CodecRegistry{});

/// Worst-case one-way delay excluding queueing: both links at base + span
/// plus gateway processing.
double delay_bound_ms(const ScenarioConfig& config, Direction direction);

/// `key = value` lines describing the effective config, for output headers.
std::vector<std::string> describe(const ScenarioConfig& config);

} // namespace iaxrsw
