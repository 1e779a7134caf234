#pragma once

// Packet delay and jitter over simulator traces, plus the VoIP quality gates
// (end-to-end delay < 150 ms, jitter < 30 ms).

#include "iaxrsw/trace.hpp"

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

namespace iaxrsw {

inline constexpr double kDelayThresholdMs = 150.0;
inline constexpr double kJitterThresholdMs = 30.0;

struct MetricsSummary {
    Direction direction = Direction::IaxToRsw;
    std::uint32_t packet_count = 0; // sent
    std::vector<double> delays_ms;  // delivered packets, send order
    double delay_min_ms = 0.0;
    double delay_mean_ms = 0.0;
    double delay_max_ms = 0.0;
    std::vector<double> jitter_inst_ms;
    double jitter_inst_max_ms = 0.0;
    double jitter_smoothed_ms = 0.0;
    std::uint64_t drops = 0;
    double delay_threshold_ms = kDelayThresholdMs;
    double jitter_threshold_ms = kJitterThresholdMs;
};

/// receive - send for every delivered packet, ordered by send time.
/// Throws Error{EmptyTrace | CausalityViolation}.
std::vector<double> packet_delays(std::span<const PacketTraceEvent> trace);

/// |d[i+1] - d[i]|; one shorter than the input (empty for 0 or 1 delays).
std::vector<double> jitter_instantaneous(std::span<const double> delays_ms);

/// Final value of J <- J + (|D| - J) / 16 folded over successive delay
/// differences D, starting from J = 0.
double jitter_smoothed(std::span<const double> delays_ms);

/// Summary of the events in `trace` travelling in `direction`.
/// Throws Error{EmptyTrace} if there are none.
MetricsSummary summarize(std::span<const PacketTraceEvent> trace, Direction direction);

/// Builds a summary straight from a delay series (no drops).
MetricsSummary summarize_delays(Direction direction, std::vector<double> delays_ms);

struct AcceptanceCheck {
    std::string name;
    double value = 0.0;
    double threshold = 0.0;
    double margin = 0.0; // threshold - value; positive means headroom
    bool pass = false;
};

struct PassFailReport {
    std::vector<AcceptanceCheck> checks;
    bool pass = false;
};

/// Passes iff delay_max, jitter_inst_max and jitter_smoothed are all strictly
/// below their thresholds.
PassFailReport check_acceptance(const MetricsSummary& summary);

inline constexpr const char* kSummaryCsvHeader =
    "direction,packets,delay_min,delay_mean,delay_max,jitter_inst_max,jitter_smoothed,drops,pass";

/// Rows sorted by (direction, packet count); reals to 3 decimals.
std::string summaries_csv(std::span<const MetricsSummary> summaries,
                          std::span<const std::string> preamble = {});

/// summaries_csv written atomically. Throws Error{IoFailure}.
void write_csv(std::span<const MetricsSummary> summaries, const std::filesystem::path& destination,
               std::span<const std::string> preamble = {});

/// Aligned plain-text table for terminals.
std::string format_summary_table(std::span<const MetricsSummary> summaries);

} // namespace iaxrsw
