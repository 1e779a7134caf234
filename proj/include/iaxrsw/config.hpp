#pragma once

// Flat `key = value` configuration with `[section]` headers.
//
//   [sim]          direction packets seed codec buffer_capacity processing_ms call_number
//   [link.iax]     base_ms span_ms
//   [link.rsw]     base_ms span_ms
//   [sweep]        packets            (start:stop:step)
//   [relay]        iax_listen rsw_listen iax_peer rsw_peer codec call_number seed
//                  stats_interval_ms buffer_capacity
//   [codec.NAME]   bitrate_bps frame_interval_ms payload_bytes payload_type sample_rate_hz
//
// Precedence: built-in defaults < file < command-line overrides.

#include "iaxrsw/framing.hpp"
#include "iaxrsw/simnet.hpp"
#include "iaxrsw/udp_gateway.hpp"

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace iaxrsw {

inline constexpr const char* kConfigEnvVar = "IAXRSW_CONFIG";

struct Settings {
    ScenarioConfig sim;
    std::string sweep_packets = "10:100:10";
    RelayConfig relay;
    std::map<std::string, CodecProfile> codecs; // declared in config, on top of GSM
};

using KeyValue = std::pair<std::string, std::string>;

/// Section-qualified pairs in file order. Throws Error{InvalidConfig} with the
/// offending line number on syntax errors.
std::vector<KeyValue> parse_config_text(std::string_view text);

/// "sim.packets=100" -> {"sim.packets", "100"}. Throws Error{InvalidConfig}.
KeyValue parse_override(std::string_view text);

/// Throws Error{InvalidConfig} for unknown keys or unparseable values.
void apply_setting(Settings& settings, std::string_view key, std::string_view value);

/// Defaults, then `file` (if any), then `overrides`, then codec validation.
/// Throws Error{InvalidConfig | IoFailure}.
Settings load_settings(const std::optional<std::filesystem::path>& file,
                       const std::vector<KeyValue>& overrides);

CodecRegistry make_registry(const Settings& settings);

/// "start:stop:step" (stop inclusive), "start:stop" (step 1) or "N".
/// Throws Error{InvalidConfig}.
std::vector<std::uint32_t> parse_packet_range(std::string_view text);

} // namespace iaxrsw
