#include "iaxrsw/config.hpp"

#include "iaxrsw/error.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

namespace iaxrsw {

namespace {

std::string_view trim(std::string_view s)
{
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos)
        return {};
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

[[noreturn]] void bad_value(std::string_view key, std::string_view value, std::string_view why)
{
    throw Error(Errc::InvalidConfig,
                std::string(key) + " = '" + std::string(value) + "': " + std::string(why));
}

template <class T>
T parse_uint(std::string_view key, std::string_view value)
{
    std::uint64_t v = 0;
    const auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), v);
    if (ec != std::errc{} || ptr != value.data() + value.size())
        bad_value(key, value, "expected an unsigned integer");
    if (v > std::numeric_limits<T>::max())
        bad_value(key, value, "out of range");
    return static_cast<T>(v);
}

double parse_real(std::string_view key, std::string_view value)
{
    const std::string text(value);
    std::size_t used = 0;
    double v = 0.0;
    try {
        v = std::stod(text, &used);
    } catch (const std::exception&) {
        bad_value(key, value, "expected a number");
    }
    if (used != text.size() || !std::isfinite(v))
        bad_value(key, value, "expected a number");
    return v;
}

void apply_link(LinkModel& link, std::string_view field, std::string_view key, std::string_view value)
{
    if (field == "base_ms")
        link.base_ms = parse_real(key, value);
    else if (field == "span_ms")
        link.jitter_span_ms = parse_real(key, value);
    else
        throw Error(Errc::InvalidConfig, "unknown key " + std::string(key));
}

void apply_codec(Settings& s, std::string_view name, std::string_view field, std::string_view key,
                 std::string_view value)
{
    CodecProfile& p = s.codecs[std::string(name)];
    p.name = std::string(name);
    if (field == "bitrate_bps")
        p.bitrate_bps = parse_uint<std::uint32_t>(key, value);
    else if (field == "frame_interval_ms")
        p.frame_interval_ms = parse_uint<std::uint32_t>(key, value);
    else if (field == "payload_bytes")
        p.frame_payload_bytes = parse_uint<std::uint32_t>(key, value);
    else if (field == "payload_type")
        p.rtp_payload_type = parse_uint<std::uint8_t>(key, value);
    else if (field == "sample_rate_hz")
        p.sample_rate_hz = parse_uint<std::uint32_t>(key, value);
    else
        throw Error(Errc::InvalidConfig, "unknown key " + std::string(key));
}

} // namespace

std::vector<KeyValue> parse_config_text(std::string_view text)
{
    std::vector<KeyValue> out;
    std::string section;
    std::size_t line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const auto end = text.find('\n', pos);
        std::string_view line = text.substr(pos, end == std::string_view::npos ? text.npos : end - pos);
        pos = end == std::string_view::npos ? text.size() + 1 : end + 1;
        ++line_no;

        if (const auto hash = line.find_first_of("#;"); hash != std::string_view::npos)
            line = line.substr(0, hash);
        line = trim(line);
        if (line.empty())
            continue;

        const auto where = [&] { return "line " + std::to_string(line_no) + ": "; };
        if (line.front() == '[') {
            if (line.back() != ']' || line.size() < 3)
                throw Error(Errc::InvalidConfig, where() + "malformed section header");
            section = std::string(trim(line.substr(1, line.size() - 2)));
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string_view::npos)
            throw Error(Errc::InvalidConfig, where() + "expected key = value");
        const std::string_view key = trim(line.substr(0, eq));
        const std::string_view value = trim(line.substr(eq + 1));
        if (key.empty())
            throw Error(Errc::InvalidConfig, where() + "empty key");
        out.emplace_back(section.empty() ? std::string(key) : section + "." + std::string(key),
                         std::string(value));
    }
    return out;
}

KeyValue parse_override(std::string_view text)
{
    const auto eq = text.find('=');
    if (eq == std::string_view::npos || trim(text.substr(0, eq)).empty())
        throw Error(Errc::InvalidConfig, "override must be key=value, got '" + std::string(text) + "'");
    return {std::string(trim(text.substr(0, eq))), std::string(trim(text.substr(eq + 1)))};
}

void apply_setting(Settings& s, std::string_view key, std::string_view value)
{
    const auto dot = key.find('.');
    const std::string_view section = key.substr(0, dot);
    const std::string_view rest = dot == std::string_view::npos ? std::string_view{} : key.substr(dot + 1);
    const auto unknown = [&] { throw Error(Errc::InvalidConfig, "unknown key " + std::string(key)); };

    if (section == "sim") {
        ScenarioConfig& c = s.sim;
        if (rest == "direction") {
            auto d = parse_scenario_direction(value);
            if (!d)
                bad_value(key, value, "expected iax_to_rsw, rsw_to_iax or both");
            c.direction = *d;
        } else if (rest == "packets") {
            c.packet_count = parse_uint<std::uint32_t>(key, value);
        } else if (rest == "seed") {
            c.seed = parse_uint<std::uint64_t>(key, value);
        } else if (rest == "codec") {
            c.codec = std::string(value);
        } else if (rest == "buffer_capacity") {
            c.buffer_capacity = parse_uint<std::size_t>(key, value);
        } else if (rest == "processing_ms") {
            c.gateway_processing_delay_ms = parse_real(key, value);
        } else if (rest == "call_number") {
            c.iax_call_number = parse_uint<std::uint16_t>(key, value);
        } else {
            unknown();
        }
    } else if (section == "link") {
        const auto dot2 = rest.find('.');
        const std::string_view side = rest.substr(0, dot2);
        const std::string_view field = dot2 == std::string_view::npos ? std::string_view{} : rest.substr(dot2 + 1);
        if (side == "iax")
            apply_link(s.sim.iax_link, field, key, value);
        else if (side == "rsw")
            apply_link(s.sim.rsw_link, field, key, value);
        else
            unknown();
    } else if (section == "sweep") {
        if (rest != "packets")
            unknown();
        parse_packet_range(value);
        s.sweep_packets = std::string(value);
    } else if (section == "relay") {
        RelayConfig& r = s.relay;
        if (rest == "iax_listen")
            r.iax_listen = parse_endpoint(value);
        else if (rest == "rsw_listen")
            r.rsw_listen = parse_endpoint(value);
        else if (rest == "iax_peer")
            r.iax_peer = parse_endpoint(value);
        else if (rest == "rsw_peer")
            r.rsw_peer = parse_endpoint(value);
        else if (rest == "codec")
            r.codec = std::string(value);
        else if (rest == "call_number")
            r.iax_call_number = parse_uint<std::uint16_t>(key, value);
        else if (rest == "seed")
            r.seed = parse_uint<std::uint64_t>(key, value);
        else if (rest == "stats_interval_ms")
            r.stats_interval_ms = parse_uint<std::uint32_t>(key, value);
        else if (rest == "buffer_capacity")
            r.buffer_capacity = parse_uint<std::size_t>(key, value);
        else
            unknown();
    } else if (section == "codec") {
        const auto dot2 = rest.rfind('.');
        if (dot2 == std::string_view::npos || dot2 == 0)
            unknown();
        apply_codec(s, rest.substr(0, dot2), rest.substr(dot2 + 1), key, value);
    } else {
        unknown();
    }
}

Settings load_settings(const std::optional<std::filesystem::path>& file,
                       const std::vector<KeyValue>& overrides)
{
    Settings s;
    if (file) {
        std::ifstream in(*file);
        if (!in)
            throw Error(Errc::IoFailure, "cannot read config " + file->string());
        std::stringstream text;
        text << in.rdbuf();
        for (const auto& [k, v] : parse_config_text(text.str()))
            apply_setting(s, k, v);
    }
    for (const auto& [k, v] : overrides)
        apply_setting(s, k, v);
    for (const auto& [name, profile] : s.codecs) {
        try {
            validate_profile(profile);
        } catch (const Error& e) {
            throw Error(Errc::InvalidConfig, e.what());
        }
    }
    return s;
}

CodecRegistry make_registry(const Settings& settings)
{
    CodecRegistry registry;
    for (const auto& [name, profile] : settings.codecs)
        registry.add(profile);
    return registry;
}

std::vector<std::uint32_t> parse_packet_range(std::string_view text)
{
    std::vector<std::uint32_t> parts;
    std::size_t pos = 0;
    while (true) {
        const auto colon = text.find(':', pos);
        const std::string_view part = text.substr(pos, colon == std::string_view::npos ? text.npos : colon - pos);
        parts.push_back(parse_uint<std::uint32_t>("packets", part));
        if (colon == std::string_view::npos)
            break;
        pos = colon + 1;
    }
    if (parts.size() > 3)
        bad_value("packets", text, "expected start:stop:step");

    const std::uint32_t start = parts[0];
    const std::uint32_t stop = parts.size() >= 2 ? parts[1] : start;
    const std::uint32_t step = parts.size() == 3 ? parts[2] : 1;
    if (start < 1 || stop < start || step < 1)
        bad_value("packets", text, "need 1 <= start <= stop and step >= 1");

    std::vector<std::uint32_t> counts;
    for (std::uint64_t n = start; n <= stop; n += step)
        counts.push_back(static_cast<std::uint32_t>(n));
    return counts;
}

} // namespace iaxrsw
