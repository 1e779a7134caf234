#include "iaxrsw/trace.hpp"

#include <cstdio>

namespace iaxrsw {

const char* to_string(Direction d) noexcept
{
    return d == Direction::IaxToRsw ? "iax_to_rsw" : "rsw_to_iax";
}

std::optional<Direction> parse_direction(std::string_view text) noexcept
{
    if (text == "iax_to_rsw" || text == "iax-to-rsw")
        return Direction::IaxToRsw;
    if (text == "rsw_to_iax" || text == "rsw-to-iax")
        return Direction::RswToIax;
    return std::nullopt;
}

std::string format_ms(Micros t)
{
    char buf[32];
    const char* sign = t < 0 ? "-" : "";
    const std::uint64_t mag = t < 0 ? static_cast<std::uint64_t>(-t) : static_cast<std::uint64_t>(t);
    std::snprintf(buf, sizeof buf, "%s%llu.%03llu", sign,
                  static_cast<unsigned long long>(mag / 1000),
                  static_cast<unsigned long long>(mag % 1000));
    return buf;
}

std::string trace_csv(std::span<const PacketTraceEvent> trace, std::span<const std::string> preamble)
{
    std::string out;
    for (const auto& line : preamble) {
        out += "# ";
        out += line;
        out += '\n';
    }
    out += kTraceCsvHeader;
    out += '\n';
    for (const auto& e : trace) {
        out += std::to_string(e.packet_id);
        out += ',';
        out += to_string(e.direction);
        out += ',';
        out += format_ms(e.send_us);
        out += ',';
        out += format_ms(e.gateway_in_us);
        out += ',';
        if (e.gateway_out_us)
            out += format_ms(*e.gateway_out_us);
        out += ',';
        if (e.receive_us)
            out += format_ms(*e.receive_us);
        out += ',';
        out += std::to_string(e.size_bytes_in);
        out += ',';
        out += std::to_string(e.size_bytes_out);
        out += '\n';
    }
    return out;
}

} // namespace iaxrsw
