#include "iaxrsw/cli.hpp"

#include "iaxrsw/config.hpp"
#include "iaxrsw/error.hpp"
#include "iaxrsw/file_io.hpp"
#include "iaxrsw/metrics.hpp"
#include "iaxrsw/packet_codecs.hpp"
#include "iaxrsw/simnet.hpp"
#include "iaxrsw/udp_gateway.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <atomic>
#include <chrono>
#include <csignal>
#include <cstdio>
#include <cstdlib>
#include <ostream>
#include <thread>

namespace iaxrsw {

namespace {

std::atomic<bool> g_interrupted{false};

extern "C" void on_interrupt(int)
{
    g_interrupted.store(true);
}

struct CommonOptions {
    std::string config_path;
    std::vector<std::string> sets;
};

void add_common(CLI::App* cmd, CommonOptions& common)
{
    cmd->add_option("-c,--config", common.config_path,
                    std::string("Config file (default: $") + kConfigEnvVar + ")");
    cmd->add_option("--set", common.sets, "Override a config key, e.g. --set link.iax.span_ms=2")
        ->take_all();
}

Settings load(const CommonOptions& common, const std::vector<KeyValue>& flag_overrides)
{
    std::optional<std::filesystem::path> file;
    if (!common.config_path.empty())
        file = common.config_path;
    else if (const char* env = std::getenv(kConfigEnvVar); env && *env)
        file = env;

    std::vector<KeyValue> overrides;
    for (const auto& s : common.sets)
        overrides.push_back(parse_override(s));
    overrides.insert(overrides.end(), flag_overrides.begin(), flag_overrides.end());
    return load_settings(file, overrides);
}

std::filesystem::path summary_path_for(const std::filesystem::path& trace_path)
{
    std::filesystem::path p = trace_path;
    if (p.extension() == ".csv")
        p.replace_extension();
    p += ".summary.csv";
    return p;
}

bool all_pass(const std::vector<MetricsSummary>& summaries)
{
    return std::all_of(summaries.begin(), summaries.end(),
                       [](const auto& s) { return check_acceptance(s).pass; });
}

int cmd_sim(const Settings& settings, const std::string& out_path, const std::string& summary_path,
            std::ostream& out)
{
    const CodecRegistry codecs = make_registry(settings);
    const auto trace = run_scenario(settings.sim, codecs);

    std::vector<MetricsSummary> summaries;
    if (settings.sim.direction != ScenarioDirection::RswToIax)
        summaries.push_back(summarize(trace, Direction::IaxToRsw));
    if (settings.sim.direction != ScenarioDirection::IaxToRsw)
        summaries.push_back(summarize(trace, Direction::RswToIax));

    std::vector<std::string> preamble{"iaxrsw sim"};
    for (auto& line : describe(settings.sim))
        preamble.push_back(std::move(line));

    if (!out_path.empty()) {
        const std::string trace_text = trace_csv(trace, preamble);
        const std::string summary_text = summaries_csv(summaries, preamble);
        const std::filesystem::path summary_file =
            summary_path.empty() ? summary_path_for(out_path) : std::filesystem::path(summary_path);
        write_file_atomic(out_path, trace_text);
        write_file_atomic(summary_file, summary_text);
        out << "trace: " << out_path << "\nsummary: " << summary_file.string() << "\n";
    } else if (!summary_path.empty()) {
        write_csv(summaries, summary_path, preamble);
    }
    out << format_summary_table(summaries);
    return all_pass(summaries) ? kExitOk : kExitFailed;
}

int cmd_sweep(const Settings& settings, const std::string& out_path, std::ostream& out)
{
    const CodecRegistry codecs = make_registry(settings);
    const auto counts = parse_packet_range(settings.sweep_packets);
    const auto summaries = run_sweep(settings.sim, counts, codecs);

    if (!out_path.empty()) {
        std::vector<std::string> preamble{"iaxrsw sweep", "sweep.packets = " + settings.sweep_packets};
        for (auto& line : describe(settings.sim))
            if (line.rfind("sim.packets", 0) != 0)
                preamble.push_back(std::move(line));
        write_csv(summaries, out_path, preamble);
        out << "summary: " << out_path << "\n";
    }
    out << format_summary_table(summaries);
    return all_pass(summaries) ? kExitOk : kExitFailed;
}

std::string codec_row(const CodecProfile& p, char sep, bool aligned)
{
    std::string fps = "n/a", iax_bw = "n/a", rsw_bw = "n/a", payload_bw = "n/a";
    try {
        fps = std::to_string(frames_per_second(p));
        iax_bw = std::to_string(on_wire_bandwidth_bps(p, Side::Iax));
        rsw_bw = std::to_string(on_wire_bandwidth_bps(p, Side::Rsw));
        payload_bw = std::to_string(payload_bandwidth_bps(p));
    } catch (const Error&) {
    }
    const std::string cells[] = {p.name,
                                 std::to_string(p.frame_payload_bytes),
                                 fps,
                                 std::to_string(on_wire_bytes(p, Side::Iax)),
                                 std::to_string(on_wire_bytes(p, Side::Rsw)),
                                 iax_bw,
                                 rsw_bw,
                                 payload_bw};
    std::string row;
    char buf[64];
    for (std::size_t i = 0; i < std::size(cells); ++i) {
        if (aligned) {
            std::snprintf(buf, sizeof buf, i == 0 ? "%-8s" : " %10s", cells[i].c_str());
            row += buf;
        } else {
            if (i)
                row += sep;
            row += cells[i];
        }
    }
    return row + "\n";
}

int cmd_codec_info(const Settings& settings, const std::string& format, std::ostream& out)
{
    const CodecRegistry codecs = make_registry(settings);
    if (format == "text" || format == "both") {
        char buf[160];
        std::snprintf(buf, sizeof buf, "%-8s %10s %10s %10s %10s %10s %10s %10s\n", "codec",
                      "frame_B", "frames/s", "iax_B", "rsw_B", "iax_bps", "rsw_bps", "codec_bps");
        out << buf;
        for (const auto& [name, p] : codecs.profiles())
            out << codec_row(p, ' ', true);
    }
    if (format == "both")
        out << "\n";
    if (format == "csv" || format == "both") {
        out << "codec,frame_bytes,frames_per_second,iax_wire_bytes,rsw_wire_bytes,"
               "iax_bandwidth_bps,rsw_bandwidth_bps,payload_bandwidth_bps\n";
        for (const auto& [name, p] : codecs.profiles())
            out << codec_row(p, ',', false);
    }
    return kExitOk;
}

Bytes decode_hex(const std::vector<std::string>& chunks)
{
    std::string hex;
    for (const auto& c : chunks)
        for (char ch : c)
            if (ch != ' ' && ch != ':')
                hex += ch;
    if (hex.size() % 2 != 0)
        throw Error(Errc::InvalidConfig, "hex input has an odd number of digits");
    auto nibble = [](char ch) -> int {
        if (ch >= '0' && ch <= '9')
            return ch - '0';
        if (ch >= 'a' && ch <= 'f')
            return ch - 'a' + 10;
        if (ch >= 'A' && ch <= 'F')
            return ch - 'A' + 10;
        return -1;
    };
    Bytes out;
    for (std::size_t i = 0; i < hex.size(); i += 2) {
        const int hi = nibble(hex[i]);
        const int lo = nibble(hex[i + 1]);
        if (hi < 0 || lo < 0)
            throw Error(Errc::InvalidConfig, "not a hex digit in input");
        out.push_back(static_cast<std::uint8_t>(hi << 4 | lo));
    }
    return out;
}

void print_rtp(const RtpPacket& p, std::ostream& out)
{
    const RtpHeader& h = p.header;
    char ssrc[16];
    std::snprintf(ssrc, sizeof ssrc, "0x%08x", h.ssrc);
    out << "format=rtp\n"
        << "version=" << int{h.version} << "\n"
        << "padding=" << h.padding << "\n"
        << "extension=" << h.extension << "\n"
        << "csrc_count=" << int{h.csrc_count} << "\n"
        << "marker=" << h.marker << "\n"
        << "payload_type=" << int{h.payload_type} << "\n"
        << "sequence_number=" << h.sequence_number << "\n"
        << "timestamp=" << h.timestamp << "\n"
        << "ssrc=" << ssrc << "\n"
        << "payload_bytes=" << p.payload.size() << "\n";
}

void print_mini(const MiniPacket& p, std::ostream& out)
{
    out << "format=mini\n"
        << "source_call_number=" << p.header.source_call_number << "\n"
        << "timestamp_low16=" << p.header.timestamp_low16 << "\n"
        << "payload_bytes=" << p.payload.size() << "\n";
}

int cmd_parse(const std::string& format, const std::vector<std::string>& hex, std::ostream& out,
              std::ostream& err)
{
    const Bytes datagram = decode_hex(hex);
    try {
        if (format == "rtp") {
            print_rtp(parse_rtp(datagram), out);
        } else if (format == "mini") {
            print_mini(parse_mini(datagram), out);
        } else {
            const IaxFrameKind kind = classify_iax_datagram(datagram);
            if (kind == IaxFrameKind::Mini)
                print_mini(parse_mini(datagram), out);
            else if (!datagram.empty() && (datagram[0] >> 6) == kRtpVersion)
                print_rtp(parse_rtp(datagram), out);
            else if (kind == IaxFrameKind::Full)
                throw Error(Errc::NotMediaFrame, "IAX full frame (signaling), not decoded");
            else
                throw Error(Errc::TooShort, std::to_string(datagram.size()) + " bytes");
        }
    } catch (const Error& e) {
        err << "decode error: " << e.what() << "\n";
        return kExitFailed;
    }
    return kExitOk;
}

int cmd_relay(const Settings& settings, std::uint64_t duration_ms, std::ostream& out)
{
    const CodecRegistry codecs = make_registry(settings);
    RelayHandle relay = start_relay(settings.relay, codecs);
    out << "relay iax=" << to_string(relay.iax_local()) << " rsw=" << to_string(relay.rsw_local())
        << " -> iax_peer=" << to_string(settings.relay.iax_peer)
        << " rsw_peer=" << to_string(settings.relay.rsw_peer);
    char session[64];
    std::snprintf(session, sizeof session, " call=%u ssrc=0x%08x seq=%u",
                  unsigned{relay.binding().iax_call_number}, relay.binding().rtp_ssrc,
                  unsigned{relay.binding().next_rtp_seq});
    out << session << std::endl;

    g_interrupted.store(false);
    auto previous = std::signal(SIGINT, on_interrupt);
    std::signal(SIGTERM, on_interrupt);

    using clock = std::chrono::steady_clock;
    const auto started = clock::now();
    const auto interval = std::chrono::milliseconds(std::max<std::uint32_t>(settings.relay.stats_interval_ms, 1));
    auto next_report = started + interval;
    while (!g_interrupted.load()) {
        const auto now = clock::now();
        if (duration_ms && now - started >= std::chrono::milliseconds(duration_ms))
            break;
        if (settings.relay.stats_interval_ms && now >= next_report) {
            out << format_stats_line(relay.snapshot_stats()) << std::endl;
            next_report += interval;
        }
        std::this_thread::sleep_for(std::chrono::milliseconds(10));
    }
    const RelayStats final_stats = relay.stop();
    std::signal(SIGINT, previous);
    std::signal(SIGTERM, SIG_DFL);
    out << "final " << format_stats_line(final_stats) << std::endl;
    return kExitOk;
}

int exit_code_for(Errc code)
{
    switch (code) {
    case Errc::InvalidConfig:
    case Errc::UnknownCodec:
    case Errc::InvalidProfile:
    case Errc::NonIntegralRate:
        return kExitConfigError;
    case Errc::IoFailure:
        return kExitIoFailure;
    default:
        return kExitRuntimeError;
    }
}

} // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err)
{
    CLI::App app{"IAX <-> RSW media translation gateway: simulate, sweep, relay, inspect", "iaxrsw"};
    app.require_subcommand(1);

    CommonOptions common;
    std::vector<KeyValue> flag_overrides;
    auto flag = [&](const std::string& key) {
        return [&flag_overrides, key](const std::string& v) { flag_overrides.emplace_back(key, v); };
    };

    auto* sim = app.add_subcommand("sim", "Run one simulated call and write its trace");
    add_common(sim, common);
    std::string out_path, summary_path;
    sim->add_option_function<std::string>("--packets", flag("sim.packets"), "Packets per direction");
    sim->add_option_function<std::string>("--seed", flag("sim.seed"), "Simulation seed");
    sim->add_option_function<std::string>("--direction", flag("sim.direction"),
                                          "iax_to_rsw | rsw_to_iax | both");
    sim->add_option("-o,--out", out_path, "Trace CSV path");
    sim->add_option("--summary", summary_path, "Summary CSV path (default: <out>.summary.csv)");

    auto* sweep = app.add_subcommand("sweep", "Run a scenario per packet count and summarize");
    add_common(sweep, common);
    std::string sweep_out;
    sweep->add_option_function<std::string>("--packets", flag("sweep.packets"),
                                            "start:stop:step (default 10:100:10)");
    sweep->add_option_function<std::string>("--seed", flag("sim.seed"), "Simulation seed");
    sweep->add_option_function<std::string>("--direction", flag("sim.direction"),
                                            "iax_to_rsw | rsw_to_iax | both");
    sweep->add_option("-o,--out", sweep_out, "Summary CSV path");

    auto* relay = app.add_subcommand("relay", "Relay live UDP media between an IAX and an RSW peer");
    add_common(relay, common);
    std::uint64_t duration_ms = 0;
    relay->add_option_function<std::string>("--iax-listen", flag("relay.iax_listen"), "host:port");
    relay->add_option_function<std::string>("--rsw-listen", flag("relay.rsw_listen"), "host:port");
    relay->add_option_function<std::string>("--iax-peer", flag("relay.iax_peer"), "host:port");
    relay->add_option_function<std::string>("--rsw-peer", flag("relay.rsw_peer"), "host:port");
    relay->add_option_function<std::string>("--call", flag("relay.call_number"), "IAX call number");
    relay->add_option_function<std::string>("--seed", flag("relay.seed"), "Session seed (SSRC, sequence)");
    relay->add_option_function<std::string>("--stats-interval-ms", flag("relay.stats_interval_ms"),
                                            "Stats line period, 0 disables");
    relay->add_option("--duration-ms", duration_ms, "Stop after this long (0: until interrupted)");

    auto* codec_info = app.add_subcommand("codec-info", "Print the framing and bandwidth table");
    add_common(codec_info, common);
    std::string info_format = "both";
    codec_info->add_option("--format", info_format, "text | csv | both")
        ->check(CLI::IsMember({"text", "csv", "both"}));

    auto* parse = app.add_subcommand("parse", "Decode a hex datagram");
    std::string parse_format = "auto";
    std::vector<std::string> hex;
    parse->add_option("--format", parse_format, "rtp | mini | auto")
        ->check(CLI::IsMember({"rtp", "mini", "auto"}));
    parse->add_option("hex", hex, "Datagram bytes as hex (may be split across arguments)")->required();

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitConfigError;
    }

    try {
        if (parse->parsed())
            return cmd_parse(parse_format, hex, out, err);
        const Settings settings = load(common, flag_overrides);
        if (sim->parsed())
            return cmd_sim(settings, out_path, summary_path, out);
        if (sweep->parsed())
            return cmd_sweep(settings, sweep_out, out);
        if (relay->parsed())
            return cmd_relay(settings, duration_ms, out);
        if (codec_info->parsed())
            return cmd_codec_info(settings, info_format, out);
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return exit_code_for(e.code());
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kExitRuntimeError;
    }
    return kExitConfigError;
}

} // namespace iaxrsw
