#include "iaxrsw/metrics.hpp"

#include "iaxrsw/error.hpp"
#include "iaxrsw/file_io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>

namespace iaxrsw {

namespace {

std::string fixed3(double v)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.3f", v);
    return buf;
}

void check_causal(const PacketTraceEvent& e)
{
    bool ok = e.send_us <= e.gateway_in_us;
    if (e.gateway_out_us)
        ok = ok && e.gateway_in_us <= *e.gateway_out_us;
    if (e.receive_us)
        ok = ok && e.gateway_out_us && *e.gateway_out_us <= *e.receive_us;
    if (!ok)
        throw Error(Errc::CausalityViolation,
                    std::string("packet ") + std::to_string(e.packet_id) + " " + to_string(e.direction));
}

AcceptanceCheck make_check(std::string name, double value, double threshold)
{
    return AcceptanceCheck{std::move(name), value, threshold, threshold - value, value < threshold};
}

} // namespace

std::vector<double> packet_delays(std::span<const PacketTraceEvent> trace)
{
    if (trace.empty())
        throw Error(Errc::EmptyTrace);

    std::vector<const PacketTraceEvent*> delivered;
    for (const auto& e : trace) {
        check_causal(e);
        if (e.delivered())
            delivered.push_back(&e);
    }
    std::stable_sort(delivered.begin(), delivered.end(),
                     [](const auto* a, const auto* b) { return a->send_us < b->send_us; });

    std::vector<double> delays;
    delays.reserve(delivered.size());
    for (const auto* e : delivered)
        delays.push_back(to_ms(*e->receive_us - e->send_us));
    return delays;
}

std::vector<double> jitter_instantaneous(std::span<const double> delays_ms)
{
    std::vector<double> out;
    if (delays_ms.size() < 2)
        return out;
    out.reserve(delays_ms.size() - 1);
    for (std::size_t i = 1; i < delays_ms.size(); ++i)
        out.push_back(std::abs(delays_ms[i] - delays_ms[i - 1]));
    return out;
}

double jitter_smoothed(std::span<const double> delays_ms)
{
    double j = 0.0;
    for (std::size_t i = 1; i < delays_ms.size(); ++i)
        j += (std::abs(delays_ms[i] - delays_ms[i - 1]) - j) / 16.0;
    return j;
}

MetricsSummary summarize_delays(Direction direction, std::vector<double> delays_ms)
{
    MetricsSummary s;
    s.direction = direction;
    s.packet_count = static_cast<std::uint32_t>(delays_ms.size());
    if (!delays_ms.empty()) {
        const auto [lo, hi] = std::minmax_element(delays_ms.begin(), delays_ms.end());
        s.delay_min_ms = *lo;
        s.delay_max_ms = *hi;
        s.delay_mean_ms = std::accumulate(delays_ms.begin(), delays_ms.end(), 0.0)
                        / static_cast<double>(delays_ms.size());
    }
    s.jitter_inst_ms = jitter_instantaneous(delays_ms);
    if (!s.jitter_inst_ms.empty())
        s.jitter_inst_max_ms = *std::max_element(s.jitter_inst_ms.begin(), s.jitter_inst_ms.end());
    s.jitter_smoothed_ms = jitter_smoothed(delays_ms);
    s.delays_ms = std::move(delays_ms);
    return s;
}

MetricsSummary summarize(std::span<const PacketTraceEvent> trace, Direction direction)
{
    std::vector<PacketTraceEvent> mine;
    for (const auto& e : trace)
        if (e.direction == direction)
            mine.push_back(e);
    if (mine.empty())
        throw Error(Errc::EmptyTrace, std::string("no packets for ") + to_string(direction));

    MetricsSummary s = summarize_delays(direction, packet_delays(mine));
    s.packet_count = static_cast<std::uint32_t>(mine.size());
    s.drops = static_cast<std::uint64_t>(
        std::count_if(mine.begin(), mine.end(), [](const auto& e) { return !e.delivered(); }));
    return s;
}

PassFailReport check_acceptance(const MetricsSummary& s)
{
    PassFailReport report;
    report.checks.push_back(make_check("delay_max", s.delay_max_ms, s.delay_threshold_ms));
    report.checks.push_back(make_check("jitter_inst_max", s.jitter_inst_max_ms, s.jitter_threshold_ms));
    report.checks.push_back(make_check("jitter_smoothed", s.jitter_smoothed_ms, s.jitter_threshold_ms));
    report.pass = std::all_of(report.checks.begin(), report.checks.end(),
                              [](const auto& c) { return c.pass; });
    return report;
}

std::string summaries_csv(std::span<const MetricsSummary> summaries,
                          std::span<const std::string> preamble)
{
    std::vector<const MetricsSummary*> rows;
    for (const auto& s : summaries)
        rows.push_back(&s);
    std::stable_sort(rows.begin(), rows.end(), [](const auto* a, const auto* b) {
        if (a->direction != b->direction)
            return a->direction < b->direction;
        return a->packet_count < b->packet_count;
    });

    std::string out;
    for (const auto& line : preamble)
        out += "# " + line + "\n";
    out += kSummaryCsvHeader;
    out += '\n';
    for (const auto* s : rows) {
        out += to_string(s->direction);
        out += ',' + std::to_string(s->packet_count);
        out += ',' + fixed3(s->delay_min_ms);
        out += ',' + fixed3(s->delay_mean_ms);
        out += ',' + fixed3(s->delay_max_ms);
        out += ',' + fixed3(s->jitter_inst_max_ms);
        out += ',' + fixed3(s->jitter_smoothed_ms);
        out += ',' + std::to_string(s->drops);
        out += check_acceptance(*s).pass ? ",true\n" : ",false\n";
    }
    return out;
}

void write_csv(std::span<const MetricsSummary> summaries, const std::filesystem::path& destination,
               std::span<const std::string> preamble)
{
    write_file_atomic(destination, summaries_csv(summaries, preamble));
}

std::string format_summary_table(std::span<const MetricsSummary> summaries)
{
    std::string out;
    char line[256];
    std::snprintf(line, sizeof line, "%-11s %7s %9s %9s %9s %9s %9s %6s %5s\n", "direction",
                  "packets", "dmin_ms", "dmean_ms", "dmax_ms", "jmax_ms", "jsm_ms", "drops",
                  "pass");
    out += line;
    for (const auto& s : summaries) {
        std::snprintf(line, sizeof line, "%-11s %7u %9.3f %9.3f %9.3f %9.3f %9.3f %6llu %5s\n",
                      to_string(s.direction), s.packet_count, s.delay_min_ms, s.delay_mean_ms,
                      s.delay_max_ms, s.jitter_inst_max_ms, s.jitter_smoothed_ms,
                      static_cast<unsigned long long>(s.drops),
                      check_acceptance(s).pass ? "yes" : "no");
        out += line;
    }
    return out;
}

} // namespace iaxrsw
