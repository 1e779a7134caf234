#include "iaxrsw/metrics.hpp"

#include "gtest_support.hpp"

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

namespace iaxrsw {
namespace {

using test::expect_errc;

PacketTraceEvent delivered(std::uint32_t id, Micros send, Micros recv)
{
    PacketTraceEvent e;
    e.packet_id = id;
    e.send_us = send;
    e.gateway_in_us = send;
    e.gateway_out_us = recv;
    e.receive_us = recv;
    return e;
}

// Hand-rolled recursion J <- J + (|D| - J) / 16, independent of the library.
double hand_recursion(const std::vector<double>& d)
{
    double j = 0;
    for (std::size_t i = 1; i < d.size(); ++i) {
        const double D = d[i] > d[i - 1] ? d[i] - d[i - 1] : d[i - 1] - d[i];
        j = j + (D - j) / 16.0;
    }
    return j;
}

TEST(PacketDelays, Basics)
{
    const std::vector<PacketTraceEvent> one{delivered(0, 0, 7500)};
    EXPECT_EQ(packet_delays(one), std::vector<double>{7.5});

    const std::vector<PacketTraceEvent> zero{delivered(0, 0, 0), delivered(1, 20000, 20000)};
    EXPECT_EQ(packet_delays(zero), (std::vector<double>{0.0, 0.0}));

    expect_errc(Errc::EmptyTrace, [] { packet_delays({}); });

    PacketTraceEvent backwards = delivered(0, 100, 100);
    backwards.receive_us = 50;
    expect_errc(Errc::CausalityViolation, [&] { packet_delays(std::vector{backwards}); });
}

TEST(PacketDelays, SendOrderAndDropsSkipped)
{
    PacketTraceEvent dropped;
    dropped.packet_id = 1;
    dropped.send_us = 20000;
    dropped.gateway_in_us = 21000;
    const std::vector<PacketTraceEvent> trace{delivered(2, 40000, 43000), dropped,
                                              delivered(0, 0, 5000)};
    EXPECT_EQ(packet_delays(trace), (std::vector<double>{5.0, 3.0}));
}

TEST(Jitter, InstantaneousExamples)
{
    EXPECT_EQ(jitter_instantaneous(std::vector{5.0, 5.0, 5.0}), (std::vector{0.0, 0.0}));
    EXPECT_EQ(jitter_instantaneous(std::vector{5.0, 9.0, 6.0}), (std::vector{4.0, 3.0}));
    EXPECT_TRUE(jitter_instantaneous(std::vector{5.0}).empty());
}

TEST(Jitter, SmoothedExamples)
{
    EXPECT_EQ(jitter_smoothed(std::vector{4.0, 4.0, 4.0, 4.0}), 0.0);
    EXPECT_DOUBLE_EQ(jitter_smoothed(std::vector{0.0, 16.0}), 1.0);
    EXPECT_DOUBLE_EQ(jitter_smoothed(std::vector{0.0, 16.0, 16.0}), 0.9375);
}

TEST(JitterProperty, ShiftInvarianceAndBound)
{
    std::mt19937_64 gen(17);
    std::uniform_real_distribution<double> delay(0.0, 50.0);
    for (int trial = 0; trial < 500; ++trial) {
        std::vector<double> d(1 + gen() % 60);
        for (auto& x : d)
            x = std::round(delay(gen) * 1000.0) / 1000.0;
        const double c = static_cast<double>(gen() % 100);
        std::vector<double> shifted = d;
        for (auto& x : shifted)
            x += c;

        const auto a = jitter_instantaneous(d);
        const auto b = jitter_instantaneous(shifted);
        ASSERT_EQ(a.size(), b.size());
        for (std::size_t i = 0; i < a.size(); ++i)
            ASSERT_NEAR(a[i], b[i], 1e-9);
        ASSERT_NEAR(jitter_smoothed(d), jitter_smoothed(shifted), 1e-9);
        ASSERT_NEAR(jitter_smoothed(d), hand_recursion(d), 1e-12);

        const double max_inst = a.empty() ? 0.0 : *std::max_element(a.begin(), a.end());
        ASSERT_LE(jitter_smoothed(d), max_inst + 1e-12);
    }
}

TEST(Summarize, FieldsAndInvariants)
{
    std::vector<PacketTraceEvent> trace{delivered(0, 0, 5000), delivered(1, 20000, 29000),
                                        delivered(2, 40000, 46000)};
    PacketTraceEvent other = delivered(0, 0, 1000);
    other.direction = Direction::RswToIax;
    trace.push_back(other);

    const MetricsSummary s = summarize(trace, Direction::IaxToRsw);
    EXPECT_EQ(s.packet_count, 3u);
    EXPECT_EQ(s.delays_ms, (std::vector{5.0, 9.0, 6.0}));
    EXPECT_EQ(s.delay_min_ms, 5.0);
    EXPECT_EQ(s.delay_max_ms, 9.0);
    EXPECT_NEAR(s.delay_mean_ms, 20.0 / 3.0, 1e-12);
    EXPECT_EQ(s.jitter_inst_ms, (std::vector{4.0, 3.0}));
    EXPECT_EQ(s.jitter_inst_max_ms, 4.0);
    EXPECT_EQ(s.drops, 0u);
    EXPECT_EQ(s.delay_threshold_ms, 150.0);
    EXPECT_EQ(s.jitter_threshold_ms, 30.0);

    expect_errc(Errc::EmptyTrace, [&] {
        summarize(std::vector{delivered(0, 0, 1)}, Direction::RswToIax);
    });
}

MetricsSummary with(double delay_max, double jitter)
{
    MetricsSummary s;
    s.delay_max_ms = delay_max;
    s.jitter_inst_max_ms = jitter;
    s.jitter_smoothed_ms = jitter;
    return s;
}

TEST(CheckAcceptance, Thresholds)
{
    EXPECT_TRUE(check_acceptance(with(15.0, 4.3)).pass);
    EXPECT_FALSE(check_acceptance(with(150.0, 0.0)).pass);
    EXPECT_TRUE(check_acceptance(with(0.0, 0.0)).pass);
    EXPECT_FALSE(check_acceptance(with(10.0, 30.0)).pass);

    const auto report = check_acceptance(with(15.0, 4.3));
    ASSERT_EQ(report.checks.size(), 3u);
    EXPECT_DOUBLE_EQ(report.checks[0].margin, 135.0);
    EXPECT_DOUBLE_EQ(report.checks[1].margin, 25.7);
}

TEST(CheckAcceptanceProperty, Monotone)
{
    std::mt19937_64 gen(23);
    std::uniform_real_distribution<double> v(0.0, 200.0);
    std::uniform_real_distribution<double> shrink(0.0, 1.0);
    for (int i = 0; i < 2000; ++i) {
        MetricsSummary s;
        s.delay_max_ms = v(gen);
        s.jitter_inst_max_ms = v(gen) / 4;
        s.jitter_smoothed_ms = v(gen) / 4;
        if (!check_acceptance(s).pass)
            continue;
        MetricsSummary t = s;
        t.delay_max_ms *= shrink(gen);
        t.jitter_inst_max_ms *= shrink(gen);
        t.jitter_smoothed_ms *= shrink(gen);
        ASSERT_TRUE(check_acceptance(t).pass);
    }
}

TEST(SummaryCsv, ShapeAndOrdering)
{
    EXPECT_EQ(summaries_csv({}), std::string(kSummaryCsvHeader) + "\n");

    MetricsSummary a = summarize_delays(Direction::RswToIax, {1.0, 2.0});
    MetricsSummary b = summarize_delays(Direction::IaxToRsw, {3.0, 3.0, 3.5});
    MetricsSummary c = summarize_delays(Direction::IaxToRsw, {1.0});
    const std::vector<MetricsSummary> one{a};
    const std::string text = summaries_csv(one);
    EXPECT_EQ(std::count(text.begin(), text.end(), '\n'), 2);
    EXPECT_NE(text.find("rsw_to_iax,2,1.000,1.500,2.000,1.000,0.062,0,true"), std::string::npos) << text;

    const std::vector<MetricsSummary> mixed{a, b, c};
    std::istringstream lines(summaries_csv(mixed));
    std::string line;
    std::getline(lines, line);
    std::getline(lines, line);
    EXPECT_EQ(line.rfind("iax_to_rsw,1,", 0), 0u);
    std::getline(lines, line);
    EXPECT_EQ(line.rfind("iax_to_rsw,3,", 0), 0u);
    std::getline(lines, line);
    EXPECT_EQ(line.rfind("rsw_to_iax,2,", 0), 0u);
}

TEST(SummaryCsv, WriteIsDeterministic)
{
    const auto dir = std::filesystem::temp_directory_path() / "iaxrsw_metrics_test";
    std::filesystem::create_directories(dir);
    const std::vector<MetricsSummary> rows{summarize_delays(Direction::IaxToRsw, {1.25, 2.5})};
    write_csv(rows, dir / "a.csv");
    write_csv(rows, dir / "b.csv");
    auto slurp = [](const std::filesystem::path& p) {
        std::ifstream in(p);
        std::stringstream ss;
        ss << in.rdbuf();
        return ss.str();
    };
    EXPECT_EQ(slurp(dir / "a.csv"), slurp(dir / "b.csv"));
    EXPECT_EQ(slurp(dir / "a.csv"), summaries_csv(rows));
    expect_errc(Errc::IoFailure, [&] { write_csv(rows, dir / "missing" / "x.csv"); });
    std::filesystem::remove_all(dir);
}

} // namespace
} // namespace iaxrsw
