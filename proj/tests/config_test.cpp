#include "iaxrsw/config.hpp"

#include "gtest_support.hpp"

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>

namespace iaxrsw {
namespace {

using test::expect_errc;

std::filesystem::path write_temp(const std::string& name, const std::string& text)
{
    const auto path = std::filesystem::temp_directory_path() / name;
    std::ofstream(path) << text;
    return path;
}

TEST(ConfigText, SectionsCommentsAndWhitespace)
{
    const auto kv = parse_config_text("# top\n"
                                      "top = 1\n"
                                      "[sim]\n"
                                      "  packets =  40  ; trailing\n"
                                      "\n"
                                      "[ link.iax ]\r\n"
                                      "base_ms=2.5\n");
    ASSERT_EQ(kv.size(), 3u);
    EXPECT_EQ(kv[0], (KeyValue{"top", "1"}));
    EXPECT_EQ(kv[1], (KeyValue{"sim.packets", "40"}));
    EXPECT_EQ(kv[2], (KeyValue{"link.iax.base_ms", "2.5"}));
}

TEST(ConfigText, SyntaxErrorsNameTheLine)
{
    try {
        parse_config_text("[sim]\npackets 40\n");
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), Errc::InvalidConfig);
        EXPECT_NE(std::string(e.what()).find("line 2"), std::string::npos);
    }
    expect_errc(Errc::InvalidConfig, [] { parse_config_text("[sim\n"); });
    expect_errc(Errc::InvalidConfig, [] { parse_config_text("= 3\n"); });
}

TEST(Override, Parsing)
{
    EXPECT_EQ(parse_override("sim.seed=9"), (KeyValue{"sim.seed", "9"}));
    EXPECT_EQ(parse_override(" sim.seed = 9 "), (KeyValue{"sim.seed", "9"}));
    expect_errc(Errc::InvalidConfig, [] { parse_override("sim.seed"); });
    expect_errc(Errc::InvalidConfig, [] { parse_override("=9"); });
}

TEST(ApplySetting, EveryKnownKey)
{
    Settings s;
    apply_setting(s, "sim.direction", "rsw_to_iax");
    apply_setting(s, "sim.packets", "77");
    apply_setting(s, "sim.seed", "18446744073709551615");
    apply_setting(s, "sim.codec", "gsm");
    apply_setting(s, "sim.buffer_capacity", "8");
    apply_setting(s, "sim.processing_ms", "0.25");
    apply_setting(s, "sim.call_number", "300");
    apply_setting(s, "link.iax.base_ms", "2");
    apply_setting(s, "link.rsw.span_ms", "7.5");
    apply_setting(s, "sweep.packets", "5:50:5");
    apply_setting(s, "relay.iax_listen", "127.0.0.1:1000");
    apply_setting(s, "relay.rsw_peer", "10.0.0.2:6000");
    apply_setting(s, "relay.call_number", "9");
    apply_setting(s, "relay.stats_interval_ms", "250");

    EXPECT_EQ(s.sim.direction, ScenarioDirection::RswToIax);
    EXPECT_EQ(s.sim.packet_count, 77u);
    EXPECT_EQ(s.sim.seed, ~std::uint64_t{0});
    EXPECT_EQ(s.sim.buffer_capacity, 8u);
    EXPECT_EQ(s.sim.gateway_processing_delay_ms, 0.25);
    EXPECT_EQ(s.sim.iax_call_number, 300);
    EXPECT_EQ(s.sim.iax_link.base_ms, 2.0);
    EXPECT_EQ(s.sim.rsw_link.jitter_span_ms, 7.5);
    EXPECT_EQ(s.sweep_packets, "5:50:5");
    EXPECT_EQ(s.relay.iax_listen, (Endpoint{"127.0.0.1", 1000}));
    EXPECT_EQ(s.relay.rsw_peer, (Endpoint{"10.0.0.2", 6000}));
    EXPECT_EQ(s.relay.iax_call_number, 9);
    EXPECT_EQ(s.relay.stats_interval_ms, 250u);
}

TEST(ApplySetting, RejectsUnknownKeysAndBadValues)
{
    Settings s;
    for (const char* key : {"sim.bogus", "bogus", "link.sip.base_ms", "link.iax.nope", "sweep.x",
                            "relay.port", "codec.gsm", "codec.x.unknown"})
        expect_errc(Errc::InvalidConfig, [&] { apply_setting(s, key, "1"); });

    expect_errc(Errc::InvalidConfig, [&] { apply_setting(s, "sim.packets", "-1"); });
    expect_errc(Errc::InvalidConfig, [&] { apply_setting(s, "sim.packets", "12abc"); });
    expect_errc(Errc::InvalidConfig, [&] { apply_setting(s, "sim.call_number", "70000"); });
    expect_errc(Errc::InvalidConfig, [&] { apply_setting(s, "sim.direction", "sideways"); });
    expect_errc(Errc::InvalidConfig, [&] { apply_setting(s, "link.iax.base_ms", "fast"); });
    expect_errc(Errc::InvalidConfig, [&] { apply_setting(s, "link.iax.base_ms", "nan"); });
    expect_errc(Errc::InvalidConfig, [&] { apply_setting(s, "sweep.packets", "0:10"); });
    expect_errc(Errc::InvalidConfig, [&] { apply_setting(s, "relay.iax_peer", "nowhere"); });
}

TEST(LoadSettings, PrecedenceDefaultsFileOverrides)
{
    const auto path = write_temp("iaxrsw_config_test.conf",
                                 "[sim]\npackets = 40\nseed = 3\n[link.rsw]\nspan_ms = 2\n");
    const Settings defaults = load_settings(std::nullopt, {});
    EXPECT_EQ(defaults.sim.packet_count, 100u);
    EXPECT_EQ(defaults.sim.rsw_link.jitter_span_ms, 5.0);

    const Settings from_file = load_settings(path, {});
    EXPECT_EQ(from_file.sim.packet_count, 40u);
    EXPECT_EQ(from_file.sim.seed, 3u);
    EXPECT_EQ(from_file.sim.rsw_link.jitter_span_ms, 2.0);
    EXPECT_EQ(from_file.sim.iax_link.jitter_span_ms, 5.0);

    const Settings overridden = load_settings(path, {{"sim.packets", "60"}, {"sim.packets", "61"}});
    EXPECT_EQ(overridden.sim.packet_count, 61u);
    EXPECT_EQ(overridden.sim.seed, 3u);

    std::filesystem::remove(path);
    expect_errc(Errc::IoFailure, [&] { load_settings(path, {}); });
}

TEST(LoadSettings, CodecSectionsBuildRegistry)
{
    const auto path = write_temp("iaxrsw_codec_test.conf",
                                 "[codec.pcmu]\nbitrate_bps = 64000\nframe_interval_ms = 20\n"
                                 "payload_bytes = 160\npayload_type = 0\nsample_rate_hz = 8000\n");
    const Settings s = load_settings(path, {{"sim.codec", "pcmu"}});
    std::filesystem::remove(path);

    const CodecRegistry registry = make_registry(s);
    EXPECT_EQ(registry.lookup("pcmu").frame_payload_bytes, 160u);
    EXPECT_EQ(registry.lookup("gsm").frame_payload_bytes, 33u);
    EXPECT_EQ(run_scenario(s.sim, registry).front().size_bytes_in, 164u);
}

TEST(LoadSettings, IncompleteCodecIsRejected)
{
    expect_errc(Errc::InvalidConfig, [] { load_settings(std::nullopt, {{"codec.half.bitrate_bps", "8000"}}); });
}

TEST(PacketRange, Forms)
{
    EXPECT_EQ(parse_packet_range("10:100:10"),
              (std::vector<std::uint32_t>{10, 20, 30, 40, 50, 60, 70, 80, 90, 100}));
    EXPECT_EQ(parse_packet_range("10:100:7"),
              (std::vector<std::uint32_t>{10, 17, 24, 31, 38, 45, 52, 59, 66, 73, 80, 87, 94}));
    EXPECT_EQ(parse_packet_range("3:5"), (std::vector<std::uint32_t>{3, 4, 5}));
    EXPECT_EQ(parse_packet_range("42"), (std::vector<std::uint32_t>{42}));
    EXPECT_EQ(parse_packet_range("4294967295:4294967295:1").size(), 1u);
}

TEST(PacketRange, Malformed)
{
    for (const char* bad : {"", "0", "0:10", "10:5", "10:100:0", "a:b", "1:2:3:4", "1::2", "-5", "10:100:"})
        expect_errc(Errc::InvalidConfig, [&] { parse_packet_range(bad); });
}

} // namespace
} // namespace iaxrsw
