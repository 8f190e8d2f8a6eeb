#include <gtest/gtest.h>

#include <clocale>
#include <sstream>

#include "ramimo/csv.hpp"
#include "ramimo/manifest.hpp"
#include "ramimo/svg.hpp"

using namespace ramimo;

namespace {

CampaignResult tiny_campaign(Mode mode) {
  ScenarioConfig cfg;
  cfg.mode = mode;
  cfg.num_drops = 3;
  cfg.num_users = 2;
  cfg.num_sites = 4;
  cfg.bs_antennas = 4;
  return run_campaign(cfg, 1);
}

std::vector<std::string> lines_of(const std::string& s) {
  std::vector<std::string> out;
  std::istringstream in(s);
  for (std::string line; std::getline(in, line);) out.push_back(line);
  return out;
}

}  // namespace

TEST(Format, FixedSixDecimals) {
  EXPECT_EQ(fmt_fixed(1.0), "1.000000");
  EXPECT_EQ(fmt_fixed(-12.3456789), "-12.345679");
  EXPECT_EQ(fmt_fixed(kInf), "inf");
  EXPECT_EQ(fmt_fixed(-kInf), "-inf");
  EXPECT_EQ(fmt_fixed(0.25, 2), "0.25");
}

TEST(Format, IgnoresGlobalLocale) {
  if (std::setlocale(LC_ALL, "de_DE.UTF-8") == nullptr) GTEST_SKIP() << "locale not installed";
  EXPECT_EQ(fmt_fixed(1.5), "1.500000");
  std::setlocale(LC_ALL, "C");
}

TEST(Format, ExactRoundTrips) {
  for (double v : {0.1, 1e-300, -3.141592653589793, 12345.678}) EXPECT_EQ(std::stod(fmt_exact(v)), v);
}

TEST(SamplesCsv, HeaderAndRowOrder) {
  const auto c = tiny_campaign(Mode::cmimo);
  const auto r = tiny_campaign(Mode::ramimo);
  std::ostringstream out;
  write_samples_csv(out, {&c, &r});
  const auto lines = lines_of(out.str());
  ASSERT_EQ(lines.size(), 1u + 2 * 3 * 2);
  EXPECT_EQ(lines[0], "drop,user,mode,sinr_db");
  EXPECT_EQ(lines[1].rfind("0,0,cmimo,", 0), 0u);
  EXPECT_EQ(lines[2].rfind("0,1,cmimo,", 0), 0u);
  EXPECT_EQ(lines[3].rfind("1,0,cmimo,", 0), 0u);
  EXPECT_EQ(lines[7].rfind("0,0,ramimo,", 0), 0u);
  EXPECT_EQ(lines[1].substr(10), fmt_fixed(c.drops[0].sinr_db[0]));
}

TEST(CdfCsv, EndsAtOnePerMode) {
  const auto c = tiny_campaign(Mode::cmimo);
  std::ostringstream out;
  write_cdf_csv(out, {&c});
  const auto lines = lines_of(out.str());
  ASSERT_EQ(lines.size(), 7u);
  EXPECT_EQ(lines[0], "mode,sinr_db,cdf");
  EXPECT_EQ(lines.back().substr(lines.back().size() - 8), "1.000000");
}

TEST(PercentilesCsv, OneRowPerLabel) {
  const auto c = tiny_campaign(Mode::cmimo);
  std::ostringstream out;
  write_percentiles_csv(out, {&c}, {"cmimo"});
  const auto lines = lines_of(out.str());
  ASSERT_EQ(lines.size(), 2u);
  EXPECT_EQ(lines[0], "label,p1,p5,p10,p25,p50,p75,p90,p95,p99");
  EXPECT_EQ(lines[1].rfind("cmimo,", 0), 0u);
}

TEST(ChannelCsv, RowCountAndExactValues) {
  ScenarioConfig cfg;
  cfg.num_users = 2;
  cfg.num_sites = 4;
  cfg.bs_antennas = 3;
  const auto ch = synthesize_channels(build_deployment(cfg, 0), cfg, 0);
  std::ostringstream out;
  write_channel_csv(out, ch);
  const auto lines = lines_of(out.str());
  ASSERT_EQ(lines.size(), 1u + 3 * 2 + 4 * 2 + 3 * 4);
  std::istringstream row(lines[1]);
  std::string field;
  std::vector<std::string> f;
  while (std::getline(row, field, ',')) f.push_back(field);
  ASSERT_EQ(f.size(), 7u);
  EXPECT_EQ(f[0], "user_bs");
  EXPECT_EQ(std::stod(f[5]), ch.h_direct(0, 0).real());
  EXPECT_EQ(std::stod(f[6]), ch.h_direct(0, 0).imag());
}

TEST(RepeaterCsv, IdleRowsShowMinusInfinity) {
  ScenarioConfig cfg;
  const auto ch = synthesize_channels(build_deployment(cfg, 0), cfg, 0);
  auto mask = activation_mask(ch, cfg);
  mask[0] = false;
  const auto st = gain_control(ch, mask, cfg, 0);
  std::ostringstream out;
  write_repeater_csv(out, 0, st);
  const auto lines = lines_of(out.str());
  ASSERT_EQ(lines.size(), 65u);
  EXPECT_EQ(lines[1].rfind("0,0,0,-inf,idle,", 0), 0u);
}

TEST(Svg, SelfContainedWithAxesAndLegend) {
  const auto c = tiny_campaign(Mode::cmimo);
  std::ostringstream out;
  write_cdf_svg(out, {{"C-MIMO", c.sorted_sinr_db}, {"a<b", {}}}, "test");
  const auto svg = out.str();
  EXPECT_EQ(svg.rfind("<?xml", 0), 0u);
  EXPECT_NE(svg.find("SINR [dB]"), std::string::npos);
  EXPECT_NE(svg.find(">CDF<"), std::string::npos);
  EXPECT_NE(svg.find("C-MIMO"), std::string::npos);
  EXPECT_NE(svg.find("a&lt;b"), std::string::npos);
  EXPECT_EQ(svg.find("href"), std::string::npos);
  std::size_t polylines = 0;
  for (auto pos = svg.find("<polyline"); pos != std::string::npos; pos = svg.find("<polyline", pos + 1))
    ++polylines;
  EXPECT_EQ(polylines, 1u);
  EXPECT_NE(svg.find("</svg>"), std::string::npos);
}

TEST(Manifest, RoundTripsAsConfig) {
  RunManifest m;
  m.config.tau_db = kInf;
  m.config.seed = 17;
  m.modes = {Mode::cmimo, Mode::ramimo};
  m.command = "ramimo simulate";
  const auto j = nlohmann::json::parse(to_json(m).dump());
  EXPECT_EQ(j.at("seed"), 17);
  EXPECT_EQ(j.at("version"), kVersion);
  EXPECT_EQ(manifest_modes(j), m.modes);
  const auto back = config_from_json(j);
  EXPECT_EQ(to_json(back), to_json(m.config));
  EXPECT_TRUE(manifest_modes(nlohmann::json::object()).empty());
}
