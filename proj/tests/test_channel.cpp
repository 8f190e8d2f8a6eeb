#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "ramimo/channel.hpp"

using namespace ramimo;

namespace {

LinkState fixed_link(bool los, double pathloss_db, double phase = 0.3) {
  LinkState s;
  s.distance_2d = s.distance_3d = 100.0;
  s.is_los = los;
  s.pathloss_db = pathloss_db;
  s.los_phase = phase;
  return s;
}

}  // namespace

TEST(LosProbability, Examples) {
  EXPECT_EQ(los_probability(10.0), 1.0);
  EXPECT_EQ(los_probability(18.0), 1.0);
  // 0.5 (1 - e^-1) + e^-1
  EXPECT_NEAR(los_probability(36.0), 0.6839397205857212, 1e-12);
  EXPECT_LT(los_probability(1e5), 1e-3);
}

TEST(LosProbability, MonotoneBeyond18m) {
  double prev = 1.0;
  for (double d = 18.0; d < 2000.0; d += 0.5) {
    const double p = los_probability(d);
    ASSERT_LE(p, prev + 1e-15);
    ASSERT_GE(p, 0.0);
    prev = p;
  }
}

TEST(Pathloss, Examples) {
  // 44 + 28 + 20 log10(3.6) and 73.4 + 22.7 + 26 log10(3.6)
  EXPECT_NEAR(pathloss_db(100.0, true, 3.6), 83.12605001534574, 1e-9);
  EXPECT_NEAR(pathloss_db(100.0, false, 3.6), 110.56386501994947, 1e-9);
  EXPECT_EQ(pathloss_db(10.0, true, 3.6), pathloss_db(5.0, true, 3.6));
  EXPECT_EQ(pathloss_db(10.0, false, 3.6), pathloss_db(0.0, false, 3.6));
}

TEST(Pathloss, NlosNeverBelowLosAtReferenceCarrier) {
  for (double d = 10.0; d < 5000.0; d *= 1.1) {
    EXPECT_GT(pathloss_db(d, true, 3.6), 0.0);
    EXPECT_GE(pathloss_db(d, false, 3.6), pathloss_db(d, true, 3.6));
  }
}

TEST(SteeringVector, BroadsideIsAllOnes) {
  const auto a = steering_vector({64, 0.5}, 0.0);
  for (int m = 0; m < 64; ++m) EXPECT_EQ(a[m], cd(1.0, 0.0));
}

TEST(SteeringVector, EndfireHalfWavelengthAlternates) {
  const auto a = steering_vector({64, 0.5}, std::numbers::pi / 2);
  for (int m = 0; m < 64; ++m) {
    const cd expected = std::polar(1.0, std::numbers::pi * m);
    EXPECT_NEAR(std::abs(a[m] - expected), 0.0, 1e-12) << m;
  }
}

TEST(SteeringVector, NormIsElementCountForRandomAngles) {
  RandomStream rng(11, 0, StreamTag::test);
  for (int i = 0; i < 100; ++i) {
    const double az = (2.0 * rng.uniform() - 1.0) * std::numbers::pi;
    EXPECT_NEAR(steering_vector({64, 0.5}, az).squaredNorm(), 64.0, 64.0 * 1e-14);
  }
}

TEST(NoisePower, ThermalFloorExamples) {
  EXPECT_NEAR(watts_to_dbm(noise_power_linear(20e6, 290.0, 0.0)), -100.96, 0.02);
  EXPECT_NEAR(watts_to_dbm(noise_power_linear(20e6, 290.0, 5.0)), -95.96, 0.02);
  EXPECT_NEAR(watts_to_dbm(noise_power_linear(1.0, 290.0, 0.0)), -173.975, 0.01);
  EXPECT_NEAR(noise_power_linear(20e6, 290.0, 5.0) / noise_power_linear(20e6, 290.0, 0.0),
              std::pow(10.0, 0.5), 1e-12);
}

TEST(FadingVector, InfiniteKIsDeterministicLos) {
  RandomStream rng(1, 0, StreamTag::test);
  const auto link = fixed_link(true, 80.0, 1.1);
  const ArrayGeometry geom{64, 0.5};
  const auto h = draw_fading_vector(link, 0.4, geom, kInf, rng);
  const CVector expected = std::sqrt(1e-8) * std::polar(1.0, 1.1) * steering_vector(geom, 0.4);
  EXPECT_LT((h - expected).norm(), 1e-12 * expected.norm());
}

TEST(FadingVector, NlosMeanPowerMatchesPathloss) {
  RandomStream rng(2, 0, StreamTag::test);
  const auto link = fixed_link(false, 100.0);
  const double beta = 1e-10;
  double acc = 0.0;
  const int n = 100000;
  for (int i = 0; i < n; ++i) acc += draw_fading_vector(link, 0.2, {64, 0.5}, 10.0, rng).squaredNorm();
  EXPECT_NEAR(acc / n / (64.0 * beta), 1.0, 0.02);
}

TEST(FadingVector, LosPowerFractionIsKOverKPlusOne) {
  RandomStream rng(3, 0, StreamTag::test);
  const auto link = fixed_link(true, 90.0, 2.0);
  const double beta = 1e-9;
  const int n = 100000;
  CVector mean = CVector::Zero(64);
  double total = 0.0;
  for (int i = 0; i < n; ++i) {
    const auto h = draw_fading_vector(link, -0.7, {64, 0.5}, 10.0, rng);
    mean += h;
    total += h.squaredNorm();
  }
  mean /= static_cast<double>(n);
  EXPECT_NEAR(mean.squaredNorm() / (64.0 * beta), 10.0 / 11.0, 0.02 * 10.0 / 11.0);
  EXPECT_NEAR(total / n / (64.0 * beta), 1.0, 0.02);
}

TEST(ScalarLink, UnitMeanFadingBothStates) {
  for (bool los : {false, true}) {
    RandomStream rng(4, los ? 1 : 0, StreamTag::test);
    const auto link = fixed_link(los, 70.0);
    double acc = 0.0;
    const int n = 100000;
    for (int i = 0; i < n; ++i) acc += std::norm(draw_scalar_link(link, 10.0, rng));
    EXPECT_NEAR(acc / n / 1e-7, 1.0, 0.02) << "los=" << los;
  }
}

TEST(ScalarLink, DegenerateLimits) {
  RandomStream rng(5, 0, StreamTag::test);
  const auto link = fixed_link(true, 70.0);
  for (int i = 0; i < 10; ++i) EXPECT_NEAR(std::norm(draw_scalar_link(link, kInf, rng)), 1e-7, 1e-20);
  const auto dead = fixed_link(false, kInf);
  EXPECT_EQ(draw_scalar_link(dead, 10.0, rng), cd(0.0, 0.0));
}

TEST(LinkState, LosFrequencyWithinThreeSigma) {
  RandomStream rng(6, 0, StreamTag::test);
  const Point3 origin{0, 0, 10};
  const int n = 100000;
  for (double d : {10.0, 36.0, 100.0, 300.0}) {
    int hits = 0;
    for (int i = 0; i < n; ++i) hits += make_link_state({d, 0, 10}, origin, 0.083, 3.6, rng).is_los;
    const double p = los_probability(d);
    const double sigma = std::sqrt(p * (1.0 - p) / n);
    EXPECT_LE(std::abs(static_cast<double>(hits) / n - p), 3.0 * sigma + 1e-12) << d;
  }
}

TEST(LinkState, DistancesAreClampedAndSymmetric) {
  RandomStream a(7, 0, StreamTag::test), b(7, 0, StreamTag::test);
  const Point3 p{3, 4, 1.5}, q{0, 0, 10};
  const auto ab = make_link_state(p, q, 0.083, 3.6, a);
  const auto ba = make_link_state(q, p, 0.083, 3.6, b);
  EXPECT_EQ(ab.distance_2d, kMinLinkDistance);
  EXPECT_NEAR(ab.distance_3d, std::hypot(10.0, 8.5), 1e-12);
  EXPECT_EQ(ab.is_los, ba.is_los);
  EXPECT_EQ(ab.pathloss_db, ba.pathloss_db);
  EXPECT_EQ(ab.los_phase, ba.los_phase);
  EXPECT_GE(ab.los_phase, 0.0);
  EXPECT_LT(ab.los_phase, 2.0 * std::numbers::pi);
}

TEST(Synthesize, DimensionsOfReferenceSetup) {
  ScenarioConfig cfg;
  const auto dep = build_deployment(cfg, 0);
  const auto ch = synthesize_channels(dep, cfg, 0);
  EXPECT_EQ(ch.h_direct.rows(), 64);
  EXPECT_EQ(ch.h_direct.cols(), 8);
  EXPECT_EQ(ch.f_user_site.rows(), 64);
  EXPECT_EQ(ch.f_user_site.cols(), 8);
  EXPECT_EQ(ch.h_site_bs.rows(), 64);
  EXPECT_EQ(ch.h_site_bs.cols(), 64);
  EXPECT_EQ(ch.user_bs.size(), 8u);
  EXPECT_EQ(ch.user_site.size(), 512u);
  EXPECT_EQ(ch.site_bs.size(), 64u);
}

TEST(Synthesize, BitwiseDeterministic) {
  ScenarioConfig cfg;
  cfg.seed = 99;
  const auto dep = build_deployment(cfg, 3);
  const auto a = synthesize_channels(dep, cfg, 3);
  const auto b = synthesize_channels(dep, cfg, 3);
  EXPECT_TRUE(a.h_direct == b.h_direct);
  EXPECT_TRUE(a.f_user_site == b.f_user_site);
  EXPECT_TRUE(a.h_site_bs == b.h_site_bs);
  const auto c = synthesize_channels(dep, cfg, 4);
  EXPECT_FALSE(a.h_direct == c.h_direct);
}

TEST(Synthesize, UserAtBaseStationHasStrongestExpectedDirectGain) {
  ScenarioConfig cfg;
  cfg.num_users = 4;
  Deployment dep;
  dep.bs_position = {200, 200, 10};
  dep.site_positions = site_mesh(cfg);
  dep.user_positions = {{200, 200, 1.5}, {250, 200, 1.5}, {200, 330, 1.5}, {20, 20, 1.5}};
  for (std::uint64_t drop = 0; drop < 50; ++drop) {
    const auto ch = synthesize_channels(dep, cfg, drop);
    ASSERT_TRUE(ch.user_bs[0].is_los);
    for (int k = 1; k < 4; ++k) ASSERT_LT(ch.user_bs[0].pathloss_db, ch.user_bs[k].pathloss_db);
  }
}

TEST(Synthesize, UnitMeanFadingPerLinkClass) {
  // Pool |h|^2 / beta over many drops for each link class.
  ScenarioConfig cfg;
  cfg.num_users = 4;
  double sums[3] = {0, 0, 0};
  long counts[3] = {0, 0, 0};
  for (std::uint64_t drop = 0; counts[1] < 100000; ++drop) {
    const auto dep = build_deployment(cfg, drop);
    const auto ch = synthesize_channels(dep, cfg, drop);
    for (int k = 0; k < ch.num_users(); ++k)
      for (int m = 0; m < ch.num_antennas(); ++m) {
        sums[0] += std::norm(ch.h_direct(m, k)) / ch.user_bs[k].gain_linear();
        ++counts[0];
      }
    for (int r = 0; r < ch.num_sites(); ++r)
      for (int k = 0; k < ch.num_users(); ++k) {
        sums[1] += std::norm(ch.f_user_site(r, k)) / ch.user_site[r * ch.num_users() + k].gain_linear();
        ++counts[1];
      }
    for (int r = 0; r < ch.num_sites(); ++r)
      for (int m = 0; m < ch.num_antennas(); ++m) {
        sums[2] += std::norm(ch.h_site_bs(m, r)) / ch.site_bs[r].gain_linear();
        ++counts[2];
      }
  }
  for (int c = 0; c < 3; ++c) {
    ASSERT_GE(counts[c], 100000);
    EXPECT_NEAR(sums[c] / counts[c], 1.0, 0.02) << "link class " << c;
  }
}
