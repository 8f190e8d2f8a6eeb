#include <gtest/gtest.h>

#include <Eigen/Eigenvalues>

#include "ramimo/montecarlo.hpp"
#include "ramimo/receiver.hpp"
#include "test_support.hpp"

using namespace ramimo;

TEST(MmseSinr, SingleUserWhiteNoiseIsMatchedFilterSnr) {
  UplinkProblem p;
  RandomStream rng(1, 0, StreamTag::test);
  p.h = oracle::random_matrix(rng, 16, 1);
  p.power = Eigen::VectorXd::Constant(1, 0.3);
  p.noise = 0.02 * CMatrix::Identity(16, 16);
  const auto s = mmse_sinr(p);
  EXPECT_NEAR(s[0], 0.3 * p.h.squaredNorm() / 0.02, 1e-12 * s[0]);
}

TEST(MmseSinr, OrthogonalUsersDoNotInterfere) {
  UplinkProblem p;
  p.h = CMatrix::Zero(4, 2);
  p.h(0, 0) = cd(2.0, 0.0);
  p.h(3, 1) = cd(0.0, 1.0);
  p.power = Eigen::Vector2d(1.0, 5.0);
  p.noise = 0.5 * CMatrix::Identity(4, 4);
  const auto s = mmse_sinr(p);
  EXPECT_NEAR(s[0], 8.0, 1e-12);
  EXPECT_NEAR(s[1], 10.0, 1e-12);
}

TEST(MmseSinr, AgreesWithCombinerFormOnRandomInstances) {
  RandomStream rng(2, 0, StreamTag::test);
  for (int trial = 0; trial < 200; ++trial) {
    const auto p = oracle::random_problem(rng);
    const auto closed = mmse_sinr(p);
    const auto expected = oracle::combiner_form_sinr(p);
    for (std::size_t k = 0; k < closed.size(); ++k)
      ASSERT_NEAR(closed[k], expected[k], 1e-9 * expected[k]) << "trial " << trial << " user " << k;
  }
}

TEST(MmseSinr, MmseCombinerBeatsMatchedFilter) {
  RandomStream rng(3, 0, StreamTag::test);
  for (int trial = 0; trial < 50; ++trial) {
    const auto p = oracle::random_problem(rng, 16, 6);
    const auto s = mmse_sinr(p);
    for (Eigen::Index k = 0; k < p.h.cols(); ++k) {
      const CVector mf = p.h.col(k);
      EXPECT_GE(s[k] * (1 + 1e-12), oracle::sinr_of_combiner(p, mf, k));
    }
  }
}

TEST(MmseSinr, NonIncreasingUnderPsdNoiseAddition) {
  RandomStream rng(4, 0, StreamTag::test);
  for (int trial = 0; trial < 100; ++trial) {
    auto p = oracle::random_problem(rng, 32, 6);
    const auto before = mmse_sinr(p);
    p.noise += oracle::random_psd(rng, 32, 1 + static_cast<int>(rng.below(8)), 0.1);
    const auto after = mmse_sinr(p);
    for (std::size_t k = 0; k < before.size(); ++k) ASSERT_LE(after[k], before[k] * (1 + 1e-12));
  }
}

TEST(MmseSinr, RejectsSingularCovariance) {
  UplinkProblem p;
  p.h = CMatrix::Zero(3, 1);
  p.h(0, 0) = 1.0;
  p.power = Eigen::VectorXd::Ones(1);
  p.noise = CMatrix::Zero(3, 3);
  EXPECT_THROW(mmse_sinr(p), NumericalError);
}

TEST(MmseSinr, RejectsInconsistentDimensions) {
  UplinkProblem p;
  p.h = CMatrix::Zero(3, 2);
  p.power = Eigen::VectorXd::Ones(1);
  p.noise = CMatrix::Identity(3, 3);
  EXPECT_THROW(mmse_sinr(p), std::invalid_argument);
}

TEST(AssembleProblem, ShapesPerMode) {
  ScenarioConfig cfg;
  const auto ch = synthesize_channels(build_deployment(cfg, 0), cfg, 0);
  const auto st = gain_control(ch, activation_mask(ch, cfg), cfg, 0);
  const auto c = assemble_problem(Mode::cmimo, ch, nullptr, cfg);
  EXPECT_EQ(c.h.rows(), 64);
  EXPECT_TRUE(c.h == ch.h_direct);
  const auto d = assemble_problem(Mode::dmimo, ch, nullptr, cfg);
  EXPECT_EQ(d.h.rows(), 64);
  EXPECT_TRUE(d.h == ch.f_user_site);
  const auto r = assemble_problem(Mode::ramimo, ch, &st, cfg);
  EXPECT_EQ(r.noise.rows(), 64);
  EXPECT_THROW(assemble_problem(Mode::ramimo, ch, nullptr, cfg), std::invalid_argument);
}

TEST(AssembleProblem, NoiseCovarianceHermitianPsdEveryDrop) {
  ScenarioConfig cfg;
  const double floor = noise_power_linear(cfg.bandwidth_hz, cfg.temperature_k, cfg.bs_nf_db);
  for (std::uint64_t drop = 0; drop < 30; ++drop) {
    const auto ch = synthesize_channels(build_deployment(cfg, drop), cfg, drop);
    const auto st = gain_control(ch, activation_mask(ch, cfg), cfg, drop);
    const auto p = assemble_problem(Mode::ramimo, ch, &st, cfg);
    const double scale = p.noise.cwiseAbs().maxCoeff();
    ASSERT_LE((p.noise - p.noise.adjoint()).cwiseAbs().maxCoeff(), 1e-12 * scale);
    const Eigen::SelfAdjointEigenSolver<CMatrix> es(p.noise);
    ASSERT_GE(es.eigenvalues().minCoeff(), floor * (1 - 1e-6));
  }
}

TEST(AssembleProblem, RamimoWithInfiniteTauMatchesCmimoBitwise) {
  ScenarioConfig cfg;
  cfg.tau_db = kInf;
  for (std::uint64_t drop = 0; drop < 5; ++drop) {
    const auto ch = synthesize_channels(build_deployment(cfg, drop), cfg, drop);
    const auto st = gain_control(ch, activation_mask(ch, cfg), cfg, drop);
    const auto c = mmse_sinr(assemble_problem(Mode::cmimo, ch, nullptr, cfg));
    const auto r = mmse_sinr(assemble_problem(Mode::ramimo, ch, &st, cfg));
    EXPECT_EQ(c, r);
  }
}
