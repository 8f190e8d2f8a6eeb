#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Cholesky>
#include <Eigen/Dense>

#include "channel.hpp"
#include "config.hpp"
#include "repeater.hpp"

namespace ramimo {

class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Inputs of the uplink combiner: y = H diag(sqrt(p)) s + n, n ~ CN(0, C).
struct UplinkProblem {
  CMatrix h;              // M x K
  Eigen::VectorXd power;  // K, watts
  CMatrix noise;          // M x M, Hermitian PSD with positive diagonal
};

/// Post-MMSE SINR of every user,
///
///   SINR_k = p_k h_k^H (sum_{j != k} p_j h_j h_j^H + C)^{-1} h_k,
///
/// evaluated as p_k ||L_k^{-1} h_k||^2 with L_k the Cholesky factor of the
/// interference-plus-noise covariance of user k. Forming each covariance
/// without user k avoids the 1 - q cancellation of the shared-inverse trick
/// at high SINR.
inline std::vector<double> mmse_sinr(const UplinkProblem& prob) {
  const auto m = prob.h.rows();
  const auto k_users = prob.h.cols();
  if (prob.noise.rows() != m || prob.noise.cols() != m || prob.power.size() != k_users)
    throw std::invalid_argument("mmse_sinr: inconsistent problem dimensions");

  // Scaled channel columns sqrt(p_j) h_j.
  CMatrix g = prob.h * prob.power.cwiseSqrt().asDiagonal();

  std::vector<double> sinr(static_cast<std::size_t>(k_users));
  CMatrix cov(m, m);
  for (Eigen::Index k = 0; k < k_users; ++k) {
    cov = prob.noise;
    for (Eigen::Index j = 0; j < k_users; ++j) {
      if (j == k) continue;
      cov.selfadjointView<Eigen::Lower>().rankUpdate(g.col(j));
    }
    Eigen::LLT<CMatrix, Eigen::Lower> llt(cov);
    if (llt.info() != Eigen::Success)
      throw NumericalError("mmse_sinr: interference-plus-noise covariance is not "
                           "positive definite (user " + std::to_string(k) + ")");
    const CVector y = llt.matrixL().solve(g.col(k));
    sinr[static_cast<std::size_t>(k)] = y.squaredNorm();
  }
  return sinr;
}

/// Builds the combiner input of one architecture for one drop.
///   cmimo:  H = h_direct,            C = sigma^2_BS I
///   dmimo:  H = f_user_site (R x K), C = sigma^2_AP I
///   ramimo: H = composite channel,   C = sigma^2_BS I + C_rep
/// `state` is only read for ramimo.
inline UplinkProblem assemble_problem(Mode mode, const ChannelRealization& ch,
                                      const RepeaterState* state, const ScenarioConfig& cfg) {
  const double bs_noise = noise_power_linear(cfg.bandwidth_hz, cfg.temperature_k, cfg.bs_nf_db);
  UplinkProblem prob;
  prob.power = Eigen::VectorXd::Constant(ch.num_users(), dbm_to_watts(cfg.user_tx_power_dbm));
  switch (mode) {
    case Mode::cmimo:
      prob.h = ch.h_direct;
      prob.noise = bs_noise * CMatrix::Identity(ch.num_antennas(), ch.num_antennas());
      break;
    case Mode::dmimo:
      prob.h = ch.f_user_site;
      prob.noise = bs_noise * CMatrix::Identity(ch.num_sites(), ch.num_sites());
      break;
    case Mode::ramimo:
      if (state == nullptr) throw std::invalid_argument("assemble_problem: ramimo needs a repeater state");
      prob.h = composite_channel(ch, *state);
      prob.noise = bs_noise * CMatrix::Identity(ch.num_antennas(), ch.num_antennas());
      prob.noise += repeated_noise_covariance(ch, *state, cfg);
      break;
  }
  return prob;
}

}  // namespace ramimo
