#pragma once

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string_view>
#include <vector>

#include "channel.hpp"
#include "config.hpp"
#include "rng.hpp"
#include "units.hpp"

namespace ramimo {

/// Which limit set a repeater's gain.
enum class GainLimit { idle, cap, tau, pout };

inline std::string_view to_string(GainLimit limit) {
  switch (limit) {
    case GainLimit::idle: return "idle";
    case GainLimit::cap: return "cap";
    case GainLimit::tau: return "tau";
    case GainLimit::pout: return "pout";
  }
  return "?";
}

/// Per-repeater configuration for one drop. amp_gain_linear is the power gain
/// g^2; the amplitude gain applied to the signal is its square root.
struct RepeaterState {
  std::vector<bool> active;
  std::vector<double> amp_gain_linear;
  std::vector<double> response_phase;  // rad
  std::vector<GainLimit> limit;
  std::vector<double> input_power;     // W, user signals only

  int num_active() const {
    return static_cast<int>(std::count(active.begin(), active.end(), true));
  }
};

/// Per-repeater derived noise and power quantities shared by the pipeline.
struct RepeaterBudgetTerms {
  double bs_noise;       // W, sigma^2_BS
  double rep_noise;      // W, sigma^2_rep
  double threshold;      // W, activation threshold on the input power
  double user_power;     // W
  double max_out_power;  // W
};

inline RepeaterBudgetTerms repeater_terms(const ScenarioConfig& cfg) {
  const double rep_noise = noise_power_linear(cfg.bandwidth_hz, cfg.temperature_k, cfg.rep_nf_db);
  return {
      noise_power_linear(cfg.bandwidth_hz, cfg.temperature_k, cfg.bs_nf_db),
      rep_noise,
      rep_noise * db_to_linear(cfg.activation_snr_margin_db),
      dbm_to_watts(cfg.user_tx_power_dbm),
      dbm_to_watts(cfg.rep_max_out_dbm),
  };
}

/// Sum over users of p_k |f_{k,r}|^2 for every site r.
inline std::vector<double> repeater_input_power(const ChannelRealization& ch,
                                                const ScenarioConfig& cfg) {
  const double p = dbm_to_watts(cfg.user_tx_power_dbm);
  std::vector<double> pin(static_cast<std::size_t>(ch.num_sites()));
  for (int r = 0; r < ch.num_sites(); ++r)
    pin[r] = p * ch.f_user_site.row(r).squaredNorm();
  return pin;
}

/// A repeater is active iff its input power strictly exceeds the repeater
/// noise floor raised by the activation margin.
inline std::vector<bool> activation_mask(const ChannelRealization& ch,
                                         const ScenarioConfig& cfg) {
  const double threshold = repeater_terms(cfg).threshold;
  const auto pin = repeater_input_power(ch, cfg);
  std::vector<bool> active(pin.size());
  for (std::size_t r = 0; r < pin.size(); ++r) active[r] = pin[r] > threshold;
  return active;
}

/// Per-antenna average gain of the repeater -> BS channel, ||h_r||^2 / M.
inline double site_bs_mean_gain(const ChannelRealization& ch, int r) {
  return ch.h_site_bs.col(r).squaredNorm() / static_cast<double>(ch.num_antennas());
}

/// Power gain of every active repeater: the smallest of
///   cap:  10^(gain_cap_db/10)
///   tau:  sigma^2_BS / (tau * sigma^2_rep * beta_r), beta_r the per-antenna
///         repeater -> BS gain, so that BS noise / repeated noise >= tau
///   pout: P_max / (P_in + sigma^2_rep), the output power limit.
/// One response phase per repeater is drawn from `rng` whether or not the
/// repeater is active.
inline RepeaterState gain_control(const ChannelRealization& ch, const std::vector<bool>& active,
                                  const ScenarioConfig& cfg, RandomStream& rng) {
  const auto terms = repeater_terms(cfg);
  const double cap = db_to_linear(cfg.gain_cap_db);
  const double tau = db_to_linear(cfg.tau_db);
  const auto num = static_cast<std::size_t>(ch.num_sites());

  RepeaterState st;
  st.active = active;
  st.amp_gain_linear.assign(num, 0.0);
  st.response_phase.assign(num, 0.0);
  st.limit.assign(num, GainLimit::idle);
  st.input_power = repeater_input_power(ch, cfg);

  for (std::size_t r = 0; r < num; ++r) {
    const double phase = 2.0 * std::numbers::pi * rng.uniform();
    if (cfg.random_repeater_phase) st.response_phase[r] = phase;
    if (!active[r]) continue;

    const double beta = site_bs_mean_gain(ch, static_cast<int>(r));
    const double tau_limit = terms.bs_noise / (tau * terms.rep_noise * beta);
    const double pout_limit = terms.max_out_power / (st.input_power[r] + terms.rep_noise);

    double g2 = cap;
    GainLimit why = GainLimit::cap;
    if (tau_limit < g2) {
      g2 = tau_limit;
      why = GainLimit::tau;
    }
    if (pout_limit < g2) {
      g2 = pout_limit;
      why = GainLimit::pout;
    }
    st.amp_gain_linear[r] = g2;
    st.limit[r] = why;
  }
  return st;
}

inline RepeaterState gain_control(const ChannelRealization& ch, const std::vector<bool>& active,
                                  const ScenarioConfig& cfg, std::uint64_t drop_index) {
  RandomStream rng(cfg.seed, drop_index, StreamTag::repeater_phase);
  return gain_control(ch, active, cfg, rng);
}

/// Single-bounce effective channel:
///   H_eff[:, k] = h_direct[:, k] + sum_r g_r e^{j phi_r} f_{k,r} h_site_bs[:, r]
/// Repeaters with zero gain are skipped, so an all-idle state returns
/// h_direct bit for bit.
inline CMatrix composite_channel(const ChannelRealization& ch, const RepeaterState& st) {
  CMatrix h = ch.h_direct;
  for (int r = 0; r < ch.num_sites(); ++r) {
    if (!st.active[r] || st.amp_gain_linear[r] == 0.0) continue;
    const cd weight = std::polar(std::sqrt(st.amp_gain_linear[r]), st.response_phase[r]);
    // rank-1 update: column r of h_site_bs times row r of f_user_site
    h.noalias() += (weight * ch.h_site_bs.col(r)) * ch.f_user_site.row(r);
  }
  return h;
}

/// Amplified repeater noise seen at the BS array:
///   C_rep = sum_r g_r^2 sigma^2_rep h_site_bs[:, r] h_site_bs[:, r]^H
inline CMatrix repeated_noise_covariance(const ChannelRealization& ch, const RepeaterState& st,
                                         const ScenarioConfig& cfg) {
  const double rep_noise = noise_power_linear(cfg.bandwidth_hz, cfg.temperature_k, cfg.rep_nf_db);
  const int m = ch.num_antennas();
  CMatrix c = CMatrix::Zero(m, m);
  for (int r = 0; r < ch.num_sites(); ++r) {
    if (!st.active[r] || st.amp_gain_linear[r] == 0.0) continue;
    const auto col = ch.h_site_bs.col(r);
    c.noalias() += (st.amp_gain_linear[r] * rep_noise) * (col * col.adjoint());
  }
  return c;
}

}  // namespace ramimo
