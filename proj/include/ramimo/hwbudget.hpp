#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <initializer_list>
#include <numbers>
#include <numeric>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace ramimo::hw {

/// PA output power (dBm) meeting a target ACLR, for a third-order PA driven
/// by an OFDM signal: P_out = CP - ACLR/2 + 12, with CP the output-referred
/// 1-dB compression point.
inline double pa_output_power_dbm(double cp_dbm, double aclr_db) {
  if (!(aclr_db >= 0.0)) throw std::domain_error("aclr_db must be non-negative");
  return cp_dbm - aclr_db / 2.0 + 12.0;
}

/// Noise figure of lossy passives (filters, switches, antenna interface)
/// ahead of the LNA. A passive at ambient temperature has NF equal to its
/// loss, and the Friis cascade of losses followed by an LNA reduces to a
/// sum in dB.
inline double cascade_nf_db(std::span<const double> passive_losses_db, double lna_nf_db) {
  if (!(lna_nf_db >= 0.0)) throw std::domain_error("lna_nf_db must be non-negative");
  double total = lna_nf_db;
  for (double loss : passive_losses_db) {
    if (!(loss >= 0.0)) throw std::domain_error("passive losses must be non-negative");
    total += loss;
  }
  return total;
}

inline double cascade_nf_db(std::initializer_list<double> losses, double lna_nf_db) {
  return cascade_nf_db(std::span<const double>(losses.begin(), losses.size()), lna_nf_db);
}

enum class EvmCombining {
  coherent,  // identical, correlated stages: EVM adds linearly
  rss,       // independent stages: root-sum-square
};

/// EVM (fraction) caused by I/Q gain and phase mismatch. One stage leaves an
/// image at relative amplitude |eps + j*phi| / 2 in the small-error regime.
inline double iq_evm_fraction(double gain_err, double phase_err_deg, int stages,
                              EvmCombining mode = EvmCombining::coherent) {
  const double phase_rad = phase_err_deg * std::numbers::pi / 180.0;
  if (stages < 0) throw std::domain_error("stages must be non-negative");
  if (!(std::abs(gain_err) < 0.2) || !(std::abs(phase_rad) < 0.2))
    throw std::domain_error("I/Q errors outside the small-error regime (< 0.2)");
  const double per_stage = 0.5 * std::hypot(gain_err, phase_rad);
  return mode == EvmCombining::coherent ? stages * per_stage
                                        : std::sqrt(static_cast<double>(stages)) * per_stage;
}

/// Group delay of an n-th order Butterworth lowpass with cutoff
/// `bandwidth_hz`, at `at_freq_hz`. The phase is accumulated pole by pole
/// and differentiated numerically with a central difference.
inline double butterworth_group_delay_s(int order, double bandwidth_hz, double at_freq_hz) {
  if (order < 1) throw std::domain_error("filter order must be at least 1");
  if (!(bandwidth_hz > 0.0)) throw std::domain_error("bandwidth must be positive");
  if (!(at_freq_hz >= 0.0 && at_freq_hz < bandwidth_hz))
    throw std::domain_error("evaluation frequency must lie in [0, bandwidth)");

  const double wc = 2.0 * std::numbers::pi * bandwidth_hz;
  std::vector<std::complex<double>> poles;
  for (int k = 1; k <= order; ++k) {
    const double angle = (2.0 * k - 1.0) * std::numbers::pi / (2.0 * order);
    poles.emplace_back(-wc * std::sin(angle), wc * std::cos(angle));
  }
  // phase(w) = -sum_k arg(jw - p_k); each term is continuous since Re(-p_k) > 0.
  auto phase = [&](double w) {
    double acc = 0.0;
    for (const auto& p : poles) acc -= std::arg(std::complex<double>(0.0, w) - p);
    return acc;
  };
  const double w = 2.0 * std::numbers::pi * at_freq_hz;
  const double h = wc * 1e-5;
  return -(phase(w + h) - phase(w - h)) / (2.0 * h);
}

/// Largest repeater gain that keeps `margin_db` below the PA-to-LNA
/// isolation.
inline double max_stable_gain_db(double isolation_db, double margin_db) {
  if (margin_db > isolation_db)
    throw std::domain_error("margin exceeds isolation: no stable gain");
  return isolation_db - margin_db;
}

/// Number of RIS unit cells matching a repeater power gain: amplitude
/// scales with the cell count, so N = ceil(sqrt(A)).
inline std::uint64_t ris_equivalent_cells(double gain_db) {
  if (!(gain_db >= 0.0)) throw std::domain_error("gain_db must be non-negative");
  const double amplitude = std::sqrt(std::pow(10.0, gain_db / 10.0));
  // pow/sqrt can land a few ulp above an exact integer
  return static_cast<std::uint64_t>(std::ceil(amplitude * (1.0 - 1e-12)));
}

struct DelayVerdict {
  bool pass = true;
  double total_s = 0.0;
  double ratio = 0.0;     // total / cyclic prefix
  double margin_s = 0.0;  // cyclic prefix - total
};

inline DelayVerdict delay_budget_check(std::span<const double> component_delays_s,
                                       double cyclic_prefix_s) {
  if (!(cyclic_prefix_s > 0.0)) throw std::domain_error("cyclic prefix must be positive");
  DelayVerdict v;
  for (double d : component_delays_s) {
    if (!(d >= 0.0)) throw std::domain_error("delays must be non-negative");
    v.total_s += d;
  }
  v.ratio = v.total_s / cyclic_prefix_s;
  v.margin_s = cyclic_prefix_s - v.total_s;
  v.pass = v.total_s <= cyclic_prefix_s;
  return v;
}

inline DelayVerdict delay_budget_check(std::initializer_list<double> delays, double cyclic_prefix_s) {
  return delay_budget_check(std::span<const double>(delays.begin(), delays.size()), cyclic_prefix_s);
}

/// Hardware parameters of one repeater design. Defaults describe a low-cost
/// sub-6 GHz single-antenna repeater with baseband filtering.
struct RepeaterBudget {
  double filter_loss_db = 2.0;
  double switch_loss_db = 0.0;
  double lna_nf_db = 3.0;
  double cp_dbm = 28.0;
  double target_aclr_db = 40.0;
  double iq_gain_err = 0.01;
  double iq_phase_err_deg = 1.0;
  int iq_stages = 2;
  int filter_order = 5;
  double filter_bandwidth_hz = 10e6;
  double processing_delay_s = 100e-9;
  double isolation_db = 50.0;
  double stability_margin_db = 10.0;
  double cyclic_prefix_s = 4.7e-6;  // normal CP at 15 kHz subcarrier spacing
};

struct BudgetLine {
  std::string name;
  double value;
  std::string unit;
};

inline std::vector<BudgetLine> evaluate_budget(const RepeaterBudget& b) {
  const double losses[] = {b.filter_loss_db, b.switch_loss_db};
  const double filter_delay = butterworth_group_delay_s(b.filter_order, b.filter_bandwidth_hz, 0.0);
  const double delays[] = {filter_delay, b.processing_delay_s};
  const auto verdict = delay_budget_check(delays, b.cyclic_prefix_s);
  const double max_gain = max_stable_gain_db(b.isolation_db, b.stability_margin_db);
  return {
      {"pa_output_power", pa_output_power_dbm(b.cp_dbm, b.target_aclr_db), "dBm"},
      {"noise_figure", cascade_nf_db(losses, b.lna_nf_db), "dB"},
      {"iq_evm", 100.0 * iq_evm_fraction(b.iq_gain_err, b.iq_phase_err_deg, b.iq_stages), "%"},
      {"filter_group_delay", filter_delay * 1e9, "ns"},
      {"total_delay", verdict.total_s * 1e9, "ns"},
      {"delay_to_cp_ratio", verdict.ratio, ""},
      {"delay_budget_pass", verdict.pass ? 1.0 : 0.0, "bool"},
      {"max_stable_gain", max_gain, "dB"},
      {"ris_equivalent_cells", static_cast<double>(ris_equivalent_cells(max_gain)), "cells"},
  };
}

}  // namespace ramimo::hw
