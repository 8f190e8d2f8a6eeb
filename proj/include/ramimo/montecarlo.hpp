#pragma once

#include <algorithm>
#include <array>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <stdexcept>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "channel.hpp"
#include "config.hpp"
#include "receiver.hpp"
#include "repeater.hpp"
#include "rng.hpp"
#include "scenario.hpp"

namespace ramimo {

struct DropResult {
  std::uint64_t drop_index = 0;
  Mode mode = Mode::cmimo;
  std::vector<double> sinr_db;  // one per user, in user order
  int active_repeaters = 0;     // ramimo only
  double mean_gain_db = 0.0;    // mean g^2 over active repeaters, ramimo only
};

/// Everything one drop produces, kept for diagnostics dumps.
struct DropTrace {
  Deployment deployment;
  ChannelRealization channels;
  RepeaterState repeaters;
  DropResult result;
};

/// Numerical failure inside a drop, tagged with the drop index.
class DropError : public NumericalError {
 public:
  DropError(std::uint64_t drop, const std::string& what)
      : NumericalError("drop " + std::to_string(drop) + ": " + what), drop_(drop) {}
  std::uint64_t drop() const noexcept { return drop_; }

 private:
  std::uint64_t drop_;
};

/// deployment -> channels -> (repeater control) -> MMSE SINRs. Fully
/// determined by (cfg.seed, drop_index); the repeater stream is consumed for
/// every mode so that all architectures see identical channels.
inline DropTrace trace_drop(const ScenarioConfig& cfg, std::uint64_t drop_index) {
  DropTrace t;
  t.deployment = build_deployment(cfg, drop_index);
  t.channels = synthesize_channels(t.deployment, cfg, drop_index);
  const auto active = activation_mask(t.channels, cfg);
  t.repeaters = gain_control(t.channels, active, cfg, drop_index);

  t.result.drop_index = drop_index;
  t.result.mode = cfg.mode;
  try {
    const auto prob = assemble_problem(cfg.mode, t.channels, &t.repeaters, cfg);
    const auto sinr = mmse_sinr(prob);
    t.result.sinr_db.reserve(sinr.size());
    for (double s : sinr) t.result.sinr_db.push_back(linear_to_db(s));
  } catch (const NumericalError& e) {
    throw DropError(drop_index, e.what());
  }
  for (double s : t.result.sinr_db)
    if (!std::isfinite(s)) throw DropError(drop_index, "non-finite SINR");

  if (cfg.mode == Mode::ramimo) {
    double sum_db = 0.0;
    int n = 0;
    for (std::size_t r = 0; r < t.repeaters.active.size(); ++r) {
      if (!t.repeaters.active[r]) continue;
      ++n;
      sum_db += linear_to_db(t.repeaters.amp_gain_linear[r]);
    }
    t.result.active_repeaters = n;
    t.result.mean_gain_db = n > 0 ? sum_db / n : 0.0;
  }
  return t;
}

inline DropResult run_drop(const ScenarioConfig& cfg, std::uint64_t drop_index) {
  return trace_drop(cfg, drop_index).result;
}

// --- statistics --------------------------------------------------------------

inline constexpr std::array<double, 9> kReportedPercentiles = {1, 5, 10, 25, 50, 75, 90, 95, 99};

/// Percentile of an ascending sample by linear interpolation between order
/// statistics (position (n-1) * pct / 100).
inline double percentile_sorted(const std::vector<double>& sorted, double pct) {
  if (sorted.empty()) throw std::invalid_argument("percentile of an empty sample");
  const double pos = (static_cast<double>(sorted.size()) - 1.0) * pct / 100.0;
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const auto hi = std::min(lo + 1, sorted.size() - 1);
  const double frac = pos - static_cast<double>(lo);
  return sorted[lo] + frac * (sorted[hi] - sorted[lo]);
}

/// Empirical CDF points (x_i, (i+1)/n) of an ascending sample.
inline std::vector<std::pair<double, double>> empirical_cdf(const std::vector<double>& sorted) {
  std::vector<std::pair<double, double>> cdf;
  cdf.reserve(sorted.size());
  const double n = static_cast<double>(sorted.size());
  for (std::size_t i = 0; i < sorted.size(); ++i)
    cdf.emplace_back(sorted[i], static_cast<double>(i + 1) / n);
  return cdf;
}

struct CampaignResult {
  ScenarioConfig config;
  std::vector<DropResult> drops;  // ordered by drop index
  std::vector<double> sorted_sinr_db;
  std::vector<std::pair<double, double>> percentiles;  // (pct, sinr_db)

  double percentile(double pct) const { return percentile_sorted(sorted_sinr_db, pct); }
};

// --- parallel driver ---------------------------------------------------------

/// Worker count: RAMIMO_THREADS if set to a positive integer, otherwise the
/// hardware parallelism.
inline int default_thread_count() {
  if (const char* env = std::getenv("RAMIMO_THREADS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && v > 0) return static_cast<int>(v);
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

/// Runs fn(i) for i in [0, n) on `threads` workers. Results must be written
/// to per-index slots by fn; the first exception is rethrown after joining.
template <class Fn>
void parallel_for(std::size_t n, int threads, Fn&& fn) {
  threads = std::max(1, std::min<int>(threads, static_cast<int>(std::max<std::size_t>(n, 1))));
  if (threads == 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  {
    std::vector<std::jthread> pool;
    pool.reserve(static_cast<std::size_t>(threads));
    for (int t = 0; t < threads; ++t) {
      pool.emplace_back([&] {
        for (std::size_t i = next++; i < n; i = next++) {
          try {
            fn(i);
          } catch (...) {
            std::lock_guard lock(error_mutex);
            if (!error) error = std::current_exception();
            next = n;
          }
        }
      });
    }
  }
  if (error) std::rethrow_exception(error);
}

inline CampaignResult summarize(ScenarioConfig cfg, std::vector<DropResult> drops) {
  CampaignResult out;
  out.config = std::move(cfg);
  out.drops = std::move(drops);
  for (const auto& d : out.drops)
    out.sorted_sinr_db.insert(out.sorted_sinr_db.end(), d.sinr_db.begin(), d.sinr_db.end());
  std::sort(out.sorted_sinr_db.begin(), out.sorted_sinr_db.end());
  for (double pct : kReportedPercentiles)
    out.percentiles.emplace_back(pct, percentile_sorted(out.sorted_sinr_db, pct));
  return out;
}

/// cfg.num_drops independent drops of cfg.mode, pooled over users and drops.
inline CampaignResult run_campaign(const ScenarioConfig& cfg, int threads = default_thread_count()) {
  const auto valid = validate_config(cfg);
  std::vector<DropResult> drops(static_cast<std::size_t>(valid.num_drops));
  parallel_for(drops.size(), threads, [&](std::size_t i) { drops[i] = run_drop(valid, i); });
  return summarize(valid, std::move(drops));
}

enum class SweepParam { gain_cap_db, tau_db, rep_nf_db };

inline SweepParam parse_sweep_param(std::string_view name) {
  if (name == "cap" || name == "gain_cap_db") return SweepParam::gain_cap_db;
  if (name == "tau" || name == "tau_db") return SweepParam::tau_db;
  if (name == "nf-rep" || name == "rep_nf_db") return SweepParam::rep_nf_db;
  throw ConfigError("sweep.param", "unknown sweep parameter '" + std::string(name) +
                                       "' (expected cap, tau or nf-rep)");
}

inline std::string_view to_string(SweepParam p) {
  switch (p) {
    case SweepParam::gain_cap_db: return "cap";
    case SweepParam::tau_db: return "tau";
    case SweepParam::rep_nf_db: return "nf-rep";
  }
  return "?";
}

inline ScenarioConfig with_param(ScenarioConfig cfg, SweepParam p, double value) {
  switch (p) {
    case SweepParam::gain_cap_db: cfg.gain_cap_db = value; break;
    case SweepParam::tau_db: cfg.tau_db = value; break;
    case SweepParam::rep_nf_db: cfg.rep_nf_db = value; break;
  }
  return cfg;
}

/// One campaign per value with the common seed, so drop d sees the same
/// users and fading at every sweep point.
inline std::vector<CampaignResult> sweep(const ScenarioConfig& cfg, SweepParam p,
                                         const std::vector<double>& values,
                                         int threads = default_thread_count()) {
  if (values.empty()) throw ConfigError("sweep.values", "at least one value is required");
  std::vector<CampaignResult> out;
  out.reserve(values.size());
  for (double v : values) out.push_back(run_campaign(with_param(cfg, p, v), threads));
  return out;
}

// --- bootstrap ---------------------------------------------------------------

struct Interval {
  double estimate = 0.0;
  double lower = 0.0;
  double upper = 0.0;

  bool excludes_zero() const { return lower > 0.0 || upper < 0.0; }
};

/// Percentile-bootstrap interval for percentile(a) - percentile(b) of two
/// campaigns over the same drops. Drops are resampled with replacement and
/// the same resampled drop set is used for both sides (paired design).
inline Interval bootstrap_percentile_gap(const CampaignResult& a, const CampaignResult& b,
                                         double pct, int resamples = 1000, double level = 0.95,
                                         std::uint64_t seed = 0) {
  if (a.drops.size() != b.drops.size() || a.drops.empty())
    throw std::invalid_argument("bootstrap needs two non-empty campaigns over the same drops");
  const std::size_t n = a.drops.size();
  RandomStream rng(seed, 0, StreamTag::bootstrap);
  std::vector<double> gaps(static_cast<std::size_t>(resamples));
  std::vector<double> xa, xb;
  for (int b_i = 0; b_i < resamples; ++b_i) {
    xa.clear();
    xb.clear();
    for (std::size_t i = 0; i < n; ++i) {
      const auto d = rng.below(n);
      xa.insert(xa.end(), a.drops[d].sinr_db.begin(), a.drops[d].sinr_db.end());
      xb.insert(xb.end(), b.drops[d].sinr_db.begin(), b.drops[d].sinr_db.end());
    }
    std::sort(xa.begin(), xa.end());
    std::sort(xb.begin(), xb.end());
    gaps[static_cast<std::size_t>(b_i)] = percentile_sorted(xa, pct) - percentile_sorted(xb, pct);
  }
  std::sort(gaps.begin(), gaps.end());
  const double tail = 100.0 * (1.0 - level) / 2.0;
  return {a.percentile(pct) - b.percentile(pct), percentile_sorted(gaps, tail),
          percentile_sorted(gaps, 100.0 - tail)};
}

}  // namespace ramimo
