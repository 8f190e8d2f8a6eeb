// Command-line front end: simulate, sweep and hwcalc.
//
// Exit codes: 0 success, 1 numerical failure, 2 usage/config/IO error.

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "ramimo/ramimo.hpp"

namespace fs = std::filesystem;
using namespace ramimo;

namespace {

/// Usage-level failure (bad flags, unreadable files); maps to exit code 2.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct RunFlags {
  std::string config_path;
  std::vector<std::string> modes;
  std::vector<std::string> sets;
  std::optional<std::string> tau, cap, nf_rep, nf_bs, margin, k_factor;
  std::optional<std::string> drops, seed, users;
  std::optional<std::string> phase;
  int threads = 0;
  std::string out = ".";
  bool no_svg = false;
};

void add_run_flags(CLI::App* app, RunFlags& f) {
  app->add_option("-c,--config", f.config_path, "JSON config file (or a run manifest)");
  app->add_option("--tau", f.tau, "target BS-noise / repeated-noise ratio [dB] (inf allowed)");
  app->add_option("--cap", f.cap, "repeater amplification cap [dB]");
  app->add_option("--nf-rep", f.nf_rep, "repeater noise figure [dB]");
  app->add_option("--nf-bs", f.nf_bs, "BS / AP noise figure [dB]");
  app->add_option("--margin", f.margin, "activation margin above the repeater noise floor [dB]");
  app->add_option("--k-factor", f.k_factor, "Ricean K-factor [dB]");
  app->add_option("--drops", f.drops, "number of Monte Carlo drops");
  app->add_option("--seed", f.seed, "64-bit campaign seed");
  app->add_option("--users", f.users, "users per drop");
  app->add_option("--phase", f.phase, "repeater response phase: random or zero")
      ->check(CLI::IsMember({"random", "zero"}));
  app->add_option("--set", f.sets, "override any config key: section.key=value")
      ->allow_extra_args(false);
  app->add_option("-j,--threads", f.threads, "worker threads (default: RAMIMO_THREADS or all cores)");
  app->add_option("-o,--out", f.out, "output directory");
  app->add_flag("--no-svg", f.no_svg, "skip SVG output");
}

ScenarioConfig resolve_config(const RunFlags& f, std::vector<Mode>* manifest_mode_list) {
  ScenarioConfig cfg;
  if (!f.config_path.empty()) {
    std::ifstream in(f.config_path);
    if (!in) throw UsageError("cannot open config file '" + f.config_path + "'");
    nlohmann::json root;
    try {
      in >> root;
    } catch (const nlohmann::json::parse_error& e) {
      throw ConfigError(f.config_path, e.what());
    }
    cfg = config_from_json(root);
    if (manifest_mode_list) *manifest_mode_list = manifest_modes(root);
  }
  auto set = [&](const std::optional<std::string>& v, const char* key) {
    if (v) apply_override(cfg, key, *v);
  };
  set(f.tau, "repeater.tau_db");
  set(f.cap, "repeater.gain_cap_db");
  set(f.nf_rep, "radio.rep_nf_db");
  set(f.nf_bs, "radio.bs_nf_db");
  set(f.margin, "repeater.activation_snr_margin_db");
  set(f.k_factor, "radio.k_factor_db");
  set(f.drops, "run.num_drops");
  set(f.seed, "run.seed");
  set(f.users, "scenario.num_users");
  if (f.phase) cfg.random_repeater_phase = (*f.phase == "random");
  for (const auto& kv : f.sets) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos) throw UsageError("--set expects section.key=value, got '" + kv + "'");
    apply_override(cfg, kv.substr(0, eq), kv.substr(eq + 1));
  }
  return validate_config(cfg);
}

std::vector<Mode> resolve_modes(const RunFlags& f, const ScenarioConfig& cfg,
                                const std::vector<Mode>& from_manifest) {
  if (!f.modes.empty()) {
    std::vector<Mode> modes;
    for (const auto& m : f.modes) modes.push_back(parse_mode(m));
    return modes;
  }
  if (!from_manifest.empty()) return from_manifest;
  return {cfg.mode};
}

int thread_count(const RunFlags& f) { return f.threads > 0 ? f.threads : default_thread_count(); }

std::ofstream open_out(const fs::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw UsageError("cannot write '" + path.string() + "'");
  return out;
}

std::string value_label(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  return fmt_exact(v);
}

/// Writes samples/cdf/percentiles (+ optional SVG) of a set of campaigns into
/// `dir` and returns the file names.
std::vector<std::string> write_run_files(const fs::path& dir,
                                         const std::vector<const CampaignResult*>& runs,
                                         const std::vector<std::string>& labels, bool svg,
                                         const std::string& title) {
  fs::create_directories(dir);
  std::vector<std::string> files;
  {
    auto out = open_out(dir / "samples.csv");
    write_samples_csv(out, runs);
    files.push_back("samples.csv");
  }
  {
    auto out = open_out(dir / "cdf.csv");
    write_cdf_csv(out, runs);
    files.push_back("cdf.csv");
  }
  {
    auto out = open_out(dir / "percentiles.csv");
    write_percentiles_csv(out, runs, labels);
    files.push_back("percentiles.csv");
  }
  if (svg) {
    std::vector<CdfSeries> series;
    for (std::size_t i = 0; i < runs.size(); ++i) series.push_back({labels[i], runs[i]->sorted_sinr_db});
    auto out = open_out(dir / "cdf.svg");
    write_cdf_svg(out, series, title);
    files.push_back("cdf.svg");
  }
  return files;
}

int cmd_simulate(const RunFlags& f, std::optional<std::uint64_t> dump_drop, const std::string& cmdline) {
  const auto start = std::chrono::steady_clock::now();
  std::vector<Mode> manifest_mode_list;
  auto cfg = resolve_config(f, &manifest_mode_list);
  const auto modes = resolve_modes(f, cfg, manifest_mode_list);
  cfg.mode = modes.front();
  const int threads = thread_count(f);

  std::vector<CampaignResult> results;
  std::vector<std::string> labels;
  for (Mode m : modes) {
    auto c = cfg;
    c.mode = m;
    results.push_back(run_campaign(c, threads));
    labels.emplace_back(to_string(m));
  }
  std::vector<const CampaignResult*> runs;
  for (const auto& r : results) runs.push_back(&r);

  const fs::path dir(f.out);
  auto files = write_run_files(dir, runs, labels, !f.no_svg, "Uplink SINR CDF");

  if (dump_drop) {
    auto c = cfg;
    c.mode = Mode::ramimo;
    const auto trace = trace_drop(c, *dump_drop);
    const std::string suffix = "_drop" + std::to_string(*dump_drop) + ".csv";
    auto ch = open_out(dir / ("channels" + suffix));
    write_channel_csv(ch, trace.channels);
    auto rp = open_out(dir / ("repeaters" + suffix));
    write_repeater_csv(rp, *dump_drop, trace.repeaters);
    files.push_back("channels" + suffix);
    files.push_back("repeaters" + suffix);
  }

  RunManifest manifest;
  manifest.config = cfg;
  manifest.modes = modes;
  manifest.command = cmdline;
  manifest.files = files;
  manifest.files.push_back("manifest.json");
  manifest.wall_clock_s =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  write_manifest(dir / "manifest.json", manifest);

  for (std::size_t i = 0; i < results.size(); ++i) {
    std::cout << labels[i] << ": " << results[i].sorted_sinr_db.size() << " samples, median "
              << fmt_fixed(results[i].percentile(50), 2) << " dB, 10th pct "
              << fmt_fixed(results[i].percentile(10), 2) << " dB\n";
  }
  std::cout << "wrote " << files.size() + 1 << " files to " << dir.string() << '\n';
  return 0;
}

int cmd_sweep(const RunFlags& f, const std::string& param_name, const std::vector<std::string>& values,
              const std::vector<std::string>& references, const std::string& cmdline) {
  const auto start = std::chrono::steady_clock::now();
  const auto param = parse_sweep_param(param_name);
  if (values.empty()) throw UsageError("--values needs at least one value");
  std::vector<Mode> manifest_mode_list;
  auto cfg = resolve_config(f, &manifest_mode_list);
  if (!f.modes.empty()) cfg.mode = parse_mode(f.modes.front());
  const int threads = thread_count(f);

  std::vector<double> parsed;
  for (const auto& v : values) {
    auto probe = cfg;
    const char* key = param == SweepParam::gain_cap_db ? "repeater.gain_cap_db"
                      : param == SweepParam::tau_db    ? "repeater.tau_db"
                                                       : "radio.rep_nf_db";
    apply_override(probe, key, v);
    validate_config(probe);
    parsed.push_back(param == SweepParam::gain_cap_db ? probe.gain_cap_db
                     : param == SweepParam::tau_db    ? probe.tau_db
                                                      : probe.rep_nf_db);
  }

  const auto campaigns = sweep(cfg, param, parsed, threads);
  const fs::path dir(f.out);
  std::vector<std::string> files;
  std::vector<const CampaignResult*> overlay;
  std::vector<std::string> labels;
  for (std::size_t i = 0; i < campaigns.size(); ++i) {
    const std::string label = std::string(to_string(param)) + "_" + value_label(parsed[i]);
    const std::string mode_label = std::string(to_string(cfg.mode));
    for (const auto& name : write_run_files(dir / label, {&campaigns[i]}, {mode_label}, !f.no_svg,
                                            "Uplink SINR CDF, " + label))
      files.push_back(label + "/" + name);
    overlay.push_back(&campaigns[i]);
    labels.push_back(mode_label + " " + std::string(to_string(param)) + "=" + value_label(parsed[i]));
  }

  std::vector<CampaignResult> refs;
  for (const auto& r : references) {
    auto c = cfg;
    c.mode = parse_mode(r);
    refs.push_back(run_campaign(c, threads));
  }
  for (const auto& r : refs) {
    overlay.push_back(&r);
    labels.emplace_back(to_string(r.config.mode));
  }

  fs::create_directories(dir);
  {
    auto out = open_out(dir / "sweep_percentiles.csv");
    write_percentiles_csv(out, overlay, labels);
    files.push_back("sweep_percentiles.csv");
  }
  if (!f.no_svg) {
    std::vector<CdfSeries> series;
    for (std::size_t i = 0; i < overlay.size(); ++i) series.push_back({labels[i], overlay[i]->sorted_sinr_db});
    auto out = open_out(dir / "overlay.svg");
    write_cdf_svg(out, series, "Uplink SINR CDF, sweep over " + std::string(to_string(param)));
    files.push_back("overlay.svg");
  }

  RunManifest manifest;
  manifest.config = cfg;
  manifest.modes = {cfg.mode};
  manifest.command = cmdline;
  manifest.files = files;
  manifest.files.push_back("manifest.json");
  manifest.wall_clock_s =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  write_manifest(dir / "manifest.json", manifest);

  std::cout << "label";
  for (double p : kReportedPercentiles) std::cout << ",p" << static_cast<int>(p);
  std::cout << '\n';
  for (std::size_t i = 0; i < overlay.size(); ++i) {
    std::cout << labels[i];
    for (const auto& [pct, v] : overlay[i]->percentiles) std::cout << ',' << fmt_fixed(v, 2);
    std::cout << '\n';
  }
  return 0;
}

// --- hwcalc -----------------------------------------------------------------

void print_lines(const std::vector<hw::BudgetLine>& lines, bool csv) {
  auto value = [](const hw::BudgetLine& l) {
    if (l.unit == "cells") return std::to_string(static_cast<std::uint64_t>(l.value));
    if (l.unit == "bool") return std::string(l.value != 0.0 ? "pass" : "fail");
    return fmt_fixed(l.value);
  };
  if (csv) {
    std::cout << "name,value,unit\n";
    for (const auto& l : lines) std::cout << l.name << ',' << value(l) << ',' << l.unit << '\n';
    return;
  }
  for (const auto& l : lines) {
    std::cout << l.name << " = " << value(l);
    if (!l.unit.empty() && l.unit != "bool") std::cout << ' ' << l.unit;
    std::cout << '\n';
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Repeater-assisted massive MIMO uplink simulator"};
  app.require_subcommand(1);
  app.set_version_flag("--version", kVersion);

  std::string cmdline;
  for (int i = 0; i < argc; ++i) cmdline += (i ? " " : "") + std::string(argv[i]);

  RunFlags sim_flags;
  std::optional<std::uint64_t> dump_drop;
  auto* simulate = app.add_subcommand("simulate", "run a Monte Carlo campaign");
  add_run_flags(simulate, sim_flags);
  simulate->add_option("-m,--mode", sim_flags.modes, "cmimo, dmimo, ramimo (comma separated)")
      ->delimiter(',');
  simulate->add_option("--dump-drop", dump_drop, "also write channel and repeater CSVs of this drop");

  RunFlags sweep_flags;
  std::string sweep_param;
  std::vector<std::string> sweep_values, sweep_refs;
  auto* sweep_cmd = app.add_subcommand("sweep", "one campaign per parameter value, paired seeds");
  add_run_flags(sweep_cmd, sweep_flags);
  sweep_cmd->add_option("-m,--mode", sweep_flags.modes, "architecture swept (default ramimo)");
  sweep_cmd->add_option("--param", sweep_param, "cap, tau or nf-rep")->required();
  sweep_cmd->add_option("--values", sweep_values, "comma separated values")->required()->delimiter(',');
  sweep_cmd->add_option("--reference", sweep_refs, "reference modes for the overlay, e.g. cmimo,dmimo")
      ->delimiter(',');

  auto* hwcalc = app.add_subcommand("hwcalc", "repeater hardware budget calculators");
  hwcalc->require_subcommand(1);
  bool csv = false;
  hwcalc->add_flag("--csv", csv, "machine-readable output");
  std::vector<hw::BudgetLine> hw_lines;

  double cp = 28.0, aclr = 40.0;
  auto* pa = hwcalc->add_subcommand("pa-out", "PA output power for a target ACLR")->fallthrough();
  pa->add_option("--cp", cp, "output 1-dB compression point [dBm]")->required();
  pa->add_option("--aclr", aclr, "target ACLR [dB]")->required();
  pa->callback([&] { hw_lines = {{"pa_output_power", hw::pa_output_power_dbm(cp, aclr), "dBm"}}; });

  std::vector<double> losses;
  double lna = 3.0;
  auto* nf = hwcalc->add_subcommand("nf", "cascaded noise figure")->fallthrough();
  nf->add_option("--losses", losses, "passive losses ahead of the LNA [dB]")->delimiter(',');
  nf->add_option("--lna", lna, "LNA noise figure [dB]")->required();
  nf->callback([&] { hw_lines = {{"noise_figure", hw::cascade_nf_db(losses, lna), "dB"}}; });

  double gain_err = 0.01, phase_err = 1.0;
  int stages = 2;
  bool rss = false;
  auto* evm = hwcalc->add_subcommand("evm", "EVM from I/Q gain and phase mismatch")->fallthrough();
  evm->add_option("--gain-err", gain_err, "I/Q gain error (fraction)");
  evm->add_option("--phase-err", phase_err, "I/Q phase error [deg]");
  evm->add_option("--stages", stages, "conversion stages with the same errors");
  evm->add_flag("--rss", rss, "independent stages (root-sum-square)");
  evm->callback([&] {
    const auto mode = rss ? hw::EvmCombining::rss : hw::EvmCombining::coherent;
    hw_lines = {{"iq_evm", 100.0 * hw::iq_evm_fraction(gain_err, phase_err, stages, mode), "%"}};
  });

  int order = 5;
  double bandwidth = 10e6, freq = 0.0;
  auto* delay = hwcalc->add_subcommand("delay", "Butterworth lowpass group delay")->fallthrough();
  delay->add_option("--order", order, "filter order");
  delay->add_option("--bandwidth", bandwidth, "cutoff frequency [Hz]");
  delay->add_option("--freq", freq, "evaluation frequency [Hz]");
  delay->callback([&] {
    hw_lines = {{"group_delay", 1e9 * hw::butterworth_group_delay_s(order, bandwidth, freq), "ns"}};
  });

  double isolation = 50.0, margin = 10.0;
  auto* stable = hwcalc->add_subcommand("stable-gain", "maximum stable single-antenna gain")->fallthrough();
  stable->add_option("--isolation", isolation, "PA-to-LNA isolation [dB]");
  stable->add_option("--margin", margin, "oscillation margin [dB]");
  stable->callback([&] { hw_lines = {{"max_stable_gain", hw::max_stable_gain_db(isolation, margin), "dB"}}; });

  double ris_gain = 60.0;
  auto* ris = hwcalc->add_subcommand("ris-cells", "RIS unit cells matching a repeater gain")->fallthrough();
  ris->add_option("--gain", ris_gain, "repeater power gain [dB]")->required();
  ris->callback([&] {
    hw_lines = {{"ris_equivalent_cells", static_cast<double>(hw::ris_equivalent_cells(ris_gain)), "cells"}};
  });

  std::vector<double> delays;
  double cyclic_prefix = 4.7e-6;
  auto* budget = hwcalc->add_subcommand("delay-budget", "sum of delays against the cyclic prefix")->fallthrough();
  budget->add_option("--delays", delays, "component delays [s]")->delimiter(',');
  budget->add_option("--cp", cyclic_prefix, "cyclic prefix [s]");
  budget->callback([&] {
    const auto v = hw::delay_budget_check(delays, cyclic_prefix);
    hw_lines = {{"total_delay", v.total_s * 1e9, "ns"},
                {"delay_to_cp_ratio", v.ratio, ""},
                {"delay_budget_pass", v.pass ? 1.0 : 0.0, "bool"}};
  });

  hw::RepeaterBudget rb;
  auto* report = hwcalc->add_subcommand("report", "full repeater budget report")->fallthrough();
  report->add_option("--filter-loss", rb.filter_loss_db, "filter loss [dB]");
  report->add_option("--switch-loss", rb.switch_loss_db, "switch loss [dB]");
  report->add_option("--lna", rb.lna_nf_db, "LNA noise figure [dB]");
  report->add_option("--cp", rb.cp_dbm, "PA compression point [dBm]");
  report->add_option("--aclr", rb.target_aclr_db, "target ACLR [dB]");
  report->add_option("--gain-err", rb.iq_gain_err, "I/Q gain error (fraction)");
  report->add_option("--phase-err", rb.iq_phase_err_deg, "I/Q phase error [deg]");
  report->add_option("--order", rb.filter_order, "filter order");
  report->add_option("--bandwidth", rb.filter_bandwidth_hz, "filter cutoff [Hz]");
  report->add_option("--processing-delay", rb.processing_delay_s, "extra processing delay [s]");
  report->add_option("--isolation", rb.isolation_db, "PA-to-LNA isolation [dB]");
  report->add_option("--margin", rb.stability_margin_db, "oscillation margin [dB]");
  report->add_option("--cyclic-prefix", rb.cyclic_prefix_s, "cyclic prefix [s]");
  report->callback([&] { hw_lines = hw::evaluate_budget(rb); });

  try {
    app.parse(argc, argv);
    if (*simulate) return cmd_simulate(sim_flags, dump_drop, cmdline);
    if (*sweep_cmd) return cmd_sweep(sweep_flags, sweep_param, sweep_values, sweep_refs, cmdline);
    print_lines(hw_lines, csv);
    return 0;
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::domain_error& e) {
    std::cerr << "input out of domain: " << e.what() << '\n';
    return 2;
  } catch (const NumericalError& e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}
