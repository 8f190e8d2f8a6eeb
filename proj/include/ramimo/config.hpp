#pragma once

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <type_traits>

#include "json.hpp"
#include "units.hpp"

namespace ramimo {

enum class Mode { cmimo, dmimo, ramimo };

inline std::string_view to_string(Mode mode) {
  switch (mode) {
    case Mode::cmimo: return "cmimo";
    case Mode::dmimo: return "dmimo";
    case Mode::ramimo: return "ramimo";
  }
  return "?";
}

/// Raised for any invalid configuration value; `field()` names the offending
/// key in dotted form (e.g. "scenario.num_sites").
class ConfigError : public std::invalid_argument {
 public:
  ConfigError(std::string field, const std::string& what)
      : std::invalid_argument(field + ": " + what), field_(std::move(field)) {}
  const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

inline Mode parse_mode(std::string_view text) {
  std::string lower(text);
  std::transform(lower.begin(), lower.end(), lower.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  lower.erase(std::remove(lower.begin(), lower.end(), '-'), lower.end());
  if (lower == "cmimo") return Mode::cmimo;
  if (lower == "dmimo") return Mode::dmimo;
  if (lower == "ramimo") return Mode::ramimo;
  throw ConfigError("run.mode", "unknown mode '" + std::string(text) +
                                    "' (expected cmimo, dmimo or ramimo)");
}

/// Every tunable of a run. Defaults reproduce the reference urban-micro
/// setup: 400 m square, 8 users, 64 repeater/AP sites, 64-element BS array.
struct ScenarioConfig {
  // scenario
  double area_side = 400.0;                 // m
  int num_users = 8;
  int num_sites = 64;
  int bs_antennas = 64;
  double element_spacing = 0.5;             // wavelengths
  double bs_height = 10.0;                  // m
  double terminal_height = 1.5;             // m
  double site_height_above_terminal = 10.0; // m

  // radio
  double carrier_freq_ghz = 3.6;
  double bandwidth_hz = 20e6;
  double temperature_k = 290.0;
  double bs_nf_db = 5.0;  // also used for D-MIMO access points
  double rep_nf_db = 5.0;
  double user_tx_power_dbm = 20.0;
  double rep_max_out_dbm = 20.0;
  double k_factor_db = 10.0;

  // repeater control
  double gain_cap_db = 45.0;
  double tau_db = 40.0;
  double activation_snr_margin_db = 10.0;
  bool random_repeater_phase = true;

  // run
  Mode mode = Mode::ramimo;
  int num_drops = 1000;
  std::uint64_t seed = 1;

  double wavelength_m() const { return kSpeedOfLight / (carrier_freq_ghz * 1e9); }
  int mesh_side() const {
    return static_cast<int>(std::lround(std::sqrt(static_cast<double>(num_sites))));
  }
};

namespace detail {

inline void require(bool ok, const char* field, const std::string& what) {
  if (!ok) throw ConfigError(field, what);
}

inline void require_finite(double v, const char* field) {
  require(std::isfinite(v), field, "must be finite");
}

inline void require_positive(double v, const char* field) {
  require_finite(v, field);
  require(v > 0.0, field, "must be positive");
}

inline void require_non_negative(double v, const char* field) {
  require_finite(v, field);
  require(v >= 0.0, field, "must be non-negative");
}

}  // namespace detail

/// Checks every field and returns the config unchanged if it is usable.
/// Defaults are supplied by the struct initialisers, so a config built from
/// an empty file already carries them.
inline ScenarioConfig validate_config(ScenarioConfig cfg) {
  using namespace detail;
  require_positive(cfg.area_side, "scenario.area_side");
  require(cfg.num_users >= 1, "scenario.num_users", "must be at least 1");
  require(cfg.num_sites >= 1, "scenario.num_sites", "must be at least 1");
  {
    const int side = cfg.mesh_side();
    require(side * side == cfg.num_sites, "scenario.num_sites",
            std::to_string(cfg.num_sites) + " is not a perfect square");
  }
  require(cfg.bs_antennas >= 1, "scenario.bs_antennas", "must be at least 1");
  require_positive(cfg.element_spacing, "scenario.element_spacing");
  require_non_negative(cfg.bs_height, "scenario.bs_height");
  require_non_negative(cfg.terminal_height, "scenario.terminal_height");
  require_non_negative(cfg.site_height_above_terminal,
                       "scenario.site_height_above_terminal");

  require_positive(cfg.carrier_freq_ghz, "radio.carrier_freq_ghz");
  require_positive(cfg.bandwidth_hz, "radio.bandwidth_hz");
  require_positive(cfg.temperature_k, "radio.temperature_k");
  require_non_negative(cfg.bs_nf_db, "radio.bs_nf_db");
  require_non_negative(cfg.rep_nf_db, "radio.rep_nf_db");
  require_finite(cfg.user_tx_power_dbm, "radio.user_tx_power_dbm");
  require_finite(cfg.rep_max_out_dbm, "radio.rep_max_out_dbm");
  // +inf is the pure line-of-sight limit.
  require(!std::isnan(cfg.k_factor_db) && cfg.k_factor_db != -kInf,
          "radio.k_factor_db", "must be a number or +inf");

  require_finite(cfg.gain_cap_db, "repeater.gain_cap_db");
  // tau = +inf and margin = +/-inf are the C-MIMO reduction limits.
  require(!std::isnan(cfg.tau_db) && cfg.tau_db != -kInf, "repeater.tau_db",
          "must be a number or +inf");
  require(!std::isnan(cfg.activation_snr_margin_db),
          "repeater.activation_snr_margin_db", "must be a number");

  require(cfg.num_drops >= 1, "run.num_drops", "must be at least 1");
  return cfg;
}

// --- JSON (de)serialisation -------------------------------------------------

namespace detail {

inline double number_or_inf(const nlohmann::json& v, const char* field) {
  if (v.is_number()) return v.get<double>();
  if (v.is_string()) {
    const auto s = v.get<std::string>();
    if (s == "inf" || s == "+inf" || s == "infinity") return kInf;
    if (s == "-inf" || s == "-infinity") return -kInf;
  }
  throw ConfigError(field, "expected a number");
}

inline nlohmann::json encode_number(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  return v;
}

template <class T>
void read_field(const nlohmann::json& section, const char* section_name,
                const char* key, T& out) {
  if (!section.contains(key)) return;
  const std::string field = std::string(section_name) + "." + key;
  const auto& v = section.at(key);
  if constexpr (std::is_same_v<T, double>) {
    out = number_or_inf(v, field.c_str());
  } else if constexpr (std::is_same_v<T, bool>) {
    if (!v.is_boolean()) throw ConfigError(field, "expected true or false");
    out = v.get<bool>();
  } else if constexpr (std::is_same_v<T, std::uint64_t>) {
    if (!v.is_number_unsigned()) throw ConfigError(field, "expected an unsigned integer");
    out = v.get<std::uint64_t>();
  } else {
    if (!v.is_number_integer()) throw ConfigError(field, "expected an integer");
    out = v.get<T>();
  }
}

}  // namespace detail

inline nlohmann::json to_json(const ScenarioConfig& cfg) {
  using detail::encode_number;
  nlohmann::json j;
  j["scenario"] = {
      {"area_side", cfg.area_side},
      {"num_users", cfg.num_users},
      {"num_sites", cfg.num_sites},
      {"bs_antennas", cfg.bs_antennas},
      {"element_spacing", cfg.element_spacing},
      {"bs_height", cfg.bs_height},
      {"terminal_height", cfg.terminal_height},
      {"site_height_above_terminal", cfg.site_height_above_terminal},
  };
  j["radio"] = {
      {"carrier_freq_ghz", cfg.carrier_freq_ghz},
      {"bandwidth_hz", cfg.bandwidth_hz},
      {"temperature_k", cfg.temperature_k},
      {"bs_nf_db", cfg.bs_nf_db},
      {"rep_nf_db", cfg.rep_nf_db},
      {"user_tx_power_dbm", cfg.user_tx_power_dbm},
      {"rep_max_out_dbm", cfg.rep_max_out_dbm},
      {"k_factor_db", encode_number(cfg.k_factor_db)},
  };
  j["repeater"] = {
      {"gain_cap_db", cfg.gain_cap_db},
      {"tau_db", encode_number(cfg.tau_db)},
      {"activation_snr_margin_db", encode_number(cfg.activation_snr_margin_db)},
      {"random_repeater_phase", cfg.random_repeater_phase},
  };
  j["run"] = {
      {"mode", std::string(to_string(cfg.mode))},
      {"num_drops", cfg.num_drops},
      {"seed", cfg.seed},
  };
  return j;
}

/// Reads a config object. Missing keys keep their defaults; unknown keys are
/// rejected so that typos do not silently fall back to defaults. A run
/// manifest (an object with a "config" member) is accepted as well.
inline ScenarioConfig config_from_json(const nlohmann::json& root) {
  const nlohmann::json& j =
      root.contains("config") && root.at("config").is_object() ? root.at("config") : root;
  if (!j.is_object()) throw ConfigError("<root>", "expected a JSON object");

  ScenarioConfig cfg;
  const nlohmann::json empty = nlohmann::json::object();
  auto section = [&](const char* name) -> const nlohmann::json& {
    if (!j.contains(name)) return empty;
    if (!j.at(name).is_object()) throw ConfigError(name, "expected an object");
    return j.at(name);
  };

  const auto reference = to_json(ScenarioConfig{});
  for (const auto& [name, body] : j.items()) {
    if (!reference.contains(name)) throw ConfigError(name, "unknown section");
    if (!body.is_object()) throw ConfigError(name, "expected an object");
    for (const auto& [key, value] : body.items()) {
      if (!reference.at(name).contains(key))
        throw ConfigError(name + "." + key, "unknown key");
    }
  }

  using detail::read_field;
  const auto& sc = section("scenario");
  read_field(sc, "scenario", "area_side", cfg.area_side);
  read_field(sc, "scenario", "num_users", cfg.num_users);
  read_field(sc, "scenario", "num_sites", cfg.num_sites);
  read_field(sc, "scenario", "bs_antennas", cfg.bs_antennas);
  read_field(sc, "scenario", "element_spacing", cfg.element_spacing);
  read_field(sc, "scenario", "bs_height", cfg.bs_height);
  read_field(sc, "scenario", "terminal_height", cfg.terminal_height);
  read_field(sc, "scenario", "site_height_above_terminal", cfg.site_height_above_terminal);

  const auto& ra = section("radio");
  read_field(ra, "radio", "carrier_freq_ghz", cfg.carrier_freq_ghz);
  read_field(ra, "radio", "bandwidth_hz", cfg.bandwidth_hz);
  read_field(ra, "radio", "temperature_k", cfg.temperature_k);
  read_field(ra, "radio", "bs_nf_db", cfg.bs_nf_db);
  read_field(ra, "radio", "rep_nf_db", cfg.rep_nf_db);
  read_field(ra, "radio", "user_tx_power_dbm", cfg.user_tx_power_dbm);
  read_field(ra, "radio", "rep_max_out_dbm", cfg.rep_max_out_dbm);
  read_field(ra, "radio", "k_factor_db", cfg.k_factor_db);

  const auto& re = section("repeater");
  read_field(re, "repeater", "gain_cap_db", cfg.gain_cap_db);
  read_field(re, "repeater", "tau_db", cfg.tau_db);
  read_field(re, "repeater", "activation_snr_margin_db", cfg.activation_snr_margin_db);
  read_field(re, "repeater", "random_repeater_phase", cfg.random_repeater_phase);

  const auto& run = section("run");
  if (run.contains("mode")) {
    if (!run.at("mode").is_string()) throw ConfigError("run.mode", "expected a string");
    cfg.mode = parse_mode(run.at("mode").get<std::string>());
  }
  read_field(run, "run", "num_drops", cfg.num_drops);
  read_field(run, "run", "seed", cfg.seed);
  return cfg;
}

/// Loads a config file. Throws std::runtime_error naming the path when the
/// file cannot be opened and ConfigError on malformed content.
inline ScenarioConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config file '" + path + "'");
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError(path, e.what());
  }
  return config_from_json(j);
}

/// Sets one dotted key ("repeater.tau_db") from its textual value, as given
/// on the command line.
inline void apply_override(ScenarioConfig& cfg, const std::string& key,
                           const std::string& value) {
  const auto dot = key.find('.');
  if (dot == std::string::npos) throw ConfigError(key, "expected section.key");
  nlohmann::json patch = to_json(cfg);
  const std::string section = key.substr(0, dot);
  const std::string name = key.substr(dot + 1);
  if (!patch.contains(section) || !patch[section].contains(name))
    throw ConfigError(key, "unknown key");
  nlohmann::json parsed;
  try {
    parsed = nlohmann::json::parse(value);
  } catch (const nlohmann::json::parse_error&) {
    parsed = value;  // bare strings such as "ramimo" or "inf"
  }
  patch[section][name] = parsed;
  cfg = config_from_json(patch);
}

}  // namespace ramimo
