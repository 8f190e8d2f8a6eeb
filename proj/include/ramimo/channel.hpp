#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

#include <Eigen/Dense>

#include "config.hpp"
#include "rng.hpp"
#include "scenario.hpp"
#include "units.hpp"

namespace ramimo {

using cd = std::complex<double>;
using CVector = Eigen::VectorXcd;
using CMatrix = Eigen::MatrixXcd;

/// Validity floor of the UMi distance-dependent models.
inline constexpr double kMinLinkDistance = 10.0;  // m

struct LinkState {
  double distance_2d = 0.0;  // m, after the 10 m clamp
  double distance_3d = 0.0;  // m, from the clamped 2D distance
  bool is_los = false;
  double pathloss_db = 0.0;
  double los_phase = 0.0;  // rad, -2*pi*d3d/lambda mod 2*pi

  double gain_linear() const { return std::pow(10.0, -pathloss_db / 10.0); }
};

struct ArrayGeometry {
  int num_elements = 64;
  double element_spacing = 0.5;  // wavelengths
};

/// UMi street-canyon LoS probability:
///   P(d) = min(18/d, 1) * (1 - exp(-d/36)) + exp(-d/36)
inline double los_probability(double d_2d) {
  if (d_2d <= 18.0) return 1.0;
  const double e = std::exp(-d_2d / 36.0);
  return (18.0 / d_2d) * (1.0 - e) + e;
}

/// UMi pathloss in dB, distance clamped to kMinLinkDistance.
///   LoS:  22.0 log10(d) + 28.0 + 20 log10(fc)
///   NLoS: 36.7 log10(d) + 22.7 + 26 log10(fc)
inline double pathloss_db(double d_3d, bool is_los, double fc_ghz) {
  const double d = std::max(d_3d, kMinLinkDistance);
  if (is_los) return 22.0 * std::log10(d) + 28.0 + 20.0 * std::log10(fc_ghz);
  return 36.7 * std::log10(d) + 22.7 + 26.0 * std::log10(fc_ghz);
}

/// ULA response; element m has phase 2*pi*spacing*m*sin(azimuth), azimuth
/// measured from broadside.
inline CVector steering_vector(const ArrayGeometry& geom, double azimuth) {
  CVector a(geom.num_elements);
  const double step = 2.0 * std::numbers::pi * geom.element_spacing * std::sin(azimuth);
  for (int m = 0; m < geom.num_elements; ++m) a[m] = std::polar(1.0, step * m);
  return a;
}

/// Azimuth of `target` seen from an array at `origin`. The array axis is x,
/// broadside is +y.
inline double array_azimuth(const Point3& origin, const Point3& target) {
  return std::atan2(target.x - origin.x, target.y - origin.y);
}

/// Thermal noise k*T*B*F in watts.
inline double noise_power_linear(double bandwidth_hz, double temperature_k, double nf_db) {
  return kBoltzmann * temperature_k * bandwidth_hz * db_to_linear(nf_db);
}

/// Geometry and LoS state of one link; consumes one uniform from `rng`.
inline LinkState make_link_state(const Point3& a, const Point3& b, double wavelength_m,
                                 double fc_ghz, RandomStream& rng) {
  LinkState s;
  const double exact_3d = distance_3d(a, b);
  s.distance_2d = std::max(distance_2d(a, b), kMinLinkDistance);
  s.distance_3d = std::hypot(s.distance_2d, a.z - b.z);
  s.is_los = rng.uniform() < los_probability(s.distance_2d);
  s.pathloss_db = pathloss_db(s.distance_3d, s.is_los, fc_ghz);
  const double two_pi = 2.0 * std::numbers::pi;
  s.los_phase = std::fmod(-two_pi * exact_3d / wavelength_m, two_pi);
  if (s.los_phase < 0.0) s.los_phase += two_pi;
  return s;
}

namespace detail {

// Split of the channel power between specular and diffuse parts.
struct RiceanWeights {
  double specular;
  double diffuse;
};

inline RiceanWeights ricean_weights(bool is_los, double k_db) {
  if (!is_los) return {0.0, 1.0};
  if (k_db == kInf) return {1.0, 0.0};
  const double k = db_to_linear(k_db);
  return {std::sqrt(k / (k + 1.0)), std::sqrt(1.0 / (k + 1.0))};
}

}  // namespace detail

/// Array channel of one link with unit-mean fading scaled by the pathloss.
/// Always consumes M complex normals so the stream position does not depend
/// on the LoS state.
inline CVector draw_fading_vector(const LinkState& link, double azimuth,
                                  const ArrayGeometry& geom, double k_db,
                                  RandomStream& rng) {
  const auto w = detail::ricean_weights(link.is_los, k_db);
  const double amp = std::sqrt(link.gain_linear());
  CVector h(geom.num_elements);
  for (int m = 0; m < geom.num_elements; ++m) h[m] = w.diffuse * rng.complex_normal();
  if (w.specular > 0.0) {
    h += (w.specular * std::polar(1.0, link.los_phase)) * steering_vector(geom, azimuth);
  }
  return amp * h;
}

/// Scalar specialisation (single-antenna endpoints).
inline cd draw_scalar_link(const LinkState& link, double k_db, RandomStream& rng) {
  const auto w = detail::ricean_weights(link.is_los, k_db);
  const double amp = std::sqrt(link.gain_linear());
  const cd diffuse = rng.complex_normal();
  return amp * (w.specular * std::polar(1.0, link.los_phase) + w.diffuse * diffuse);
}

/// All channel coefficients of one drop.
struct ChannelRealization {
  CMatrix h_direct;     // M x K, user -> BS array
  CMatrix f_user_site;  // R x K, user -> site
  CMatrix h_site_bs;    // M x R, site -> BS array
  std::vector<LinkState> user_bs;    // K
  std::vector<LinkState> user_site;  // R*K, index r*K + k
  std::vector<LinkState> site_bs;    // R

  int num_antennas() const { return static_cast<int>(h_direct.rows()); }
  int num_users() const { return static_cast<int>(h_direct.cols()); }
  int num_sites() const { return static_cast<int>(f_user_site.rows()); }
};

/// Draws every LoS state first (user->BS, user->site, site->BS), then every
/// fading coefficient in the same order.
inline ChannelRealization synthesize_channels(const Deployment& dep, const ScenarioConfig& cfg,
                                              RandomStream& rng) {
  const ArrayGeometry geom{cfg.bs_antennas, cfg.element_spacing};
  const double lambda = cfg.wavelength_m();
  const double fc = cfg.carrier_freq_ghz;
  const auto num_users = dep.user_positions.size();
  const auto num_sites = dep.site_positions.size();

  ChannelRealization ch;
  ch.user_bs.reserve(num_users);
  for (const auto& u : dep.user_positions)
    ch.user_bs.push_back(make_link_state(u, dep.bs_position, lambda, fc, rng));
  ch.user_site.reserve(num_sites * num_users);
  for (const auto& s : dep.site_positions)
    for (const auto& u : dep.user_positions)
      ch.user_site.push_back(make_link_state(u, s, lambda, fc, rng));
  ch.site_bs.reserve(num_sites);
  for (const auto& s : dep.site_positions)
    ch.site_bs.push_back(make_link_state(s, dep.bs_position, lambda, fc, rng));

  const auto K = static_cast<Eigen::Index>(num_users);
  const auto R = static_cast<Eigen::Index>(num_sites);
  ch.h_direct.resize(geom.num_elements, K);
  for (Eigen::Index k = 0; k < K; ++k) {
    const double az = array_azimuth(dep.bs_position, dep.user_positions[k]);
    ch.h_direct.col(k) = draw_fading_vector(ch.user_bs[k], az, geom, cfg.k_factor_db, rng);
  }
  ch.f_user_site.resize(R, K);
  for (Eigen::Index r = 0; r < R; ++r)
    for (Eigen::Index k = 0; k < K; ++k)
      ch.f_user_site(r, k) = draw_scalar_link(ch.user_site[r * K + k], cfg.k_factor_db, rng);
  ch.h_site_bs.resize(geom.num_elements, R);
  for (Eigen::Index r = 0; r < R; ++r) {
    const double az = array_azimuth(dep.bs_position, dep.site_positions[r]);
    ch.h_site_bs.col(r) = draw_fading_vector(ch.site_bs[r], az, geom, cfg.k_factor_db, rng);
  }
  return ch;
}

inline ChannelRealization synthesize_channels(const Deployment& dep, const ScenarioConfig& cfg,
                                              std::uint64_t drop_index) {
  RandomStream rng(cfg.seed, drop_index, StreamTag::channel);
  return synthesize_channels(dep, cfg, rng);
}

}  // namespace ramimo
