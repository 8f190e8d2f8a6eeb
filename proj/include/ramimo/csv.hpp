#pragma once

#include <charconv>
#include <cmath>
#include <ostream>
#include <string>
#include <system_error>
#include <vector>

#include "channel.hpp"
#include "montecarlo.hpp"
#include "repeater.hpp"

namespace ramimo {

/// Fixed-point with 6 decimals, independent of the global locale.
inline std::string fmt_fixed(double v, int precision = 6) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::fixed, precision);
  if (res.ec != std::errc{}) return "nan";
  return std::string(buf, res.ptr);
}

/// Shortest round-trip representation.
inline std::string fmt_exact(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

/// drop,user,mode,sinr_db ordered by (drop, user).
inline void write_samples_csv(std::ostream& out, const std::vector<const CampaignResult*>& runs) {
  out << "drop,user,mode,sinr_db\n";
  for (const auto* run : runs) {
    for (const auto& d : run->drops) {
      for (std::size_t k = 0; k < d.sinr_db.size(); ++k)
        out << d.drop_index << ',' << k << ',' << to_string(d.mode) << ','
            << fmt_fixed(d.sinr_db[k]) << '\n';
    }
  }
}

/// mode,sinr_db,cdf: the pooled empirical CDF of each run.
inline void write_cdf_csv(std::ostream& out, const std::vector<const CampaignResult*>& runs) {
  out << "mode,sinr_db,cdf\n";
  for (const auto* run : runs) {
    for (const auto& [x, f] : empirical_cdf(run->sorted_sinr_db))
      out << to_string(run->config.mode) << ',' << fmt_fixed(x) << ',' << fmt_fixed(f) << '\n';
  }
}

/// label,p1,p5,...,p99 (one row per run).
inline void write_percentiles_csv(std::ostream& out, const std::vector<const CampaignResult*>& runs,
                                  const std::vector<std::string>& labels) {
  out << "label";
  for (double p : kReportedPercentiles) out << ",p" << static_cast<int>(p);
  out << '\n';
  for (std::size_t i = 0; i < runs.size(); ++i) {
    out << labels.at(i);
    for (const auto& [pct, v] : runs[i]->percentiles) out << ',' << fmt_fixed(v);
    out << '\n';
  }
}

/// link,i,j,los,pathloss_db,re,im
///   user_bs:   i = antenna, j = user
///   user_site: i = site,    j = user
///   site_bs:   i = antenna, j = site
inline void write_channel_csv(std::ostream& out, const ChannelRealization& ch) {
  out << "link,i,j,los,pathloss_db,re,im\n";
  auto row = [&](const char* link, int i, int j, const LinkState& s, cd v) {
    out << link << ',' << i << ',' << j << ',' << (s.is_los ? 1 : 0) << ','
        << fmt_fixed(s.pathloss_db) << ',' << fmt_exact(v.real()) << ',' << fmt_exact(v.imag())
        << '\n';
  };
  for (int k = 0; k < ch.num_users(); ++k)
    for (int m = 0; m < ch.num_antennas(); ++m) row("user_bs", m, k, ch.user_bs[k], ch.h_direct(m, k));
  for (int r = 0; r < ch.num_sites(); ++r)
    for (int k = 0; k < ch.num_users(); ++k)
      row("user_site", r, k, ch.user_site[r * ch.num_users() + k], ch.f_user_site(r, k));
  for (int r = 0; r < ch.num_sites(); ++r)
    for (int m = 0; m < ch.num_antennas(); ++m) row("site_bs", m, r, ch.site_bs[r], ch.h_site_bs(m, r));
}

/// drop,repeater,active,gain_db,limit,input_power_dbm
inline void write_repeater_csv(std::ostream& out, std::uint64_t drop, const RepeaterState& st) {
  out << "drop,repeater,active,gain_db,limit,input_power_dbm\n";
  for (std::size_t r = 0; r < st.active.size(); ++r) {
    out << drop << ',' << r << ',' << (st.active[r] ? 1 : 0) << ','
        << (st.active[r] ? fmt_fixed(linear_to_db(st.amp_gain_linear[r])) : std::string("-inf")) << ','
        << to_string(st.limit[r]) << ',' << fmt_fixed(watts_to_dbm(st.input_power[r])) << '\n';
  }
}

}  // namespace ramimo
