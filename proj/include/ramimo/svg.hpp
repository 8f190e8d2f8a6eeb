#pragma once

#include <algorithm>
#include <cmath>
#include <ostream>
#include <string>
#include <vector>

#include "csv.hpp"

namespace ramimo {

struct CdfSeries {
  std::string label;
  std::vector<double> sorted;  // ascending samples
};

namespace detail {

inline std::string xml_escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

inline double nice_step(double span, int target_ticks) {
  const double raw = span / target_ticks;
  const double mag = std::pow(10.0, std::floor(std::log10(raw)));
  for (double m : {1.0, 2.0, 5.0, 10.0})
    if (raw <= m * mag) return m * mag;
  return 10.0 * mag;
}

}  // namespace detail

/// Writes a self-contained SVG with one empirical-CDF polyline per series,
/// SINR [dB] on x and CDF on y. At most `max_points` vertices per series.
inline void write_cdf_svg(std::ostream& out, const std::vector<CdfSeries>& series,
                          const std::string& title = "SINR CDF", std::size_t max_points = 600) {
  constexpr double width = 720, height = 480;
  constexpr double left = 70, right = 180, top = 40, bottom = 60;
  const double plot_w = width - left - right;
  const double plot_h = height - top - bottom;

  double lo = 0.0, hi = 1.0;
  bool any = false;
  for (const auto& s : series) {
    if (s.sorted.empty()) continue;
    lo = any ? std::min(lo, s.sorted.front()) : s.sorted.front();
    hi = any ? std::max(hi, s.sorted.back()) : s.sorted.back();
    any = true;
  }
  if (!(hi > lo)) hi = lo + 1.0;
  const double step = detail::nice_step(hi - lo, 8);
  lo = std::floor(lo / step) * step;
  hi = std::ceil(hi / step) * step;

  auto px = [&](double x) { return left + (x - lo) / (hi - lo) * plot_w; };
  auto py = [&](double f) { return top + (1.0 - f) * plot_h; };
  auto num = [](double v) { return fmt_fixed(v, 2); };

  static const char* palette[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd",
                                  "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf"};

  out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
      << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << num(width) << "\" height=\""
      << num(height) << "\" viewBox=\"0 0 " << num(width) << ' ' << num(height) << "\">\n"
      << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
      << "<text x=\"" << num(left + plot_w / 2) << "\" y=\"24\" text-anchor=\"middle\" "
      << "font-family=\"sans-serif\" font-size=\"15\">" << detail::xml_escape(title) << "</text>\n";

  // grid and ticks
  out << "<g font-family=\"sans-serif\" font-size=\"11\" stroke-width=\"1\">\n";
  for (double x = lo; x <= hi + step * 1e-9; x += step) {
    out << "<line x1=\"" << num(px(x)) << "\" y1=\"" << num(top) << "\" x2=\"" << num(px(x))
        << "\" y2=\"" << num(top + plot_h) << "\" stroke=\"#dddddd\"/>\n"
        << "<text x=\"" << num(px(x)) << "\" y=\"" << num(top + plot_h + 16)
        << "\" text-anchor=\"middle\">" << fmt_fixed(x, step < 1 ? 1 : 0) << "</text>\n";
  }
  for (int i = 0; i <= 10; ++i) {
    const double f = i / 10.0;
    out << "<line x1=\"" << num(left) << "\" y1=\"" << num(py(f)) << "\" x2=\""
        << num(left + plot_w) << "\" y2=\"" << num(py(f)) << "\" stroke=\"#dddddd\"/>\n"
        << "<text x=\"" << num(left - 6) << "\" y=\"" << num(py(f) + 4)
        << "\" text-anchor=\"end\">" << fmt_fixed(f, 1) << "</text>\n";
  }
  out << "</g>\n"
      << "<rect x=\"" << num(left) << "\" y=\"" << num(top) << "\" width=\"" << num(plot_w)
      << "\" height=\"" << num(plot_h) << "\" fill=\"none\" stroke=\"black\"/>\n"
      << "<text x=\"" << num(left + plot_w / 2) << "\" y=\"" << num(height - 18)
      << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\">SINR [dB]</text>\n"
      << "<text x=\"18\" y=\"" << num(top + plot_h / 2) << "\" text-anchor=\"middle\" "
      << "font-family=\"sans-serif\" font-size=\"13\" transform=\"rotate(-90 18 "
      << num(top + plot_h / 2) << ")\">CDF</text>\n";

  for (std::size_t s = 0; s < series.size(); ++s) {
    const auto& data = series[s].sorted;
    const char* color = palette[s % std::size(palette)];
    if (!data.empty()) {
      const std::size_t n = data.size();
      const std::size_t stride = std::max<std::size_t>(1, n / max_points);
      out << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.6\" points=\"";
      for (std::size_t i = 0; i < n; i += stride)
        out << num(px(data[i])) << ',' << num(py(static_cast<double>(i + 1) / n)) << ' ';
      out << num(px(data.back())) << ',' << num(py(1.0)) << "\"/>\n";
    }
    const double ly = top + 14 + 18.0 * static_cast<double>(s);
    out << "<line x1=\"" << num(left + plot_w + 12) << "\" y1=\"" << num(ly) << "\" x2=\""
        << num(left + plot_w + 36) << "\" y2=\"" << num(ly) << "\" stroke=\"" << color
        << "\" stroke-width=\"2\"/>\n"
        << "<text x=\"" << num(left + plot_w + 42) << "\" y=\"" << num(ly + 4)
        << "\" font-family=\"sans-serif\" font-size=\"12\">" << detail::xml_escape(series[s].label)
        << "</text>\n";
  }
  out << "</svg>\n";
}

}  // namespace ramimo
