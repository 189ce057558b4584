// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The pwz Authors

#pragma once

#include <algorithm>
#include <cstddef>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "pwz/numfmt.hpp"
#include "pwz/search.hpp"

namespace pwz::svg {

namespace detail {

struct Panel {
  double x0, y0, width, height;
  double lo, hi;  // data range on the y axis

  double x(double t, std::size_t n) const { return x0 + width * (t - 1.0) / static_cast<double>(n - 1); }
  double y(double v) const {
    const double span = hi > lo ? hi - lo : 1.0;
    return y0 + height * (1.0 - (v - lo) / span);
  }
};

inline std::string num(double v) { return format_significant(v, 6); }

inline void polyline(std::ostream& out, const Panel& p, std::span<const double> values, const char* colour,
                     double stroke) {
  out << "<polyline fill=\"none\" stroke=\"" << colour << "\" stroke-width=\"" << num(stroke) << "\" points=\"";
  for (std::size_t i = 0; i < values.size(); ++i) {
    out << num(p.x(static_cast<double>(i + 1), values.size())) << ',' << num(p.y(values[i])) << ' ';
  }
  out << "\"/>\n";
}

inline Panel fit(double x0, double y0, double w, double h, std::span<const double> a, std::span<const double> b = {}) {
  double lo = *std::min_element(a.begin(), a.end());
  double hi = *std::max_element(a.begin(), a.end());
  if (!b.empty()) {
    lo = std::min(lo, *std::min_element(b.begin(), b.end()));
    hi = std::max(hi, *std::max_element(b.begin(), b.end()));
  }
  const double pad = 0.05 * (hi - lo);
  return {x0, y0, w, h, lo - pad, hi + pad};
}

// Each candidate is drawn as a horizontal segment over [a, b], at a height
// proportional to its relSE on the panel's right-hand axis.
inline void segments(std::ostream& out, const Panel& p, std::size_t n, std::span<const CandidateResult> top) {
  if (top.empty()) return;
  double lo = top.front().relse;
  double hi = top.front().relse;
  for (const auto& r : top) {
    lo = std::min(lo, r.relse);
    hi = std::max(hi, r.relse);
  }
  Panel axis = p;
  axis.lo = std::min(0.0, lo);
  axis.hi = hi > axis.lo ? hi * 1.05 : axis.lo + 1.0;
  for (const auto& r : top) {
    const double y = axis.y(r.relse);
    out << "<line stroke=\"#c0392b\" stroke-opacity=\"0.6\" stroke-width=\"1.5\" x1=\""
        << num(p.x(static_cast<double>(r.interval.first), n)) << "\" x2=\""
        << num(p.x(static_cast<double>(r.interval.last), n)) << "\" y1=\"" << num(y) << "\" y2=\"" << num(y)
        << "\"/>\n";
  }
  const double right = p.x0 + p.width;
  for (int tick = 0; tick <= 4; ++tick) {
    const double v = axis.lo + (axis.hi - axis.lo) * tick / 4.0;
    out << "<text x=\"" << num(right + 6) << "\" y=\"" << num(axis.y(v) + 4)
        << "\" font-size=\"10\" fill=\"#c0392b\">" << format_significant(v, 3) << "</text>\n";
  }
  out << "<text x=\"" << num(right + 6) << "\" y=\"" << num(p.y0 - 6)
      << "\" font-size=\"10\" fill=\"#c0392b\">relSE</text>\n";
}

inline void frame(std::ostream& out, const Panel& p, std::size_t n, const char* title) {
  out << "<rect fill=\"none\" stroke=\"#444\" x=\"" << num(p.x0) << "\" y=\"" << num(p.y0) << "\" width=\""
      << num(p.width) << "\" height=\"" << num(p.height) << "\"/>\n";
  out << "<text x=\"" << num(p.x0) << "\" y=\"" << num(p.y0 - 6) << "\" font-size=\"12\">" << title << "</text>\n";
  for (int tick = 0; tick <= 4; ++tick) {
    const double t = 1.0 + (static_cast<double>(n) - 1.0) * tick / 4.0;
    const double x = p.x(t, n);
    out << "<text x=\"" << num(x - 8) << "\" y=\"" << num(p.y0 + p.height + 14) << "\" font-size=\"10\">"
        << static_cast<std::size_t>(t + 0.5) << "</text>\n";
  }
  for (int tick = 0; tick <= 2; ++tick) {
    const double v = p.lo + (p.hi - p.lo) * tick / 2.0;
    out << "<text x=\"" << num(p.x0 - 44) << "\" y=\"" << num(p.y(v) + 4) << "\" font-size=\"10\">"
        << format_significant(v, 3) << "</text>\n";
  }
}

}  // namespace detail

/// Two stacked panels: the signal with the best reconstruction, and the
/// importance function; both overlaid with the given top candidates.
inline void write_search_plot(std::ostream& out, std::span<const double> signal, std::span<const double> best,
                              std::span<const double> importance, std::span<const CandidateResult> top) {
  constexpr double kWidth = 900, kHeight = 560, kLeft = 60, kPanelW = 760, kPanelH = 210;
  const std::size_t n = signal.size();
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\"" << kHeight
      << "\" viewBox=\"0 0 " << kWidth << ' ' << kHeight << "\">\n";
  out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";

  const auto top_panel = detail::fit(kLeft, 30, kPanelW, kPanelH, signal, best);
  detail::frame(out, top_panel, n, "signal (grey) and best reconstruction (black)");
  detail::polyline(out, top_panel, signal, "#999", 1.0);
  detail::polyline(out, top_panel, best, "#000", 1.0);
  detail::segments(out, top_panel, n, top);

  const auto bottom_panel = detail::fit(kLeft, 310, kPanelW, kPanelH, importance);
  detail::frame(out, bottom_panel, n, "importance diag(M)");
  detail::polyline(out, bottom_panel, importance, "#1f4e79", 1.0);
  detail::segments(out, bottom_panel, n, top);
  out << "</svg>\n";
}

}  // namespace pwz::svg
