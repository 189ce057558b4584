// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The pwz Authors

#pragma once

#include <array>
#include <bit>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <istream>
#include <numbers>
#include <ostream>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "pwz/errors.hpp"
#include "pwz/numfmt.hpp"

namespace pwz {

/// A finite, real-valued 1-D signal of length n >= 2.
///
/// Samples are stored 0-based; every user-facing index (regions, CSV rows,
/// reports) is 1-based. Values are immutable after construction. Power-of-two
/// length is only required by the transform, not here.
class Signal {
 public:
  explicit Signal(std::vector<double> values) : values_(std::move(values)) {
    if (values_.size() < 2) {
      throw std::invalid_argument("signal needs at least 2 samples, got " +
                                  std::to_string(values_.size()));
    }
    for (std::size_t i = 0; i < values_.size(); ++i) {
      if (!std::isfinite(values_[i])) {
        throw std::invalid_argument("signal sample " + std::to_string(i + 1) +
                                    " is not finite");
      }
    }
  }

  std::size_t size() const noexcept { return values_.size(); }
  std::span<const double> values() const noexcept { return values_; }
  const std::vector<double>& vector() const noexcept { return values_; }

  /// 0-based access.
  double operator[](std::size_t i) const noexcept { return values_[i]; }

  /// 1-based access, matching region notation.
  double at(std::size_t t) const {
    if (t == 0 || t > values_.size()) throw std::out_of_range("signal index out of range");
    return values_[t - 1];
  }

  friend bool operator==(const Signal&, const Signal&) = default;

 private:
  std::vector<double> values_;
};

namespace detail {

inline void require_generator_length(std::size_t n) {
  if (n < 2) throw std::invalid_argument("generator length must be >= 2");
}

/// Midpoint grid x = (t - 0.5) / n for t = 1..n.
inline double grid_point(std::size_t t, std::size_t n) {
  return (static_cast<double>(t) - 0.5) / static_cast<double>(n);
}

}  // namespace detail

/// Donoho-Johnstone `Doppler`: sqrt(x(1-x)) * sin(2*pi*(1+eps)/(x+eps)), eps = 0.05.
inline double doppler_at(double x) {
  constexpr double eps = 0.05;
  return std::sqrt(x * (1.0 - x)) * std::sin(2.0 * std::numbers::pi * (1.0 + eps) / (x + eps));
}

/// Donoho-Johnstone `Bumps`: sum of 11 kernels h_j * (1 + |(x - t_j)/w_j|)^-4.
inline double bumps_at(double x) {
  static constexpr std::array<double, 11> pos{0.10, 0.13, 0.15, 0.23, 0.25, 0.40,
                                              0.44, 0.65, 0.76, 0.78, 0.81};
  static constexpr std::array<double, 11> height{4.0, 5.0, 3.0, 4.0, 5.0, 4.2,
                                                 2.1, 4.3, 3.1, 5.1, 4.2};
  static constexpr std::array<double, 11> width{0.005, 0.005, 0.006, 0.01, 0.01, 0.03,
                                                0.01,  0.01,  0.005, 0.008, 0.005};
  double sum = 0.0;
  for (std::size_t j = 0; j < pos.size(); ++j) {
    const double u = std::abs((x - pos[j]) / width[j]);
    const double k = 1.0 + u;
    sum += height[j] / (k * k * k * k);
  }
  return sum;
}

inline Signal make_doppler(std::size_t n) {
  detail::require_generator_length(n);
  std::vector<double> v(n);
  for (std::size_t t = 1; t <= n; ++t) v[t - 1] = doppler_at(detail::grid_point(t, n));
  return Signal(std::move(v));
}

inline Signal make_bumps(std::size_t n) {
  detail::require_generator_length(n);
  std::vector<double> v(n);
  for (std::size_t t = 1; t <= n; ++t) v[t - 1] = bumps_at(detail::grid_point(t, n));
  return Signal(std::move(v));
}

/// Reads one decimal value per line. An optional first line `value` is
/// treated as a header; LF and CRLF line endings are accepted.
inline Signal read_signal_csv(std::istream& in) {
  std::vector<double> values;
  std::string line;
  std::size_t line_no = 0;
  bool seen_content = false;
  while (std::getline(in, line)) {
    ++line_no;
    std::string_view view(line);
    if (line_no == 1 && view.starts_with("\xEF\xBB\xBF")) view.remove_prefix(3);
    view = trim(view);
    if (view.empty()) continue;
    if (!seen_content && view == "value") {
      seen_content = true;
      continue;
    }
    seen_content = true;
    const auto parsed = parse_double(view);
    if (!parsed || !std::isfinite(*parsed)) {
      throw ParseError("line " + std::to_string(line_no) + ": expected a finite number, got '" +
                           std::string(view) + "'",
                       line_no);
    }
    values.push_back(*parsed);
  }
  if (values.empty()) throw ParseError("signal input is empty", line_no);
  return Signal(std::move(values));
}

inline Signal read_signal_csv(std::string_view text) {
  std::istringstream in{std::string(text)};
  return read_signal_csv(in);
}

/// One value per line, LF endings, shortest round-trip decimal text, no header.
inline void write_signal_csv(const Signal& signal, std::ostream& out) {
  for (double v : signal.values()) out << format_exact(v) << '\n';
}

inline std::string write_signal_csv(const Signal& signal) {
  std::ostringstream out;
  write_signal_csv(signal, out);
  return out.str();
}

/// FNV-1a over the IEEE bit patterns; identifies a signal in search runs.
inline std::uint64_t signal_fingerprint(const Signal& signal) {
  std::uint64_t hash = 0xcbf29ce484222325ULL;
  for (double v : signal.values()) {
    const auto bits = std::bit_cast<std::uint64_t>(v);
    for (int byte = 0; byte < 8; ++byte) {
      hash ^= (bits >> (8 * byte)) & 0xffU;
      hash *= 0x100000001b3ULL;
    }
  }
  return hash;
}

}  // namespace pwz
