// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The pwz Authors

#pragma once

#include <algorithm>
#include <cstddef>
#include <iterator>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "pwz/numfmt.hpp"

namespace pwz {

/// Closed integer interval [first, last], 1-based.
struct Interval {
  std::size_t first = 1;
  std::size_t last = 1;

  std::size_t length() const noexcept { return last - first + 1; }
  bool contains(std::size_t t) const noexcept { return first <= t && t <= last; }
  bool intersects(const Interval& o) const noexcept { return first <= o.last && o.first <= last; }

  friend auto operator<=>(const Interval&, const Interval&) = default;
};

inline std::size_t overlap_length(const Interval& a, const Interval& b) {
  if (!a.intersects(b)) return 0;
  return std::min(a.last, b.last) - std::max(a.first, b.first) + 1;
}

/// |a ∩ b| / |a ∪ b| for two intervals.
inline double jaccard(const Interval& a, const Interval& b) {
  const double inter = static_cast<double>(overlap_length(a, b));
  const double uni = static_cast<double>(a.length() + b.length()) - inter;
  return inter / uni;
}

/// A union of disjoint integer intervals inside T = {1..n}.
///
/// Always kept normalized: sorted, with overlapping or adjacent pieces
/// merged, so two regions covering the same samples compare equal.
class Region {
 public:
  Region() = default;

  explicit Region(std::vector<Interval> intervals) {
    for (const auto& iv : intervals) {
      if (iv.first == 0 || iv.first > iv.last) {
        throw std::invalid_argument("invalid interval [" + std::to_string(iv.first) + ", " +
                                    std::to_string(iv.last) + "]");
      }
    }
    std::sort(intervals.begin(), intervals.end());
    for (const auto& iv : intervals) {
      if (!intervals_.empty() && iv.first <= intervals_.back().last + 1) {
        intervals_.back().last = std::max(intervals_.back().last, iv.last);
      } else {
        intervals_.push_back(iv);
      }
    }
  }

  static Region interval(std::size_t first, std::size_t last) {
    return Region({Interval{first, last}});
  }
  static Region full(std::size_t n) { return interval(1, n); }

  const std::vector<Interval>& intervals() const noexcept { return intervals_; }
  bool empty() const noexcept { return intervals_.empty(); }

  /// |B|
  std::size_t cardinality() const noexcept {
    std::size_t total = 0;
    for (const auto& iv : intervals_) total += iv.length();
    return total;
  }

  bool contains(std::size_t t) const noexcept {
    auto it = std::upper_bound(intervals_.begin(), intervals_.end(), t,
                               [](std::size_t v, const Interval& iv) { return v < iv.first; });
    return it != intervals_.begin() && std::prev(it)->contains(t);
  }

  std::size_t last_index() const noexcept { return empty() ? 0 : intervals_.back().last; }

  void require_within(std::size_t n) const {
    if (last_index() > n) {
      throw std::invalid_argument("region ends at " + std::to_string(last_index()) +
                                  " but the signal has only " + std::to_string(n) + " samples");
    }
  }

  /// 0/1 membership mask over t = 1..n, stored 0-based.
  std::vector<unsigned char> mask(std::size_t n) const {
    require_within(n);
    std::vector<unsigned char> m(n, 0);
    for (const auto& iv : intervals_) std::fill(m.begin() + iv.first - 1, m.begin() + iv.last, 1);
    return m;
  }

  Region complement(std::size_t n) const {
    require_within(n);
    std::vector<Interval> out;
    std::size_t next = 1;
    for (const auto& iv : intervals_) {
      if (iv.first > next) out.push_back({next, iv.first - 1});
      next = iv.last + 1;
    }
    if (next <= n) out.push_back({next, n});
    return Region(std::move(out));
  }

  friend bool operator==(const Region&, const Region&) = default;

 private:
  std::vector<Interval> intervals_;
};

/// Parses `a:b[,c:d...]` (1-based, inclusive). An empty string is the empty region.
inline Region parse_region(std::string_view text) {
  std::vector<Interval> pieces;
  text = trim(text);
  while (!text.empty()) {
    const auto comma = text.find(',');
    const auto piece = trim(text.substr(0, comma));
    const auto colon = piece.find(':');
    if (colon == std::string_view::npos) {
      throw std::invalid_argument("region piece '" + std::string(piece) + "' is not of the form a:b");
    }
    const auto a = parse_integer<std::size_t>(piece.substr(0, colon));
    const auto b = parse_integer<std::size_t>(piece.substr(colon + 1));
    if (!a || !b) throw std::invalid_argument("region bounds must be integers: '" + std::string(piece) + "'");
    pieces.push_back({*a, *b});
    if (comma == std::string_view::npos) break;
    text.remove_prefix(comma + 1);
  }
  return Region(std::move(pieces));
}

inline std::string format_region(const Region& region) {
  std::string out;
  for (const auto& iv : region.intervals()) {
    if (!out.empty()) out += ',';
    out += std::to_string(iv.first) + ":" + std::to_string(iv.last);
  }
  return out;
}

}  // namespace pwz
