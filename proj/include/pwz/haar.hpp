// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The pwz Authors

#pragma once

#include <algorithm>
#include <bit>
#include <cmath>
#include <concepts>
#include <cstddef>
#include <numbers>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "pwz/region.hpp"
#include "pwz/signal.hpp"

namespace pwz {

// Coefficient slots. Slot 0 holds the scaling coefficient; the detail
// coefficient at level j (0 = coarsest) and position k lives at slot 2^j + k.
// This is the layout an in-place pyramid produces, and it is the slot
// numbering used by the pwz-v1 file format.

inline bool is_power_of_two(std::size_t n) noexcept { return std::has_single_bit(n); }

inline void require_dyadic_length(std::size_t n) {
  if (n < 2 || !is_power_of_two(n)) {
    throw std::invalid_argument("Haar transform needs a power-of-two length >= 2, got " +
                                std::to_string(n));
  }
}

/// log2(n) for a power of two: the number of detail levels.
inline unsigned level_count(std::size_t n) {
  require_dyadic_length(n);
  return static_cast<unsigned>(std::countr_zero(n));
}

struct DetailIndex {
  unsigned level = 0;
  std::size_t position = 0;

  friend bool operator==(const DetailIndex&, const DetailIndex&) = default;
};

inline std::size_t slot_of(unsigned level, std::size_t position) noexcept {
  return (std::size_t{1} << level) + position;
}

/// Inverse of slot_of; slot must be >= 1.
inline DetailIndex detail_of_slot(std::size_t slot) noexcept {
  const auto level = static_cast<unsigned>(std::bit_width(slot) - 1);
  return {level, slot - (std::size_t{1} << level)};
}

/// Orthonormal Haar analysis, in place. Afterwards data[0] is the scaling
/// coefficient and data[2^j + k] the detail (j, k).
template <std::floating_point T>
void haar_forward_in_place(std::span<T> data) {
  require_dyadic_length(data.size());
  const T inv_sqrt2 = T(1) / std::numbers::sqrt2_v<T>;
  std::vector<T> scratch(data.size());
  for (std::size_t len = data.size(); len > 1; len /= 2) {
    const std::size_t half = len / 2;
    for (std::size_t i = 0; i < half; ++i) {
      const T a = data[2 * i];
      const T b = data[2 * i + 1];
      scratch[i] = (a + b) * inv_sqrt2;
      scratch[half + i] = (a - b) * inv_sqrt2;
    }
    std::copy(scratch.begin(), scratch.begin() + static_cast<std::ptrdiff_t>(len), data.begin());
  }
}

/// Exact inverse of haar_forward_in_place.
template <std::floating_point T>
void haar_inverse_in_place(std::span<T> data) {
  require_dyadic_length(data.size());
  const T inv_sqrt2 = T(1) / std::numbers::sqrt2_v<T>;
  std::vector<T> scratch(data.size());
  for (std::size_t len = 2; len <= data.size(); len *= 2) {
    const std::size_t half = len / 2;
    for (std::size_t i = 0; i < half; ++i) {
      const T s = data[i];
      const T d = data[half + i];
      scratch[2 * i] = (s + d) * inv_sqrt2;
      scratch[2 * i + 1] = (s - d) * inv_sqrt2;
    }
    std::copy(scratch.begin(), scratch.begin() + static_cast<std::ptrdiff_t>(len), data.begin());
  }
}

/// Full set of n orthonormal Haar coefficients of a length-n signal.
class WaveletCoefficients {
 public:
  explicit WaveletCoefficients(std::vector<double> slots) : slots_(std::move(slots)) {
    require_dyadic_length(slots_.size());
  }

  static WaveletCoefficients zeros(std::size_t n) {
    return WaveletCoefficients(std::vector<double>(n, 0.0));
  }

  std::size_t size() const noexcept { return slots_.size(); }
  unsigned levels() const { return level_count(slots_.size()); }

  double scaling() const noexcept { return slots_[0]; }

  double detail(unsigned level, std::size_t position) const {
    if (level >= levels() || position >= (std::size_t{1} << level)) {
      throw std::out_of_range("detail index out of range");
    }
    return slots_[slot_of(level, position)];
  }

  /// Details of one level, positions 0..2^level-1.
  std::span<const double> level(unsigned j) const {
    if (j >= levels()) throw std::out_of_range("level out of range");
    return std::span<const double>(slots_).subspan(std::size_t{1} << j, std::size_t{1} << j);
  }

  std::span<const double> slots() const noexcept { return slots_; }
  double operator[](std::size_t slot) const noexcept { return slots_[slot]; }

  double energy() const noexcept {
    double e = 0.0;
    for (double a : slots_) e += a * a;
    return e;
  }

  friend bool operator==(const WaveletCoefficients&, const WaveletCoefficients&) = default;

 private:
  std::vector<double> slots_;
};

inline WaveletCoefficients dwt(std::span<const double> values) {
  std::vector<double> data(values.begin(), values.end());
  haar_forward_in_place(std::span<double>(data));
  return WaveletCoefficients(std::move(data));
}

inline WaveletCoefficients dwt(const Signal& signal) { return dwt(signal.values()); }

inline std::vector<double> idwt_values(std::span<const double> slots) {
  std::vector<double> data(slots.begin(), slots.end());
  haar_inverse_in_place(std::span<double>(data));
  return data;
}

inline Signal idwt(const WaveletCoefficients& coeffs) { return Signal(idwt_values(coeffs.slots())); }

/// Samples covered by detail (level, position): [k n/2^j + 1, (k+1) n/2^j].
inline Interval support(unsigned level, std::size_t position, std::size_t n) {
  if (level >= level_count(n) || position >= (std::size_t{1} << level)) {
    throw std::out_of_range("no detail coefficient (" + std::to_string(level) + ", " +
                            std::to_string(position) + ") for n = " + std::to_string(n));
  }
  const std::size_t width = n >> level;
  return {position * width + 1, (position + 1) * width};
}

/// Support of any slot; the scaling slot covers all of [1, n].
inline Interval slot_support(std::size_t slot, std::size_t n) {
  require_dyadic_length(n);
  if (slot >= n) throw std::out_of_range("slot " + std::to_string(slot) + " out of range");
  if (slot == 0) return {1, n};
  const auto idx = detail_of_slot(slot);
  return support(idx.level, idx.position, n);
}

/// A subset of the n coefficient slots, together with its complement.
class CoefficientSelector {
 public:
  explicit CoefficientSelector(std::vector<unsigned char> flags) : flags_(std::move(flags)) {
    for (auto& f : flags_) {
      f = f ? 1 : 0;
      inside_ += f;
    }
  }

  std::size_t size() const noexcept { return flags_.size(); }
  bool contains(std::size_t slot) const noexcept { return flags_[slot] != 0; }

  /// n_J
  std::size_t inside_count() const noexcept { return inside_; }
  /// n_L
  std::size_t outside_count() const noexcept { return flags_.size() - inside_; }

  std::vector<std::size_t> inside_slots() const {
    std::vector<std::size_t> out;
    for (std::size_t s = 0; s < flags_.size(); ++s)
      if (flags_[s]) out.push_back(s);
    return out;
  }

  bool is_subset_of(const CoefficientSelector& other) const {
    if (other.size() != size()) return false;
    for (std::size_t s = 0; s < flags_.size(); ++s)
      if (flags_[s] && !other.flags_[s]) return false;
    return true;
  }

  friend bool operator==(const CoefficientSelector&, const CoefficientSelector&) = default;

 private:
  std::vector<unsigned char> flags_;
  std::size_t inside_ = 0;
};

/// Slots whose basis function's support overlaps the region. Coefficients
/// straddling the boundary of the region are inside.
inline CoefficientSelector overlapping_selector(const Region& region, std::size_t n) {
  require_dyadic_length(n);
  const auto mask = region.mask(n);
  // prefix[t] = |B ∩ [1, t]|
  std::vector<std::size_t> prefix(n + 1, 0);
  for (std::size_t t = 1; t <= n; ++t) prefix[t] = prefix[t - 1] + mask[t - 1];

  std::vector<unsigned char> flags(n, 0);
  flags[0] = region.empty() ? 0 : 1;
  for (std::size_t slot = 1; slot < n; ++slot) {
    const auto sup = slot_support(slot, n);
    flags[slot] = prefix[sup.last] > prefix[sup.first - 1] ? 1 : 0;
  }
  return CoefficientSelector(std::move(flags));
}

}  // namespace pwz
