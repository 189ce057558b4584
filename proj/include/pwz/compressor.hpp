// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The pwz Authors

#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numeric>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "pwz/haar.hpp"
#include "pwz/region.hpp"
#include "pwz/signal.hpp"

namespace pwz {

inline constexpr const char* kWaveletId = "haar-orthonormal-v1";

/// The stored artifact: a budgeted subset of Haar coefficients. Slots not
/// listed are zero.
struct SparseRepresentation {
  std::size_t n = 0;
  std::vector<std::size_t> slots;  // strictly increasing
  std::vector<double> values;      // parallel to slots
  std::size_t budget = 0;
  std::optional<double> kappa;
  std::optional<Region> region;
  std::string wavelet = kWaveletId;

  /// Throws std::invalid_argument describing the first violated invariant.
  void validate() const {
    if (wavelet != kWaveletId) throw std::invalid_argument("unsupported wavelet '" + wavelet + "'");
    require_dyadic_length(n);
    if (slots.size() != values.size())
      throw std::invalid_argument("slots and values differ in length");
    if (slots.empty()) throw std::invalid_argument("representation keeps no coefficients");
    if (budget == 0 || budget > n) throw std::invalid_argument("budget out of range [1, n]");
    if (slots.size() > budget) throw std::invalid_argument("more kept slots than the budget allows");
    for (std::size_t i = 0; i < slots.size(); ++i) {
      if (slots[i] >= n) throw std::invalid_argument("slot index out of range");
      if (i > 0 && slots[i] <= slots[i - 1])
        throw std::invalid_argument("slots must be strictly increasing");
      if (!std::isfinite(values[i])) throw std::invalid_argument("non-finite coefficient value");
    }
    if (kappa && !(*kappa > 0.0 && *kappa <= 1.0))
      throw std::invalid_argument("kappa must lie in (0, 1]");
    if (region) region->require_within(n);
  }

  WaveletCoefficients densify() const {
    std::vector<double> dense(n, 0.0);
    for (std::size_t i = 0; i < slots.size(); ++i) dense.at(slots[i]) = values[i];
    return WaveletCoefficients(std::move(dense));
  }

  double kept_energy() const {
    double e = 0.0;
    for (double v : values) e += v * v;
    return e;
  }

  friend bool operator==(const SparseRepresentation&, const SparseRepresentation&) = default;
};

/// Error statistics of an approximation split by a region B, plus the
/// coefficient bookkeeping of the compression that produced it.
///
/// `error_report` fills only the error fields; the counts are set by
/// `compress_region`.
struct CompressionReport {
  double sigma2_B = 0.0;   // mean squared error over B (0 when B is empty)
  double sigma2_Bc = 0.0;  // mean squared error over the complement
  std::optional<double> kappa_hat;  // sigma2_B / sigma2_Bc when both sides are non-empty and sigma2_Bc > 0
  double mse = 0.0;
  double squared_error = 0.0;  // ||approx - original||^2
  std::size_t budget = 0;
  std::size_t n_J = 0;
  std::size_t n_L = 0;
  std::size_t k_J = 0;
  std::size_t k_L = 0;
};

inline CompressionReport error_report(std::span<const double> original,
                                      std::span<const double> approx, const Region& region) {
  if (original.size() != approx.size()) {
    throw std::invalid_argument("length mismatch: " + std::to_string(original.size()) + " vs " +
                                std::to_string(approx.size()));
  }
  const std::size_t n = original.size();
  const auto mask = region.mask(n);
  double in_sum = 0.0;
  double out_sum = 0.0;
  std::size_t in_count = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double e = approx[i] - original[i];
    if (mask[i]) {
      in_sum += e * e;
      ++in_count;
    } else {
      out_sum += e * e;
    }
  }
  const std::size_t out_count = n - in_count;
  CompressionReport r;
  r.sigma2_B = in_count ? in_sum / static_cast<double>(in_count) : 0.0;
  r.sigma2_Bc = out_count ? out_sum / static_cast<double>(out_count) : 0.0;
  if (in_count && out_count && r.sigma2_Bc > 0.0) r.kappa_hat = r.sigma2_B / r.sigma2_Bc;
  r.squared_error = in_sum + out_sum;
  r.mse = r.squared_error / static_cast<double>(n);
  return r;
}

inline CompressionReport error_report(const Signal& original, const Signal& approx,
                                      const Region& region) {
  return error_report(original.values(), approx.values(), region);
}

/// K = floor(fraction * n), at least 1. 0.1 of 1024 gives 102.
inline std::size_t budget_from_fraction(double fraction, std::size_t n) {
  if (!(fraction > 0.0 && fraction <= 1.0)) throw std::invalid_argument("budget fraction must lie in (0, 1]");
  const auto k = static_cast<std::size_t>(std::floor(fraction * static_cast<double>(n) + 1e-9));
  return std::max<std::size_t>(1, std::min(k, n));
}

inline Signal reconstruct(const SparseRepresentation& rep) {
  rep.validate();
  return idwt(rep.densify());
}

struct RegionCompression {
  SparseRepresentation representation;
  CompressionReport report;
  std::vector<double> approximation;  // reconstruction of `representation`
};

/// Thresholding compressor bound to one signal. The transform and the
/// energy ordering of its coefficients are computed once, so many budgets
/// and regions can be tried cheaply; instances are immutable and may be
/// shared between threads.
class Compressor {
 public:
  explicit Compressor(const Signal& signal)
      : original_(signal.vector()), coeffs_(dwt(signal)), order_(signal.size()) {
    const auto a = coeffs_.slots();
    std::iota(order_.begin(), order_.end(), std::size_t{0});
    // Ascending a^2; among equal energies the finer (higher) slot is discarded first.
    std::sort(order_.begin(), order_.end(), [&](std::size_t x, std::size_t y) {
      const double ex = a[x] * a[x];
      const double ey = a[y] * a[y];
      if (ex != ey) return ex < ey;
      return x > y;
    });
  }

  std::size_t size() const noexcept { return coeffs_.size(); }
  const WaveletCoefficients& coefficients() const noexcept { return coeffs_; }
  std::span<const double> original() const noexcept { return original_; }

  /// Slots in discard order (smallest a^2 first).
  std::span<const std::size_t> discard_order() const noexcept { return order_; }

  /// Keeps the K slots of largest a^2. By Parseval this minimises
  /// ||f~ - f||^2 over all K-sparse Haar representations.
  SparseRepresentation baseline(std::size_t budget) const {
    require_budget(budget);
    const std::size_t n = size();
    std::vector<std::size_t> kept(order_.begin() + static_cast<std::ptrdiff_t>(n - budget), order_.end());
    return make_representation(std::move(kept), budget, std::nullopt, std::nullopt);
  }

  /// Magnifying-glass compression: threshold separately inside and outside
  /// the slots overlapping `region`, splitting the budget so the ratio of
  /// mean discarded energies is as close as possible to `kappa`.
  RegionCompression region(const Region& region, double kappa, std::size_t budget) const {
    require_budget(budget);
    if (!(kappa > 0.0 && kappa <= 1.0)) {
      throw std::invalid_argument(
          "kappa must lie in (0, 1]; for kappa > 1 swap the region and its complement");
    }
    region.require_within(size());
    const auto selector = overlapping_selector(region, size());
    const std::size_t n_J = selector.inside_count();
    const std::size_t n_L = selector.outside_count();

    RegionCompression out;
    if (n_J == 0 || n_L == 0) {
      // Nothing to balance against: fall back to plain thresholding.
      out.representation = baseline(budget);
      out.representation.kappa = kappa;
      out.representation.region = region;
      finish(out, region, selector);
      out.report.kappa_hat.reset();
      return out;
    }

    // Per-side discard orders. The scaling slot (always inside when B is
    // non-empty) is never discarded, so it is left out of the inside list.
    std::vector<std::size_t> inside;
    std::vector<std::size_t> outside;
    inside.reserve(n_J);
    outside.reserve(n_L);
    for (std::size_t slot : order_) {
      if (slot == 0) continue;
      (selector.contains(slot) ? inside : outside).push_back(slot);
    }
    const auto inside_prefix = prefix_energy(inside);
    const auto outside_prefix = prefix_energy(outside);

    const std::size_t lo = std::max<std::size_t>(1, budget > n_L ? budget - n_L : 0);
    const std::size_t hi = std::min(budget, n_J);
    const auto split = choose_split(inside_prefix, outside_prefix, n_J, n_L, budget, lo, hi, kappa);

    std::vector<std::size_t> kept;
    kept.reserve(budget);
    kept.push_back(0);
    kept.insert(kept.end(), inside.begin() + static_cast<std::ptrdiff_t>(n_J - split), inside.end());
    const std::size_t k_L = budget - split;
    kept.insert(kept.end(), outside.begin() + static_cast<std::ptrdiff_t>(n_L - k_L), outside.end());

    out.representation = make_representation(std::move(kept), budget, kappa, region);
    finish(out, region, selector);
    return out;
  }

 private:
  static void require_budget_range(std::size_t budget, std::size_t n) {
    if (budget < 1 || budget > n) {
      throw std::invalid_argument("budget " + std::to_string(budget) + " outside [1, " +
                                  std::to_string(n) + "]");
    }
  }
  void require_budget(std::size_t budget) const { require_budget_range(budget, size()); }

  std::vector<double> prefix_energy(const std::vector<std::size_t>& slots) const {
    std::vector<double> prefix(slots.size() + 1, 0.0);
    for (std::size_t i = 0; i < slots.size(); ++i) {
      const double a = coeffs_[slots[i]];
      prefix[i + 1] = prefix[i] + a * a;
    }
    return prefix;
  }

  // Ranks a candidate split. Lower is better; the first component orders the
  // kinds of outcome, the second ranks within a kind:
  //   0: both sides discard nothing, so the energy balance holds exactly
  //   1: both sides discard energy, ranked by |log r - log kappa|
  //   2: only the outside discards energy (r = 0), ranked by |0 - kappa|
  //   3: only the inside discards energy (r = +inf)
  static std::pair<int, double> split_cost(double d_inside, double d_outside, std::size_t n_J,
                                           std::size_t n_L, double kappa) {
    if (d_inside == 0.0 && d_outside == 0.0) return {0, 0.0};
    if (d_inside > 0.0 && d_outside > 0.0) {
      const double r = (d_inside / static_cast<double>(n_J)) / (d_outside / static_cast<double>(n_L));
      return {1, std::abs(std::log(r) - std::log(kappa))};
    }
    if (d_inside == 0.0) return {2, kappa};
    return {3, std::numeric_limits<double>::infinity()};
  }

  // Returns k_J. Ties prefer the larger k_J.
  static std::size_t choose_split(const std::vector<double>& inside_prefix,
                                  const std::vector<double>& outside_prefix, std::size_t n_J,
                                  std::size_t n_L, std::size_t budget, std::size_t lo,
                                  std::size_t hi, double kappa) {
    std::size_t best = hi;
    std::pair<int, double> best_cost{std::numeric_limits<int>::max(), 0.0};
    for (std::size_t k_J = hi + 1; k_J-- > lo;) {
      const std::size_t k_L = budget - k_J;
      const double d_in = inside_prefix[n_J - k_J];
      const double d_out = outside_prefix[n_L - k_L];
      const auto cost = split_cost(d_in, d_out, n_J, n_L, kappa);
      if (cost < best_cost) {
        best_cost = cost;
        best = k_J;
      }
    }
    return best;
  }

  SparseRepresentation make_representation(std::vector<std::size_t> kept, std::size_t budget,
                                           std::optional<double> kappa,
                                           std::optional<Region> region) const {
    std::sort(kept.begin(), kept.end());
    SparseRepresentation rep;
    rep.n = size();
    rep.budget = budget;
    rep.kappa = kappa;
    rep.region = std::move(region);
    rep.values.reserve(kept.size());
    for (std::size_t s : kept) rep.values.push_back(coeffs_[s]);
    rep.slots = std::move(kept);
    return rep;
  }

  void finish(RegionCompression& out, const Region& region, const CoefficientSelector& selector) const {
    const auto& rep = out.representation;
    out.approximation = idwt_values(rep.densify().slots());
    out.report = error_report(original_, out.approximation, region);
    out.report.budget = rep.budget;
    out.report.n_J = selector.inside_count();
    out.report.n_L = selector.outside_count();
    for (std::size_t s : rep.slots) (selector.contains(s) ? out.report.k_J : out.report.k_L) += 1;
  }

  std::vector<double> original_;
  WaveletCoefficients coeffs_;
  std::vector<std::size_t> order_;
};

inline SparseRepresentation compress_baseline(const Signal& signal, std::size_t budget) {
  return Compressor(signal).baseline(budget);
}

inline RegionCompression compress_region(const Signal& signal, const Region& region, double kappa,
                                         std::size_t budget) {
  return Compressor(signal).region(region, kappa, budget);
}

}  // namespace pwz
