// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The pwz Authors

#include <catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "pwz/haar.hpp"
#include "pwz/signal.hpp"

using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

double max_rel_diff(std::span<const double> a, std::span<const double> b) {
  double scale = 0, diff = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    scale = std::max(scale, std::abs(b[i]));
    diff = std::max(diff, std::abs(a[i] - b[i]));
  }
  return scale > 0 ? diff / scale : diff;
}

std::vector<bool> to_mask(const pwz::Region& r, std::size_t n) {
  std::vector<bool> m(n);
  for (std::size_t t = 1; t <= n; ++t) m[t - 1] = r.contains(t);
  return m;
}

pwz::Region random_region(std::mt19937_64& rng, std::size_t n) {
  std::uniform_int_distribution<std::size_t> count(0, 3), pos(1, n);
  std::vector<pwz::Interval> pieces;
  for (std::size_t i = count(rng); i > 0; --i) {
    auto a = pos(rng), b = pos(rng);
    if (a > b) std::swap(a, b);
    pieces.push_back({a, b});
  }
  return pwz::Region(pieces);
}

}  // namespace

TEST_CASE("length checks") {
  CHECK_THROWS_AS(pwz::dwt(std::vector<double>{1, 2, 3}), std::invalid_argument);
  CHECK_THROWS_AS(pwz::dwt(std::vector<double>{1}), std::invalid_argument);
  CHECK(pwz::level_count(1024) == 10);
}

TEST_CASE("small hand example") {
  const auto c = pwz::dwt(std::vector<double>{1, 2, 3, 4});
  CHECK_THAT(c.scaling(), WithinAbs(5.0, 1e-14));
  CHECK_THAT(c.detail(0, 0), WithinAbs(-2.0, 1e-14));
  CHECK_THAT(c.detail(1, 0), WithinAbs(-1.0 / std::sqrt(2.0), 1e-14));
  CHECK_THAT(c.detail(1, 1), WithinAbs(-1.0 / std::sqrt(2.0), 1e-14));
}

TEST_CASE("forward transform equals the dense Haar matrix") {
  std::mt19937_64 rng(11);
  for (std::size_t n : {2u, 4u, 8u, 16u, 64u, 256u}) {
    const auto h = oracle::haar_matrix(n);
    for (int trial = 0; trial < 5; ++trial) {
      const auto f = oracle::random_vector(rng, n);
      const auto expected = oracle::apply(h, f);
      CHECK(max_rel_diff(pwz::dwt(f).slots(), expected) < 1e-13);
      CHECK(max_rel_diff(pwz::idwt_values(expected), f) < 1e-13);
    }
  }
}

TEST_CASE("constant signals") {
  const double c = 2.5;
  const auto coeffs = pwz::dwt(std::vector<double>(64, c));
  CHECK_THAT(coeffs.scaling(), WithinRel(c * 8.0, 1e-14));
  for (std::size_t s = 1; s < 64; ++s) CHECK(coeffs[s] == 0.0);

  std::vector<double> only_scaling(64, 0.0);
  only_scaling[0] = 8.0;
  for (double v : pwz::idwt_values(only_scaling)) CHECK_THAT(v, WithinRel(1.0, 1e-14));
  const auto zero = pwz::idwt(pwz::WaveletCoefficients::zeros(32));
  for (double v : zero.values()) CHECK(v == 0.0);
}

TEST_CASE("parseval on 1000 random signals") {
  std::mt19937_64 rng(2024);
  std::uniform_int_distribution<int> log_n(1, 11);
  double worst = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    const std::size_t n = std::size_t{1} << log_n(rng);
    const auto f = oracle::random_vector(rng, n, -100, 100);
    double e = 0;
    for (double v : f) e += v * v;
    worst = std::max(worst, std::abs(pwz::dwt(f).energy() - e) / e);
  }
  CHECK(worst <= 1e-9);
}

TEST_CASE("parseval on the test signals") {
  for (const auto& s : {pwz::make_doppler(1024), pwz::make_bumps(1024)}) {
    double e = 0;
    for (double v : s.values()) e += v * v;
    CHECK_THAT(pwz::dwt(s).energy(), WithinRel(e, 1e-9));
  }
}

TEST_CASE("round trip within 1e-12") {
  std::mt19937_64 rng(99);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = std::size_t{1} << (1 + trial % 11);
    const auto f = oracle::random_vector(rng, n, -10, 10);
    const auto back = pwz::idwt_values(pwz::dwt(f).slots());
    for (std::size_t i = 0; i < n; ++i) REQUIRE(std::abs(back[i] - f[i]) <= 1e-12 * std::max(1.0, std::abs(f[i])));
  }
  const auto b = pwz::make_bumps(1024);
  const auto back = pwz::idwt(pwz::dwt(b));
  for (std::size_t i = 0; i < 1024; ++i) CHECK(std::abs(back[i] - b[i]) <= 1e-12 * std::max(1.0, std::abs(b[i])));
}

TEST_CASE("linearity") {
  std::mt19937_64 rng(5);
  const auto f = oracle::random_vector(rng, 128), g = oracle::random_vector(rng, 128);
  std::vector<double> mix(128);
  for (std::size_t i = 0; i < 128; ++i) mix[i] = 3.0 * f[i] - 0.5 * g[i];
  const auto cf = pwz::dwt(f), cg = pwz::dwt(g), cm = pwz::dwt(mix);
  for (std::size_t s = 0; s < 128; ++s) CHECK_THAT(cm[s], WithinAbs(3.0 * cf[s] - 0.5 * cg[s], 1e-12));
}

TEST_CASE("canonical basis vectors have unit coefficient norm") {
  for (std::size_t t = 0; t < 64; ++t) {
    std::vector<double> e(64, 0.0);
    e[t] = 1.0;
    CHECK_THAT(pwz::dwt(e).energy(), WithinAbs(1.0, 1e-12));
  }
}

TEST_CASE("supports") {
  CHECK(pwz::support(0, 0, 8) == pwz::Interval{1, 8});
  CHECK(pwz::support(2, 3, 8) == pwz::Interval{7, 8});
  for (std::size_t k = 0; k < 512; ++k) CHECK(pwz::support(9, k, 1024).length() == 2);
  CHECK(pwz::slot_support(0, 16) == pwz::Interval{1, 16});
  CHECK_THROWS_AS(pwz::support(3, 0, 8), std::out_of_range);
  CHECK_THROWS_AS(pwz::support(1, 2, 8), std::out_of_range);

  // Supports agree with the nonzero pattern of the dense matrix, and tile each level.
  const auto h = oracle::haar_matrix(64);
  for (std::size_t s = 0; s < 64; ++s) {
    const auto [lo, hi] = oracle::support_from_matrix(h, s);
    CHECK(pwz::slot_support(s, 64) == pwz::Interval{lo, hi});
  }
  for (unsigned j = 0; j < 6; ++j) {
    std::size_t next = 1;
    for (std::size_t k = 0; k < (std::size_t{1} << j); ++k) {
      const auto iv = pwz::support(j, k, 64);
      CHECK(iv.first == next);
      next = iv.last + 1;
    }
    CHECK(next == 65);
  }
}

TEST_CASE("selector: hand examples") {
  const auto all = pwz::overlapping_selector(pwz::Region::full(1024), 1024);
  CHECK(all.inside_count() == 1024);
  CHECK(all.outside_count() == 0);

  const auto none = pwz::overlapping_selector(pwz::Region(), 1024);
  CHECK(none.inside_count() == 0);

  const auto first = pwz::overlapping_selector(pwz::Region::interval(1, 1), 8);
  CHECK(first.inside_slots() == std::vector<std::size_t>{0, pwz::slot_of(0, 0), pwz::slot_of(1, 0), pwz::slot_of(2, 0)});
  CHECK(first.inside_count() == 4);
}

TEST_CASE("selector: region [401,600]") {
  const std::size_t n = 1024;
  const auto region = pwz::Region::interval(401, 600);
  const auto sel = pwz::overlapping_selector(region, n);
  const auto expected = oracle::overlapping_slots(oracle::haar_matrix(n), to_mask(region, n));
  for (std::size_t s = 0; s < n; ++s) REQUIRE(sel.contains(s) == expected[s]);
  // |B| = 200; only straddling coarse slots add to the count
  CHECK(sel.inside_count() >= 200);
  CHECK(sel.inside_count() <= 200 + 2 * pwz::level_count(n));
}

TEST_CASE("selector: enumeration oracle, partition and monotonicity") {
  std::mt19937_64 rng(31);
  for (std::size_t n : {8u, 32u, 128u}) {
    const auto h = oracle::haar_matrix(n);
    for (int trial = 0; trial < 60; ++trial) {
      const auto region = random_region(rng, n);
      const auto sel = pwz::overlapping_selector(region, n);
      const auto expected = oracle::overlapping_slots(h, to_mask(region, n));
      for (std::size_t s = 0; s < n; ++s) REQUIRE(sel.contains(s) == expected[s]);
      CHECK(sel.inside_count() + sel.outside_count() == n);
      if (!region.empty()) CHECK(sel.contains(0));

      // grow the region and check the selector only grows
      auto pieces = region.intervals();
      pieces.push_back(region.empty() ? pwz::Interval{1, 1} : pwz::Interval{1, region.intervals().front().first});
      const pwz::Region bigger(pieces);
      CHECK(sel.is_subset_of(pwz::overlapping_selector(bigger, n)));
    }
  }
}
