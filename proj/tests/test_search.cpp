// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The pwz Authors

#include <catch_amalgamated.hpp>

#include <cmath>
#include <set>
#include <sstream>

#include "oracles.hpp"
#include "pwz/search.hpp"

using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

const pwz::Signal& doppler() {
  static const auto d = pwz::make_doppler(1024);
  return d;
}

const pwz::SearchRun& example2_run() {
  static const auto run =
      pwz::run_search(doppler(), pwz::scale_region_analysis(5, pwz::Region::interval(401, 600)), 0.1, 102);
  return run;
}

}  // namespace

TEST_CASE("candidate grid matches the enumeration oracle") {
  for (std::size_t n : {8u, 16u, 64u, 256u, 1024u, 4096u}) {
    const auto grid = pwz::candidate_intervals(n);
    const auto expected = oracle::candidate_set(n);
    REQUIRE(grid.size() == expected.size());
    std::set<std::pair<std::size_t, std::size_t>> seen;
    for (const auto& iv : grid) {
      CHECK(expected.count({iv.first, iv.last}) == 1);
      CHECK(seen.insert({iv.first, iv.last}).second);
    }
    CHECK(std::is_sorted(grid.begin(), grid.end()));
  }
}

TEST_CASE("candidate grid rules at n = 1024") {
  const auto grid = pwz::candidate_intervals(1024);
  std::set<std::size_t> lefts;
  for (const auto& iv : grid) {
    lefts.insert(iv.first);
    CHECK(iv.first % 4 == 1);
    CHECK(iv.first >= 5);
    CHECK(iv.last <= 1024);
    CHECK(iv.last - iv.first <= 324);
    if (iv.last != 1024) CHECK((iv.last - iv.first) % 4 == 0);
  }
  CHECK(lefts.size() == 255);
  CHECK(*lefts.rbegin() == 1021);
  // the intervals reported in the examples lie on the grid
  CHECK(std::find(grid.begin(), grid.end(), pwz::Interval{413, 597}) != grid.end());
  CHECK(std::find(grid.begin(), grid.end(), pwz::Interval{405, 461}) != grid.end());
}

TEST_CASE("candidate grid for n = 16") {
  const auto grid = pwz::candidate_intervals(16);
  const std::vector<pwz::Interval> expected{{5, 9}, {5, 13}, {5, 16}, {9, 13}, {9, 16}, {13, 16}};
  CHECK(grid == expected);
  CHECK_THROWS_AS(pwz::candidate_intervals(4), std::invalid_argument);
  CHECK_THROWS_AS(pwz::candidate_intervals(24), std::invalid_argument);
}

TEST_CASE("full-range candidate falls back to the baseline") {
  const auto g = pwz::moments_analysis(4);
  const pwz::SearchContext ctx(doppler(), g, 0.1, 102);
  CHECK(ctx.evaluate({1, 1024}).relse == 1.0);
  const auto r = pwz::evaluate_candidate(doppler(), g, {1, 1024}, 0.1, 102, ctx.se0());
  CHECK(r.relse == 1.0);
  CHECK_FALSE(r.kappa_hat);
}

TEST_CASE("context and free-function evaluation agree") {
  const auto g = pwz::expression_analysis("exp(f/6)*sin(f)");
  const pwz::SearchContext ctx(doppler(), g, 0.2, 102);
  for (const pwz::Interval iv : {pwz::Interval{401, 600}, pwz::Interval{9, 33}, pwz::Interval{700, 1000}}) {
    const auto a = ctx.evaluate(iv);
    const auto b = pwz::evaluate_candidate(doppler(), g, iv, 0.2, 102, ctx.se0());
    CHECK(a.relse == b.relse);
    CHECK(a.sigma2_B == b.sigma2_B);
    CHECK(a.kappa_hat == b.kappa_hat);
  }
}

TEST_CASE("reported example intervals beat the baseline") {
  const auto g1 = pwz::scale_region_analysis(5, pwz::Region::interval(401, 600));
  const pwz::SearchContext dop(doppler(), g1, 0.1, 102);
  CHECK(dop.evaluate({413, 597}).relse < 1.0);
  const pwz::SearchContext bumps(pwz::make_bumps(1024), g1, 0.1, 102);
  CHECK(bumps.evaluate({405, 461}).relse < 1.0);
}

TEST_CASE("example 2 search") {
  const auto& run = example2_run();
  REQUIRE(run.results.size() == pwz::candidate_intervals(1024).size());
  CHECK(run.budget == 102);
  CHECK(run.analysis == "scale-region:lambda=5,a=401,b=600");
  CHECK(std::is_sorted(run.results.begin(), run.results.end(), pwz::ranks_before));

  const auto& best = run.results.front();
  CHECK(best.relse < 1.0);
  CHECK(pwz::jaccard(best.interval, {401, 600}) >= 0.75);
  for (const auto& r : pwz::top_fraction(run, 0.02)) CHECK(r.interval.intersects({401, 600}));

  // recomputing the best reproduces its relSE
  const auto g = pwz::scale_region_analysis(5, pwz::Region::interval(401, 600));
  const auto base = pwz::reconstruct(pwz::compress_baseline(doppler(), 102));
  const pwz::Signal fhat(pwz::compress_region(doppler(), pwz::Region({best.interval}), 0.1, 102).approximation);
  CHECK_THAT(*pwz::relse(g, doppler(), fhat, base), WithinRel(best.relse, 1e-12));
}

TEST_CASE("example 2 best interval is stable across kappa") {
  const auto g = pwz::scale_region_analysis(5, pwz::Region::interval(401, 600));
  for (double kappa : {1.0 / 5, 1.0 / 10, 1.0 / 20}) {
    const auto run = pwz::run_search(doppler(), g, kappa, 102);
    INFO("kappa " << kappa);
    CHECK(pwz::jaccard(run.results.front().interval, {401, 600}) >= 0.6);
  }
}

TEST_CASE("search is deterministic and independent of thread count") {
  const auto g = pwz::moments_analysis(4);
  const auto signal = pwz::make_doppler(256);
  const auto one = pwz::run_search(signal, g, 0.1, 25, {1});
  const auto many = pwz::run_search(signal, g, 0.1, 25, {8});
  const auto again = pwz::run_search(signal, g, 0.1, 25, {3});
  REQUIRE(one.results.size() == many.results.size());
  std::ostringstream a, b, c;
  pwz::write_results_csv(a, one.results);
  pwz::write_results_csv(b, many.results);
  pwz::write_results_csv(c, again.results);
  CHECK(a.str() == b.str());
  CHECK(a.str() == c.str());
}

TEST_CASE("top fraction") {
  const auto& run = example2_run();
  const auto count = run.results.size();
  CHECK(pwz::top_fraction(run, 1.0).size() == count);
  CHECK(pwz::top_fraction(run, 1e-12).size() == 1);
  CHECK(pwz::top_fraction(run, 0.02).size() == static_cast<std::size_t>(std::ceil(0.02 * count)));
  CHECK_THROWS_AS(pwz::top_fraction(run, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(pwz::top_fraction(run, 1.5), std::invalid_argument);
}

TEST_CASE("degenerate baseline is refused") {
  // K = n reproduces the signal exactly, so SE_0 = 0
  const auto signal = pwz::make_doppler(64);
  CHECK_THROWS_AS(pwz::run_search(signal, pwz::moments_analysis(2), 0.1, 64), pwz::DegenerateInputError);
  CHECK_THROWS_AS(pwz::evaluate_candidate(signal, pwz::moments_analysis(2), {5, 9}, 0.1, 6, 0.0),
                  pwz::DegenerateInputError);
  CHECK_THROWS_AS(pwz::SearchContext(signal, pwz::moments_analysis(2), 1.5, 6), std::invalid_argument);
}

TEST_CASE("results csv layout") {
  std::vector<pwz::CandidateResult> rows(2);
  rows[0].interval = {5, 9};
  rows[0].relse = 0.5;
  rows[0].kappa_hat = 0.1;
  rows[0].sigma2_B = 1.0 / 3.0;
  rows[0].sigma2_Bc = 2;
  rows[1].interval = {9, 13};
  rows[1].relse = 1.25;
  std::ostringstream out;
  pwz::write_results_csv(out, rows);
  CHECK(out.str() ==
        "a,b,relSE,kappa_hat,sigma2_B,sigma2_Bc\n"
        "5,9,0.5,0.1,0.333333333333,2\n"
        "9,13,1.25,nan,0,0\n");
}
