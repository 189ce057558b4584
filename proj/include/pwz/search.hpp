// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The pwz Authors

#pragma once

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <exception>
#include <mutex>
#include <optional>
#include <ostream>
#include <span>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "pwz/analysis.hpp"
#include "pwz/compressor.hpp"
#include "pwz/errors.hpp"
#include "pwz/numfmt.hpp"
#include "pwz/region.hpp"
#include "pwz/signal.hpp"

namespace pwz {

/// Left ends a = 4x + 1 (x = 1 .. n/4 - 1), right ends b = a + 4y
/// (y = 1 .. 81), clipped to n. Clipping stops the y loop, so no
/// interval is emitted twice. Ordered by (a, b).
inline std::vector<Interval> candidate_intervals(std::size_t n) {
  if (n < 8 || !is_power_of_two(n)) {
    throw std::invalid_argument("candidate grid needs a power-of-two n >= 8, got " + std::to_string(n));
  }
  constexpr std::size_t kMaxSteps = 81;
  std::vector<Interval> out;
  for (std::size_t x = 1; x + 1 <= n / 4; ++x) {
    const std::size_t a = 4 * x + 1;
    for (std::size_t y = 1; y <= kMaxSteps; ++y) {
      const std::size_t b = std::min(a + 4 * y, n);
      out.push_back({a, b});
      if (b == n) break;
    }
  }
  return out;
}

struct CandidateResult {
  Interval interval;
  double relse = 0.0;
  double se_B = 0.0;
  std::optional<double> kappa_hat;
  double sigma2_B = 0.0;
  double sigma2_Bc = 0.0;
};

/// Shared, read-only state for evaluating many candidate regions against one
/// signal, analysis, kappa and budget: the transform, the baseline
/// reconstruction and its loss SE_0 are computed once.
class SearchContext {
 public:
  SearchContext(const Signal& signal, SecondaryAnalysis analysis, double kappa, std::size_t budget)
      : signal_(signal),
        analysis_(std::move(analysis)),
        kappa_(kappa),
        budget_(budget),
        compressor_(signal),
        baseline_(reconstruct(compressor_.baseline(budget))),
        reference_(analysis_.evaluate(signal_.values())) {
    if (!(kappa > 0.0 && kappa <= 1.0)) throw std::invalid_argument("kappa must lie in (0, 1]");
    se0_ = squared_distance(analysis_.evaluate(baseline_.values()));
    double scale = 0.0;
    for (double v : reference_) scale += v * v;
    // transform roundoff alone leaves an error near 1e-30 relative
    degenerate_ = se0_ <= kExactTolerance * scale;
  }

  /// Relative loss at or below which the baseline counts as exact.
  static constexpr double kExactTolerance = 1e-24;

  const Signal& signal() const noexcept { return signal_; }
  const SecondaryAnalysis& analysis() const noexcept { return analysis_; }
  const Compressor& compressor() const noexcept { return compressor_; }
  double kappa() const noexcept { return kappa_; }
  std::size_t budget() const noexcept { return budget_; }
  const Signal& baseline() const noexcept { return baseline_; }

  /// Loss of the baseline reconstruction, SE_0.
  double se0() const noexcept { return se0_; }

  void require_nondegenerate() const {
    if (degenerate_) {
      throw DegenerateInputError(
          "baseline compression already reproduces the secondary analysis exactly (SE_0 = 0); "
          "there is nothing to improve on");
    }
  }

  CandidateResult evaluate(const Interval& interval) const {
    require_nondegenerate();
    const auto compressed = compressor_.region(Region({interval}), kappa_, budget_);
    CandidateResult r;
    r.interval = interval;
    r.se_B = squared_distance(analysis_.evaluate(compressed.approximation));
    r.relse = r.se_B / se0_;
    r.kappa_hat = compressed.report.kappa_hat;
    r.sigma2_B = compressed.report.sigma2_B;
    r.sigma2_Bc = compressed.report.sigma2_Bc;
    return r;
  }

 private:
  double squared_distance(const std::vector<double>& g) const {
    double sum = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i) {
      const double d = reference_[i] - g[i];
      sum += d * d;
    }
    return sum;
  }

  Signal signal_;
  SecondaryAnalysis analysis_;
  double kappa_;
  std::size_t budget_;
  Compressor compressor_;
  Signal baseline_;
  std::vector<double> reference_;
  double se0_ = 0.0;
  bool degenerate_ = false;
};

/// Runs one magnifying-glass compression for `interval` and scores it
/// against a precomputed baseline loss `se0`.
inline CandidateResult evaluate_candidate(const Signal& signal, const SecondaryAnalysis& analysis,
                                          const Interval& interval, double kappa, std::size_t budget, double se0) {
  if (!(se0 > 0.0)) throw DegenerateInputError("SE_0 must be positive");
  const auto compressed = compress_region(signal, Region({interval}), kappa, budget);
  CandidateResult r;
  r.interval = interval;
  r.se_B = loss(analysis, signal.values(), compressed.approximation);
  r.relse = r.se_B / se0;
  r.kappa_hat = compressed.report.kappa_hat;
  r.sigma2_B = compressed.report.sigma2_B;
  r.sigma2_Bc = compressed.report.sigma2_Bc;
  return r;
}

struct SearchOptions {
  unsigned threads = 0;  // 0: hardware concurrency
};

struct SearchRun {
  std::uint64_t signal_fingerprint = 0;
  std::string analysis;
  double kappa = 0.0;
  std::size_t budget = 0;
  double se0 = 0.0;
  std::vector<CandidateResult> results;  // ascending relSE, ties by (a, b)
  std::chrono::duration<double> elapsed{};
};

inline bool ranks_before(const CandidateResult& x, const CandidateResult& y) {
  if (x.relse != y.relse) return x.relse < y.relse;
  return x.interval < y.interval;
}

/// Evaluates every interval in parallel. Each result lands in its own slot,
/// and the final sort has a total order, so the outcome does not depend on
/// scheduling.
inline SearchRun search_intervals(const SearchContext& context, std::span<const Interval> candidates,
                                  SearchOptions options = {}) {
  const auto start = std::chrono::steady_clock::now();
  context.require_nondegenerate();

  std::vector<CandidateResult> results(candidates.size());
  unsigned threads = options.threads ? options.threads : std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, std::max<std::size_t>(1, candidates.size())));

  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&] {
    try {
      for (std::size_t i = next++; i < candidates.size(); i = next++) results[i] = context.evaluate(candidates[i]);
    } catch (...) {
      std::lock_guard lock(failure_mutex);
      if (!failure) failure = std::current_exception();
      next = candidates.size();
    }
  };
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(threads);
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
  }
  if (failure) std::rethrow_exception(failure);

  std::sort(results.begin(), results.end(), ranks_before);

  SearchRun run;
  run.signal_fingerprint = signal_fingerprint(context.signal());
  run.analysis = context.analysis().descriptor();
  run.kappa = context.kappa();
  run.budget = context.budget();
  run.se0 = context.se0();
  run.results = std::move(results);
  run.elapsed = std::chrono::steady_clock::now() - start;
  return run;
}

/// Full search over the candidate grid. Throws DegenerateInputError when the
/// baseline is already exact for this analysis.
inline SearchRun run_search(const Signal& signal, const SecondaryAnalysis& analysis, double kappa,
                            std::size_t budget, SearchOptions options = {}) {
  const auto start = std::chrono::steady_clock::now();
  SearchContext context(signal, analysis, kappa, budget);
  const auto candidates = candidate_intervals(signal.size());
  auto run = search_intervals(context, candidates, options);
  run.elapsed = std::chrono::steady_clock::now() - start;
  return run;
}

/// First ceil(p * count) results.
inline std::vector<CandidateResult> top_fraction(const SearchRun& run, double p) {
  if (!(p > 0.0 && p <= 1.0)) throw std::invalid_argument("top fraction must lie in (0, 1]");
  const auto count = static_cast<std::size_t>(std::ceil(p * static_cast<double>(run.results.size()) - 1e-9));
  const auto keep = std::min(run.results.size(), std::max<std::size_t>(count, run.results.empty() ? 0 : 1));
  return {run.results.begin(), run.results.begin() + static_cast<std::ptrdiff_t>(keep)};
}

/// Header `a,b,relSE,kappa_hat,sigma2_B,sigma2_Bc`; 12 significant digits;
/// an undefined kappa_hat is written as `nan`.
inline void write_results_csv(std::ostream& out, std::span<const CandidateResult> results) {
  out << "a,b,relSE,kappa_hat,sigma2_B,sigma2_Bc\n";
  for (const auto& r : results) {
    out << r.interval.first << ',' << r.interval.last << ',' << format_significant(r.relse, 12) << ','
        << (r.kappa_hat ? format_significant(*r.kappa_hat, 12) : std::string("nan")) << ','
        << format_significant(r.sigma2_B, 12) << ',' << format_significant(r.sigma2_Bc, 12) << '\n';
  }
}

}  // namespace pwz
