// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The pwz Authors

#pragma once

#include <algorithm>
#include <cmath>
#include <concepts>
#include <cstddef>
#include <initializer_list>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "pwz/expr.hpp"
#include "pwz/numfmt.hpp"
#include "pwz/region.hpp"
#include "pwz/signal.hpp"

namespace pwz {

/// Dense row-major matrix; only used where a full Jacobian is wanted
/// (tests, finite differences).
struct Matrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> data;

  Matrix() = default;
  Matrix(std::size_t r, std::size_t c) : rows(r), cols(c), data(r * c, 0.0) {}

  double& operator()(std::size_t i, std::size_t j) { return data[i * cols + j]; }
  double operator()(std::size_t i, std::size_t j) const { return data[i * cols + j]; }
};

enum class JacobianForm {
  diagonal,  // g_i depends on f(i) only; m = n
  dense,     // general m x n
};

/// diag(J'J): how strongly each sample drives the secondary-analysis error.
struct ImportanceFunction {
  std::vector<double> values;

  std::size_t size() const noexcept { return values.size(); }
  double operator[](std::size_t i) const noexcept { return values[i]; }
};

namespace analyses {

/// g(f)_i = lambda f(i) on A, f(i) elsewhere.
struct ScaleRegion {
  double lambda = 1.0;
  Region region;
};

/// g(f) = (sum f, sum f^2, ..., sum f^p).
struct Moments {
  int order = 4;
};

/// g(f)_i = e(f(i)) for a DSL expression e.
struct Elementwise {
  expr::Expr function;
  expr::Expr derivative;
  std::string source;
};

}  // namespace analyses

/// A secondary analysis g: R^n -> R^m with analytic Jacobian access.
/// Immutable value type; safe to share across threads.
class SecondaryAnalysis {
 public:
  using Variant = std::variant<analyses::ScaleRegion, analyses::Moments, analyses::Elementwise>;

  explicit SecondaryAnalysis(Variant v) : impl_(std::move(v)) {}

  const Variant& variant() const noexcept { return impl_; }

  /// Canonical selector string, parseable by parse_analysis.
  std::string descriptor() const {
    return std::visit(
        [](const auto& a) -> std::string {
          using T = std::decay_t<decltype(a)>;
          if constexpr (std::is_same_v<T, analyses::ScaleRegion>) {
            const auto& iv = a.region.intervals();
            std::string s = "scale-region:lambda=" + format_exact(a.lambda);
            if (iv.size() == 1) s += ",a=" + std::to_string(iv[0].first) + ",b=" + std::to_string(iv[0].last);
            else {
              auto pieces = format_region(a.region);
              std::replace(pieces.begin(), pieces.end(), ',', ';');
              s += ",region=" + pieces;
            }
            return s;
          } else if constexpr (std::is_same_v<T, analyses::Moments>) {
            return "moments:p=" + std::to_string(a.order);
          } else {
            return "expr:" + a.source;
          }
        },
        impl_);
  }

  JacobianForm jacobian_form() const noexcept {
    return std::holds_alternative<analyses::Moments>(impl_) ? JacobianForm::dense : JacobianForm::diagonal;
  }

  std::size_t output_dim(std::size_t n) const noexcept {
    if (const auto* m = std::get_if<analyses::Moments>(&impl_)) return static_cast<std::size_t>(m->order);
    return n;
  }

  std::vector<double> evaluate(std::span<const double> f) const {
    return std::visit(
        [&](const auto& a) -> std::vector<double> {
          using T = std::decay_t<decltype(a)>;
          if constexpr (std::is_same_v<T, analyses::ScaleRegion>) {
            const auto mask = a.region.mask(f.size());
            std::vector<double> g(f.size());
            for (std::size_t i = 0; i < f.size(); ++i) g[i] = mask[i] ? a.lambda * f[i] : f[i];
            return g;
          } else if constexpr (std::is_same_v<T, analyses::Moments>) {
            std::vector<double> g(static_cast<std::size_t>(a.order), 0.0);
            for (double x : f) {
              double power = 1.0;
              for (auto& gi : g) {
                power *= x;
                gi += power;
              }
            }
            return g;
          } else {
            std::vector<double> g(f.size());
            for (std::size_t i = 0; i < f.size(); ++i) g[i] = expr::eval(a.function, f[i]);
            return g;
          }
        },
        impl_);
  }

  std::vector<double> evaluate(const Signal& f) const { return evaluate(f.values()); }

  /// dg_i/df(i) for diagonal analyses. Throws for dense ones.
  std::vector<double> jacobian_diagonal(std::span<const double> f) const {
    return std::visit(
        [&](const auto& a) -> std::vector<double> {
          using T = std::decay_t<decltype(a)>;
          if constexpr (std::is_same_v<T, analyses::ScaleRegion>) {
            const auto mask = a.region.mask(f.size());
            std::vector<double> d(f.size());
            for (std::size_t i = 0; i < f.size(); ++i) d[i] = mask[i] ? a.lambda : 1.0;
            return d;
          } else if constexpr (std::is_same_v<T, analyses::Elementwise>) {
            std::vector<double> d(f.size());
            for (std::size_t i = 0; i < f.size(); ++i) d[i] = expr::eval(a.derivative, f[i]);
            return d;
          } else {
            throw std::logic_error("moments analysis has a dense Jacobian");
          }
        },
        impl_);
  }

  /// Full m x n Jacobian.
  Matrix jacobian(std::span<const double> f) const {
    const std::size_t n = f.size();
    if (const auto* m = std::get_if<analyses::Moments>(&impl_)) {
      Matrix J(static_cast<std::size_t>(m->order), n);
      for (std::size_t t = 0; t < n; ++t) {
        double power = 1.0;  // f^(i-1)
        for (std::size_t i = 0; i < J.rows; ++i) {
          J(i, t) = static_cast<double>(i + 1) * power;
          power *= f[t];
        }
      }
      return J;
    }
    const auto d = jacobian_diagonal(f);
    Matrix J(n, n);
    for (std::size_t t = 0; t < n; ++t) J(t, t) = d[t];
    return J;
  }

  /// J * delta, without materialising J.
  std::vector<double> apply_jacobian(std::span<const double> f, std::span<const double> delta) const {
    if (f.size() != delta.size()) throw std::invalid_argument("length mismatch");
    if (const auto* m = std::get_if<analyses::Moments>(&impl_)) {
      std::vector<double> out(static_cast<std::size_t>(m->order), 0.0);
      for (std::size_t t = 0; t < f.size(); ++t) {
        double power = 1.0;
        for (std::size_t i = 0; i < out.size(); ++i) {
          out[i] += static_cast<double>(i + 1) * power * delta[t];
          power *= f[t];
        }
      }
      return out;
    }
    auto d = jacobian_diagonal(f);
    for (std::size_t t = 0; t < d.size(); ++t) d[t] *= delta[t];
    return d;
  }

 private:
  Variant impl_;
};

inline SecondaryAnalysis scale_region_analysis(double lambda, Region region) {
  if (!(lambda > 0.0) || !std::isfinite(lambda)) throw std::invalid_argument("lambda must be a positive finite number");
  return SecondaryAnalysis(analyses::ScaleRegion{lambda, std::move(region)});
}

inline SecondaryAnalysis moments_analysis(int order) {
  if (order < 1 || order > 8) throw std::invalid_argument("moments order p must lie in [1, 8]");
  return SecondaryAnalysis(analyses::Moments{order});
}

inline SecondaryAnalysis expression_analysis(std::string_view source) {
  auto function = expr::parse(source);
  auto derivative = expr::differentiate(function);
  return SecondaryAnalysis(analyses::Elementwise{std::move(function), std::move(derivative), std::string(trim(source))});
}

/// Parses `scale-region:lambda=<x>,a=<int>,b=<int>`, `moments:p=<int>` or
/// `expr:<expression>`. Errors are std::invalid_argument, except that a bad
/// expression surfaces as ParseError.
inline SecondaryAnalysis parse_analysis(std::string_view descriptor) {
  descriptor = trim(descriptor);
  const auto colon = descriptor.find(':');
  if (colon == std::string_view::npos) {
    throw std::invalid_argument("analysis '" + std::string(descriptor) + "' must look like kind:params");
  }
  const auto kind = descriptor.substr(0, colon);
  const auto params = descriptor.substr(colon + 1);
  if (kind == "expr") return expression_analysis(params);

  // key=value pairs separated by commas
  std::vector<std::pair<std::string_view, std::string_view>> kv;
  std::string_view rest = params;
  while (!rest.empty()) {
    const auto comma = rest.find(',');
    const auto item = trim(rest.substr(0, comma));
    const auto eq = item.find('=');
    if (eq == std::string_view::npos) throw std::invalid_argument("expected key=value, got '" + std::string(item) + "'");
    kv.emplace_back(trim(item.substr(0, eq)), trim(item.substr(eq + 1)));
    if (comma == std::string_view::npos) break;
    rest.remove_prefix(comma + 1);
  }
  auto lookup = [&](std::string_view key) -> std::optional<std::string_view> {
    for (const auto& [k, v] : kv)
      if (k == key) return v;
    return std::nullopt;
  };
  auto reject_unknown = [&](std::initializer_list<std::string_view> known) {
    for (const auto& [k, v] : kv) {
      bool ok = false;
      for (auto name : known) ok = ok || k == name;
      if (!ok) throw std::invalid_argument("unknown parameter '" + std::string(k) + "' for " + std::string(kind));
    }
  };

  if (kind == "scale-region") {
    reject_unknown({"lambda", "a", "b", "region"});
    const auto lambda_text = lookup("lambda");
    if (!lambda_text) throw std::invalid_argument("scale-region needs lambda");
    const auto lambda = parse_double(*lambda_text);
    if (!lambda) throw std::invalid_argument("scale-region: malformed lambda");
    if (const auto pieces = lookup("region")) {
      // multi-interval form: region=a:b;c:d
      if (lookup("a") || lookup("b")) throw std::invalid_argument("scale-region: give either a,b or region");
      std::string text(*pieces);
      std::replace(text.begin(), text.end(), ';', ',');
      return scale_region_analysis(*lambda, parse_region(text));
    }
    const auto a_text = lookup("a");
    const auto b_text = lookup("b");
    if (!a_text || !b_text) throw std::invalid_argument("scale-region needs lambda, a and b");
    const auto a = parse_integer<std::size_t>(*a_text);
    const auto b = parse_integer<std::size_t>(*b_text);
    if (!a || !b) throw std::invalid_argument("scale-region: a and b must be integers");
    return scale_region_analysis(*lambda, Region::interval(*a, *b));
  }
  if (kind == "moments") {
    reject_unknown({"p"});
    const auto p_text = lookup("p");
    if (!p_text) throw std::invalid_argument("moments needs p");
    const auto p = parse_integer<int>(*p_text);
    if (!p) throw std::invalid_argument("moments: p must be an integer");
    return moments_analysis(*p);
  }
  throw std::invalid_argument("unknown analysis kind '" + std::string(kind) + "'");
}

/// diag(M) with M = J'J. Only the diagonal is ever formed.
inline ImportanceFunction importance(const SecondaryAnalysis& analysis, std::span<const double> f) {
  ImportanceFunction imp;
  if (const auto* m = std::get_if<analyses::Moments>(&analysis.variant())) {
    imp.values.assign(f.size(), 0.0);
    for (std::size_t t = 0; t < f.size(); ++t) {
      double power = 1.0;
      for (int i = 1; i <= m->order; ++i) {
        const double entry = i * power;
        imp.values[t] += entry * entry;
        power *= f[t];
      }
    }
    return imp;
  }
  imp.values = analysis.jacobian_diagonal(f);
  for (auto& v : imp.values) v *= v;
  return imp;
}

inline ImportanceFunction importance(const SecondaryAnalysis& analysis, const Signal& f) {
  return importance(analysis, f.values());
}

/// ||g(f) - g(fhat)||^2
inline double loss(const SecondaryAnalysis& analysis, std::span<const double> f, std::span<const double> fhat) {
  if (f.size() != fhat.size()) throw std::invalid_argument("length mismatch in loss");
  const auto a = analysis.evaluate(f);
  const auto b = analysis.evaluate(fhat);
  double sum = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = a[i] - b[i];
    sum += d * d;
  }
  return sum;
}

inline double loss(const SecondaryAnalysis& analysis, const Signal& f, const Signal& fhat) {
  return loss(analysis, f.values(), fhat.values());
}

/// SE_B / SE_0. nullopt when the baseline loss is zero and the ratio is undefined.
inline std::optional<double> relse(const SecondaryAnalysis& analysis, const Signal& f, const Signal& fhat_region,
                                   const Signal& fhat_baseline) {
  const double se0 = loss(analysis, f, fhat_baseline);
  if (se0 == 0.0) return std::nullopt;
  return loss(analysis, f, fhat_region) / se0;
}

/// sigma2_Bc * [kappa * sum_{t in B} imp(t) + sum_{t not in B} imp(t)]
inline double risk_approx(const ImportanceFunction& imp, const Region& region, double kappa, double sigma2_Bc) {
  if (!(kappa > 0.0 && kappa <= 1.0)) throw std::invalid_argument("kappa must lie in (0, 1]");
  if (!(sigma2_Bc >= 0.0)) throw std::invalid_argument("sigma2_Bc must be non-negative");
  const auto mask = region.mask(imp.size());
  double inside = 0.0;
  double outside = 0.0;
  for (std::size_t t = 0; t < imp.size(); ++t) (mask[t] ? inside : outside) += imp[t];
  return sigma2_Bc * (kappa * inside + outside);
}

/// Per-coordinate step h(x) = relative * (1 + |x|).
struct StepRule {
  double relative = 1e-6;
  double operator()(double x) const noexcept { return relative * (1.0 + std::abs(x)); }
};

/// Central-difference Jacobian of any map R^n -> R^m.
template <typename Map>
  requires std::invocable<const Map&, std::span<const double>>
Matrix finite_diff_jacobian(const Map& g, std::span<const double> f, StepRule step = {}) {
  const std::size_t n = f.size();
  const std::size_t m = g(f).size();
  Matrix J(m, n);
  std::vector<double> probe(f.begin(), f.end());
  for (std::size_t t = 0; t < n; ++t) {
    const double h = step(f[t]);
    probe[t] = f[t] + h;
    const auto plus = g(std::span<const double>(probe));
    probe[t] = f[t] - h;
    const auto minus = g(std::span<const double>(probe));
    probe[t] = f[t];
    for (std::size_t i = 0; i < m; ++i) J(i, t) = (plus[i] - minus[i]) / (2.0 * h);
  }
  return J;
}

inline Matrix finite_diff_jacobian(const SecondaryAnalysis& analysis, std::span<const double> f, StepRule step = {}) {
  return finite_diff_jacobian([&](std::span<const double> x) { return analysis.evaluate(x); }, f, step);
}

}  // namespace pwz
