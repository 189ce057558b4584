// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The pwz Authors

#include <catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>
#include <optional>
#include <random>
#include <string>

#include "pwz/expr.hpp"

using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;
namespace ex = pwz::expr;

namespace {

const char* const kCorpus[] = {
    "f",
    "f^3",
    "exp(f/6)*sin(f)",
    "sin(f)*cos(f)",
    "exp(-(f^2))",
    "log(f^2 + 1)",
    "sqrt(f^2 + 1)",
    "abs(f)*f",
    "1/(1 + f^2)",
    "f^-2",
    "sin(exp(f/3))",
    "cos(f)^2 + sin(f)^2",
    "(f - 1)*(f + 2)*(f - 0.5)",
    "exp(sin(f))",
    "log(abs(f) + 1)",
    "sqrt(abs(f) + 0.1)*f",
    "f/(2 + cos(f))",
    "-f^3 + 4*f",
    "exp(f/6)*sin(f)/(1 + f^2)",
    "1.5e-1*f^4 - f - 2^3",
};

std::optional<double> try_eval(const ex::Expr& e, double x) {
  try {
    return ex::eval(e, x);
  } catch (const pwz::DomainError&) {
    return std::nullopt;
  }
}

// Five-point stencil, O(h^4). The step shrinks near 0, where f^-2 has its pole.
std::optional<double> numeric_derivative(const ex::Expr& e, double x) {
  const double h = 1e-3 * std::clamp(std::abs(x), 1e-2, 1.0);
  const auto m2 = try_eval(e, x - 2 * h), m1 = try_eval(e, x - h), p1 = try_eval(e, x + h), p2 = try_eval(e, x + 2 * h);
  if (!m2 || !m1 || !p1 || !p2) return std::nullopt;
  return (*m2 - 8 * *m1 + 8 * *p1 - *p2) / (12 * h);
}

std::string random_expression(std::mt19937_64& rng, int depth) {
  std::uniform_int_distribution<int> pick(0, depth <= 0 ? 1 : 9);
  switch (pick(rng)) {
    case 0: return "f";
    case 1: return std::to_string(std::uniform_int_distribution<int>(0, 9)(rng)) + ".5";
    case 2: return random_expression(rng, depth - 1) + " + " + random_expression(rng, depth - 1);
    case 3: return random_expression(rng, depth - 1) + " - " + random_expression(rng, depth - 1);
    case 4: return random_expression(rng, depth - 1) + "*" + random_expression(rng, depth - 1);
    case 5: return random_expression(rng, depth - 1) + "/" + random_expression(rng, depth - 1);
    case 6: return "(" + random_expression(rng, depth - 1) + ")^" + std::to_string(std::uniform_int_distribution<int>(-3, 3)(rng));
    case 7: return "-" + random_expression(rng, depth - 1);
    case 8: return "sin(" + random_expression(rng, depth - 1) + ")";
    default: return "exp(" + random_expression(rng, depth - 1) + "/9)";
  }
}

}  // namespace

TEST_CASE("parse basics") {
  CHECK(ex::parse("f") == ex::Expr::variable());
  CHECK(ex::eval(ex::parse("1+2*3"), 0.4) == 7.0);
  CHECK(ex::eval(ex::parse(" ( 1 + 2 ) * 3 "), 0.0) == 9.0);
  CHECK(ex::eval(ex::parse("f^3"), 2.0) == 8.0);
  CHECK(ex::eval(ex::parse("2^3^2"), 0.0) == 512.0);  // right associative
  CHECK(ex::eval(ex::parse("-f^2"), 3.0) == 9.0);     // unary minus binds tighter than ^
  CHECK(ex::eval(ex::parse("-(f^2)"), 3.0) == -9.0);
  CHECK(ex::eval(ex::parse("8/4/2"), 0.0) == 1.0);
  CHECK(ex::eval(ex::parse("1-2-3"), 0.0) == -4.0);
  CHECK(ex::eval(ex::parse("f^-1"), 4.0) == 0.25);
  CHECK(ex::eval(ex::parse("2.5e1 + .5"), 0.0) == 25.5);
}

TEST_CASE("the exponential-sine analysis") {
  const auto e = ex::parse("exp(f/6)*sin(f)");
  const auto* top = std::get_if<ex::node::Binary>(&e.root().data);
  REQUIRE(top != nullptr);
  CHECK(top->op == ex::BinaryOp::mul);
  CHECK(ex::eval(e, 0.0) == 0.0);

  const auto d = ex::differentiate(e);
  const auto expected = ex::parse("exp(f/6)/6*sin(f) + exp(f/6)*cos(f)");
  for (double x = -3.0; x <= 3.0; x += 0.25) CHECK_THAT(ex::eval(d, x), WithinRel(ex::eval(expected, x), 1e-14) || WithinAbs(ex::eval(expected, x), 1e-15));
}

TEST_CASE("simple derivatives") {
  CHECK(ex::differentiate(ex::parse("f")) == ex::Expr::number(1.0));
  CHECK(ex::format(ex::differentiate(ex::parse("f^3"))) == "3*f^2");
  CHECK(ex::differentiate(ex::parse("2^3")) == ex::Expr::number(0.0));
  CHECK(ex::format(ex::differentiate(ex::parse("f + 4"))) == "1");
  CHECK(ex::format(ex::differentiate(ex::parse("sin(f)"))) == "cos(f)");
  CHECK(ex::format(ex::differentiate(ex::parse("abs(f)"))) == "sign(f)");
  CHECK(ex::eval(ex::differentiate(ex::parse("abs(f)")), 0.0) == 0.0);
}

TEST_CASE("symbolic derivatives agree with finite differences on the corpus") {
  std::mt19937_64 rng(42);
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  for (const char* src : kCorpus) {
    const auto e = ex::parse(src);
    const auto d = ex::differentiate(e);
    int checked = 0;
    for (int i = 0; i < 100; ++i) {
      const double x = u(rng);
      const auto numeric = numeric_derivative(e, x);
      const auto symbolic = try_eval(d, x);
      if (!numeric || !symbolic) continue;
      ++checked;
      INFO(src << " at " << x << ": " << ex::format(d));
      CHECK(std::abs(*symbolic - *numeric) <= 1e-6 * std::max(std::abs(*symbolic), 1e-3));
    }
    CHECK(checked >= 95);
  }
}

TEST_CASE("domain errors name the failing piece") {
  CHECK_THROWS_AS(ex::eval(ex::parse("log(f)"), -1.0), pwz::DomainError);
  CHECK_THROWS_AS(ex::eval(ex::parse("sqrt(f)"), -1.0), pwz::DomainError);
  CHECK_THROWS_AS(ex::eval(ex::parse("1/f"), 0.0), pwz::DomainError);
  CHECK_THROWS_AS(ex::eval(ex::parse("exp(f)"), 1000.0), pwz::DomainError);
  try {
    ex::eval(ex::parse("2*log(f - 1)"), 0.5);
    FAIL("expected a domain error");
  } catch (const pwz::DomainError& err) {
    CHECK(err.subexpression() == "log(f - 1)");
  }
}

TEST_CASE("syntax errors carry a byte offset") {
  auto offset = [](std::string_view text) -> std::size_t {
    try {
      ex::parse(text);
    } catch (const pwz::ParseError& e) {
      return e.position();
    }
    return std::string::npos;
  };
  CHECK(offset("f +") == 3);
  CHECK(offset("foo(f)") == 0);
  CHECK(offset("f^f") == 2);
  CHECK(offset("(f") == 2);
  CHECK(offset("f)") == 1);
  CHECK(offset("") == 0);
  CHECK(offset("sin f") == 4);
  CHECK(offset("1..2") != std::string::npos);
  CHECK_THROWS_AS(ex::parse(std::string(5000, 'f')), pwz::ParseError);
  CHECK_THROWS_AS(ex::parse(std::string(1000, '(') + "f" + std::string(1000, ')')), pwz::ParseError);
  CHECK_THROWS_AS(ex::parse(std::string(1000, '-') + "f"), pwz::ParseError);
}

TEST_CASE("format and parse round trip") {
  for (const char* src : kCorpus) {
    const auto e = ex::parse(src);
    CHECK(ex::parse(ex::format(e)) == e);
  }
  std::mt19937_64 rng(17);
  for (int i = 0; i < 500; ++i) {
    const auto text = random_expression(rng, 5);
    const auto e = ex::parse(text);
    INFO(text << " -> " << ex::format(e));
    REQUIRE(ex::parse(ex::format(e)) == e);
    const auto d = ex::differentiate(e);
    REQUIRE(ex::parse(ex::format(d)) == d);
  }
}

TEST_CASE("parser never fails in an unstructured way") {
  std::mt19937_64 rng(1);
  const std::string alphabet = "f()+-*/^.0123456789e sincoexplogqrtab\t\n\xff";
  std::uniform_int_distribution<std::size_t> len(0, 40), ch(0, alphabet.size() - 1);
  std::uniform_int_distribution<int> byte(0, 255);
  for (int i = 0; i < 20000; ++i) {
    std::string s(len(rng), ' ');
    for (char& c : s) c = i % 2 ? alphabet[ch(rng)] : static_cast<char>(byte(rng));
    try {
      const auto e = ex::parse(s);
      (void)ex::differentiate(e);
      (void)ex::format(e);
    } catch (const pwz::ParseError&) {
    }
  }
  SUCCEED();
}
