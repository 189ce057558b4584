// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The pwz Authors

#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace pwz {

// Precondition violations (bad n, budget, kappa, region...) are reported as
// std::invalid_argument. The types below cover the remaining failure kinds.

/// Malformed textual input. `position` is a 1-based line number for
/// line-oriented formats and a 0-based byte offset for expressions.
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& what, std::size_t position)
      : std::runtime_error(what), position_(position) {}

  std::size_t position() const noexcept { return position_; }

 private:
  std::size_t position_;
};

/// Expression evaluated outside its domain, e.g. log of a negative value.
class DomainError : public std::runtime_error {
 public:
  DomainError(const std::string& what, std::string subexpression)
      : std::runtime_error(what), subexpression_(std::move(subexpression)) {}

  const std::string& subexpression() const noexcept { return subexpression_; }

 private:
  std::string subexpression_;
};

/// Inputs for which the requested computation is meaningless, e.g. a search
/// whose baseline already reproduces the secondary analysis exactly.
class DegenerateInputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace pwz
