// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The pwz Authors

#pragma once

// pwz-v1: a single JSON object
//
//   {"format":"pwz-v1","wavelet":"haar-orthonormal-v1","n":<int>,
//    "slots":[<int>...],"values":[<float>...],
//    "meta":{"kappa":<float|null>,"region":[[a,b],...]|null,"budget":<int>}}
//
// Slot 0 is the scaling coefficient, detail (j, k) is slot 2^j + k. Floats
// are written as shortest round-trip decimals, so save(load(save(x))) is
// byte-identical to save(x).

#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "pwz/compressor.hpp"
#include "pwz/errors.hpp"

namespace pwz {

inline constexpr const char* kSparseFormatId = "pwz-v1";

inline std::string save_sparse(const SparseRepresentation& rep) {
  rep.validate();
  nlohmann::ordered_json j;
  j["format"] = kSparseFormatId;
  j["wavelet"] = rep.wavelet;
  j["n"] = rep.n;
  j["slots"] = rep.slots;
  j["values"] = rep.values;
  nlohmann::ordered_json meta;
  meta["kappa"] = rep.kappa ? nlohmann::ordered_json(*rep.kappa) : nlohmann::ordered_json(nullptr);
  if (rep.region) {
    auto pieces = nlohmann::ordered_json::array();
    for (const auto& iv : rep.region->intervals()) pieces.push_back({iv.first, iv.last});
    meta["region"] = std::move(pieces);
  } else {
    meta["region"] = nullptr;
  }
  meta["budget"] = rep.budget;
  j["meta"] = std::move(meta);
  return j.dump() + "\n";
}

inline void save_sparse(const SparseRepresentation& rep, std::ostream& out) { out << save_sparse(rep); }

namespace detail {

inline const nlohmann::json& require_field(const nlohmann::json& obj, const char* key) {
  if (!obj.is_object() || !obj.contains(key)) {
    throw ParseError(std::string("pwz-v1: missing field '") + key + "'", 0);
  }
  return obj.at(key);
}

inline std::size_t as_count(const nlohmann::json& v, const char* what) {
  if (!v.is_number_unsigned()) throw ParseError(std::string("pwz-v1: '") + what + "' must be a non-negative integer", 0);
  return v.get<std::size_t>();
}

}  // namespace detail

/// Parses and validates a pwz-v1 document. Structural problems raise
/// ParseError; well-formed documents violating a representation invariant
/// raise std::invalid_argument.
inline SparseRepresentation load_sparse(std::string_view text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(std::string("pwz-v1: ") + e.what(), e.byte);
  }
  const auto& format = detail::require_field(j, "format");
  if (!format.is_string() || format.get<std::string>() != kSparseFormatId) {
    throw ParseError("pwz-v1: unsupported format tag", 0);
  }
  SparseRepresentation rep;
  const auto& wavelet = detail::require_field(j, "wavelet");
  if (!wavelet.is_string()) throw ParseError("pwz-v1: 'wavelet' must be a string", 0);
  rep.wavelet = wavelet.get<std::string>();
  rep.n = detail::as_count(detail::require_field(j, "n"), "n");

  const auto& slots = detail::require_field(j, "slots");
  const auto& values = detail::require_field(j, "values");
  if (!slots.is_array() || !values.is_array()) throw ParseError("pwz-v1: 'slots' and 'values' must be arrays", 0);
  for (const auto& s : slots) rep.slots.push_back(detail::as_count(s, "slots[]"));
  for (const auto& v : values) {
    if (!v.is_number()) throw ParseError("pwz-v1: 'values' must hold numbers", 0);
    rep.values.push_back(v.get<double>());
  }

  const auto& meta = detail::require_field(j, "meta");
  const auto& kappa = detail::require_field(meta, "kappa");
  if (!kappa.is_null()) {
    if (!kappa.is_number()) throw ParseError("pwz-v1: 'kappa' must be a number or null", 0);
    rep.kappa = kappa.get<double>();
  }
  const auto& region = detail::require_field(meta, "region");
  if (!region.is_null()) {
    if (!region.is_array()) throw ParseError("pwz-v1: 'region' must be an array or null", 0);
    std::vector<Interval> pieces;
    for (const auto& piece : region) {
      if (!piece.is_array() || piece.size() != 2) throw ParseError("pwz-v1: region pieces are [a, b] pairs", 0);
      pieces.push_back({detail::as_count(piece[0], "region"), detail::as_count(piece[1], "region")});
    }
    rep.region = Region(std::move(pieces));
  }
  rep.budget = detail::as_count(detail::require_field(meta, "budget"), "budget");
  rep.validate();
  return rep;
}

inline SparseRepresentation load_sparse(std::istream& in) {
  std::ostringstream buf;
  buf << in.rdbuf();
  return load_sparse(buf.str());
}

}  // namespace pwz
