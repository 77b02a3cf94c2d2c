// SPDX-FileCopyrightText: (c) 2026 The MoodPupilar Authors
//
// SPDX-License-Identifier: Apache-2.0

// Line-oriented text encoding shared by every serialized model:
// `key v1 v2 ...` with reals at 17 significant digits.

#pragma once

#include <cstdint>
#include <istream>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <fmt/format.h>

#include "moodpupilar/csv.hpp"
#include "moodpupilar/domain.hpp"
#include "moodpupilar/error.hpp"

namespace moodpupilar::learn::io {

inline void put_reals(std::ostream& out, std::string_view key, std::span<const double> values) {
  out << key << ' ' << values.size();
  for (const double v : values) out << ' ' << csv::format_real(v);
  out << '\n';
}

inline void put_real(std::ostream& out, std::string_view key, double value) {
  out << key << ' ' << csv::format_real(value) << '\n';
}

template <class Int>
void put_int(std::ostream& out, std::string_view key, Int value) {
  out << key << ' ' << value << '\n';
}

inline std::string next_token(std::istream& in) {
  std::string token;
  if (!(in >> token)) throw Error(ErrorCode::ParseError, "unexpected end of model document");
  return token;
}

inline void expect(std::istream& in, std::string_view key) {
  const auto token = next_token(in);
  if (token != key) {
    throw Error(ErrorCode::ParseError, fmt::format("expected '{}' in model document, got '{}'", key, token));
  }
}

inline double get_real_token(std::istream& in) {
  const auto token = next_token(in);
  auto v = parse_double(token);
  if (!v) throw Error(ErrorCode::ParseError, fmt::format("bad real '{}' in model document", token));
  return *v;
}

inline long long get_int_token(std::istream& in) {
  const auto token = next_token(in);
  try {
    std::size_t pos = 0;
    const long long v = std::stoll(token, &pos);
    if (pos != token.size()) throw std::invalid_argument(token);
    return v;
  } catch (const std::exception&) {
    throw Error(ErrorCode::ParseError, fmt::format("bad integer '{}' in model document", token));
  }
}

inline std::uint64_t get_uint_token(std::istream& in) {
  const auto token = next_token(in);
  try {
    std::size_t pos = 0;
    if (token.empty() || token.front() == '-') throw std::invalid_argument(token);
    const unsigned long long v = std::stoull(token, &pos);
    if (pos != token.size()) throw std::invalid_argument(token);
    return v;
  } catch (const std::exception&) {
    throw Error(ErrorCode::ParseError, fmt::format("bad unsigned integer '{}' in model document", token));
  }
}

inline double get_real(std::istream& in, std::string_view key) {
  expect(in, key);
  return get_real_token(in);
}

inline long long get_int(std::istream& in, std::string_view key) {
  expect(in, key);
  return get_int_token(in);
}

inline std::vector<double> get_reals(std::istream& in, std::string_view key) {
  expect(in, key);
  const long long n = get_int_token(in);
  if (n < 0) throw Error(ErrorCode::ParseError, "negative length in model document");
  std::vector<double> values(static_cast<std::size_t>(n));
  for (auto& v : values) v = get_real_token(in);
  return values;
}

}  // namespace moodpupilar::learn::io
