#pragma once

#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>
#include <string_view>

#include <boost/multiprecision/cpp_int.hpp>

namespace grpcert {

using BigInt = boost::multiprecision::cpp_int;

inline BigInt parse_bigint(std::string_view text) {
  if (text.empty()) {
    throw std::invalid_argument("empty integer literal");
  }
  std::size_t i = (text.front() == '-' || text.front() == '+') ? 1 : 0;
  if (i == text.size()) {
    throw std::invalid_argument("integer literal has no digits");
  }
  for (std::size_t j = i; j < text.size(); ++j) {
    if (text[j] < '0' || text[j] > '9') {
      throw std::invalid_argument("invalid integer literal '" + std::string(text) + "'");
    }
  }
  return BigInt(std::string(text));
}

inline std::string to_string(const BigInt& value) { return value.str(); }

inline BigInt big_pow(const BigInt& base, unsigned exponent) {
  return boost::multiprecision::pow(base, exponent);
}

inline bool fits_u64(const BigInt& value) {
  return value >= 0 && value <= BigInt(std::numeric_limits<std::uint64_t>::max());
}

}  // namespace grpcert
