#pragma once

#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>

#include <boost/multiprecision/cpp_int.hpp>

namespace kronlab {

/// Exact signed integer used for every count, order and character value.
using BigInt = boost::multiprecision::number<boost::multiprecision::cpp_int_backend<>, boost::multiprecision::et_off>;

/// Non-negative structure constant (g, c or reduced g).
using Coefficient = BigInt;

inline std::string to_decimal(const BigInt& v) { return v.str(); }

inline BigInt from_decimal(const std::string& text) {
  if (text.empty()) throw std::invalid_argument("empty decimal string");
  std::size_t i = (text[0] == '-') ? 1 : 0;
  if (i == text.size()) throw std::invalid_argument("bad decimal: " + text);
  for (std::size_t j = i; j < text.size(); ++j)
    if (text[j] < '0' || text[j] > '9') throw std::invalid_argument("bad decimal: " + text);
  return BigInt(text);
}

inline BigInt factorial(int n) {
  if (n < 0) throw std::invalid_argument("factorial of negative number");
  BigInt r = 1;
  for (int i = 2; i <= n; ++i) r *= i;
  return r;
}

inline BigInt binomial(int n, int k) {
  if (k < 0 || n < 0 || k > n) return 0;
  k = std::min(k, n - k);
  BigInt r = 1;
  for (int i = 1; i <= k; ++i) {
    r *= n - k + i;
    r /= i;
  }
  return r;
}

/// (k_1 + ... + k_m)! / (k_1! ... k_m!)
inline BigInt multinomial(std::span<const int> parts) {
  BigInt r = 1;
  int total = 0;
  for (int k : parts) {
    total += k;
    r *= binomial(total, k);
  }
  return r;
}

inline BigInt pow_int(const BigInt& base, unsigned exponent) {
  return boost::multiprecision::pow(base, exponent);
}

/// floor(sqrt(v)) for v >= 0.
inline BigInt isqrt(const BigInt& v) {
  if (v < 0) throw std::domain_error("isqrt of negative value");
  return boost::multiprecision::sqrt(v);
}

}  // namespace kronlab
