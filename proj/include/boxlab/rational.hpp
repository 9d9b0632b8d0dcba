#pragma once

#include <gmpxx.h>

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace boxlab {

// GMP rationals are kept canonical by every arithmetic operation; the helpers
// below make sure values built from raw numerator/denominator pairs are too.
using Rational = mpq_class;
using RationalVector = std::vector<Rational>;

Rational make_rational(long numerator, long denominator = 1);

// Accepts "p", "-p", "p/q". Throws std::invalid_argument on anything else
// (including a zero denominator).
Rational parse_rational(std::string_view text);

// Lowest terms, "p/q" or bare "p" when the denominator is one.
std::string to_string(const Rational& value);

struct RationalHash {
  std::size_t operator()(const Rational& value) const noexcept;
};

std::size_t hash_rationals(const RationalVector& values) noexcept;

inline bool is_zero(const Rational& value) { return sgn(value) == 0; }

}  // namespace boxlab
