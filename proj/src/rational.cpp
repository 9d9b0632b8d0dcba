#include "boxlab/rational.hpp"

#include <cctype>
#include <stdexcept>

namespace boxlab {

Rational make_rational(long numerator, long denominator) {
  if (denominator == 0) throw std::invalid_argument("zero denominator");
  Rational r(numerator, denominator);
  r.canonicalize();
  return r;
}

namespace {

bool all_digits(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s)
    if (!std::isdigit(static_cast<unsigned char>(c))) return false;
  return true;
}

}  // namespace

Rational parse_rational(std::string_view text) {
  std::string_view body = text;
  if (!body.empty() && (body.front() == '-' || body.front() == '+')) body.remove_prefix(1);
  const auto slash = body.find('/');
  const std::string_view num = body.substr(0, slash);
  const std::string_view den =
      slash == std::string_view::npos ? std::string_view("1") : body.substr(slash + 1);
  if (!all_digits(num) || !all_digits(den))
    throw std::invalid_argument("malformed rational '" + std::string(text) + "'");
  mpz_class d(std::string(den), 10);
  if (d == 0) throw std::invalid_argument("zero denominator in '" + std::string(text) + "'");
  mpz_class n(std::string(num), 10);
  if (!text.empty() && text.front() == '-') n = -n;
  Rational r(n, d);
  r.canonicalize();
  return r;
}

std::string to_string(const Rational& value) { return value.get_str(); }

std::size_t RationalHash::operator()(const Rational& value) const noexcept {
  const auto num = value.get_num_mpz_t();
  const auto den = value.get_den_mpz_t();
  std::size_t h = mpz_get_ui(num) * 0x9E3779B97F4A7C15ULL;
  h ^= static_cast<std::size_t>(mpz_sgn(num)) + 0x632BE59BD9B4E019ULL + (h << 6) + (h >> 2);
  h ^= mpz_get_ui(den) + 0x9E3779B97F4A7C15ULL + (h << 6) + (h >> 2);
  return h;
}

std::size_t hash_rationals(const RationalVector& values) noexcept {
  std::size_t h = values.size();
  RationalHash hasher;
  for (const auto& v : values) h ^= hasher(v) + 0x9E3779B97F4A7C15ULL + (h << 6) + (h >> 2);
  return h;
}

}  // namespace boxlab
