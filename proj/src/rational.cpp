#include "cochain/rational.hpp"

#include <cmath>
#include <stdexcept>

namespace cochain {

std::string to_string(const Rational& r) {
  Rational c = r;
  c.canonicalize();
  return c.get_num().get_str() + "/" + c.get_den().get_str();
}

std::string to_string(const Natural& n) { return n.get_str(); }

namespace {

bool all_digits(std::string_view s) {
  if (s.empty()) return false;
  for (char ch : s)
    if (ch < '0' || ch > '9') return false;
  return true;
}

Natural parse_integer(std::string_view s) {
  bool neg = false;
  if (!s.empty() && (s.front() == '-' || s.front() == '+')) {
    neg = s.front() == '-';
    s.remove_prefix(1);
  }
  if (!all_digits(s)) throw std::invalid_argument("malformed integer: '" + std::string(s) + "'");
  Natural v(std::string(s), 10);
  return neg ? Natural(-v) : v;
}

}  // namespace

Rational parse_rational(std::string_view text) {
  auto slash = text.find('/');
  if (slash == std::string_view::npos) return Rational(parse_integer(text));
  Natural num = parse_integer(text.substr(0, slash));
  auto den_text = text.substr(slash + 1);
  if (!all_digits(den_text)) throw std::invalid_argument("malformed denominator in '" + std::string(text) + "'");
  Natural den(std::string(den_text), 10);
  if (den == 0) throw std::invalid_argument("zero denominator in '" + std::string(text) + "'");
  Rational r(num, den);
  r.canonicalize();
  return r;
}

Natural parse_natural(std::string_view text) {
  if (!all_digits(text)) throw std::invalid_argument("malformed natural: '" + std::string(text) + "'");
  return Natural(std::string(text), 10);
}

Rational pow2_neg(unsigned k) {
  Natural den = 1;
  mpz_mul_2exp(den.get_mpz_t(), den.get_mpz_t(), k);
  return Rational(Natural(1), den);
}

Rational dyadic(const Natural& num, unsigned k) {
  Natural den = 1;
  mpz_mul_2exp(den.get_mpz_t(), den.get_mpz_t(), k);
  Rational r(num, den);
  r.canonicalize();
  return r;
}

Rational round_to_dyadic(double x, unsigned bits) {
  if (!std::isfinite(x)) throw std::domain_error("round_to_dyadic: non-finite input");
  double scaled = std::ldexp(x, static_cast<int>(bits));
  return dyadic(Natural(std::round(scaled)), bits);
}

Rational ceil_to_dyadic(double x, unsigned bits) {
  if (!std::isfinite(x)) throw std::domain_error("ceil_to_dyadic: non-finite input");
  // ldexp is exact; the ceiling is taken on an exactly representable value.
  double scaled = std::ceil(std::ldexp(x, static_cast<int>(bits)));
  Rational r = dyadic(Natural(scaled), bits);
  // Guard against the double -> mpz conversion for huge magnitudes.
  if (r < Rational(x)) r += pow2_neg(bits);
  return r;
}

Natural isqrt(const Natural& n) {
  if (n < 0) throw std::domain_error("isqrt of negative number");
  Natural r;
  mpz_sqrt(r.get_mpz_t(), n.get_mpz_t());
  return r;
}

Rational sqrt_approx(const Rational& s, unsigned k) {
  if (s < 0) throw std::domain_error("sqrt_approx of negative number");
  // a = floor(sqrt(floor(s * 4^(k+1)))) satisfies a <= sqrt(s) 2^(k+1) < a + 1.
  Natural scaled_num = s.get_num();
  mpz_mul_2exp(scaled_num.get_mpz_t(), scaled_num.get_mpz_t(), 2 * (k + 1));
  Natural floor_val;
  mpz_fdiv_q(floor_val.get_mpz_t(), scaled_num.get_mpz_t(), s.get_den_mpz_t());
  return dyadic(isqrt(floor_val), k + 1);
}

}  // namespace cochain
