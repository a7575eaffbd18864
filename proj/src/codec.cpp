#include "cochain/codec.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

namespace cochain::codec {

namespace {

void check_budget(const Natural& z, std::size_t bit_budget) {
  if (mpz_sizeinbase(z.get_mpz_t(), 2) > bit_budget)
    throw std::length_error("code exceeds bit budget of " + std::to_string(bit_budget));
}

}  // namespace

Natural pair(const Natural& x, const Natural& y) {
  Natural s = x + y;
  Natural t = s * (s + 1);
  mpz_fdiv_q_2exp(t.get_mpz_t(), t.get_mpz_t(), 1);
  return t + y;
}

std::pair<Natural, Natural> unpair(const Natural& z) {
  if (z < 0) throw std::domain_error("unpair of negative number");
  Natural w = (isqrt(8 * z + 1) - 1);
  mpz_fdiv_q_2exp(w.get_mpz_t(), w.get_mpz_t(), 1);
  Natural t = w * (w + 1);
  mpz_fdiv_q_2exp(t.get_mpz_t(), t.get_mpz_t(), 1);
  Natural y = z - t;
  Natural x = w - y;
  return {x, y};
}

Natural seq_encode(std::span<const Natural> s, std::size_t bit_budget) {
  if (s.empty()) throw std::invalid_argument("seq_encode: empty sequence has no code");
  Natural body = s.back();
  for (std::size_t i = s.size() - 1; i-- > 0;) {
    body = pair(s[i], body);
    check_budget(body, bit_budget);
  }
  Natural j = pair(Natural(static_cast<unsigned long>(s.size() - 1)), body);
  check_budget(j, bit_budget);
  return j;
}

std::vector<Natural> seq_decode(const Natural& j) {
  auto [len_m1, body] = unpair(j);
  if (!len_m1.fits_ulong_p() || len_m1.get_ui() > (std::size_t{1} << 30))
    throw std::length_error("seq_decode: sequence too long to materialize");
  std::size_t last = len_m1.get_ui();
  std::vector<Natural> out;
  out.reserve(last + 1);
  for (std::size_t i = 0; i < last; ++i) {
    auto [a, rest] = unpair(body);
    out.push_back(std::move(a));
    body = std::move(rest);
  }
  out.push_back(std::move(body));
  return out;
}

Natural seq_last_index(const Natural& j) { return unpair(j).first; }

Natural seq_at(const Natural& j, std::size_t i) {
  auto [len_m1, body] = unpair(j);
  if (Natural(static_cast<unsigned long>(i)) > len_m1) return 0;
  for (std::size_t step = 0; step < i; ++step) body = unpair(body).second;
  if (Natural(static_cast<unsigned long>(i)) == len_m1) return body;
  return unpair(body).first;
}

std::vector<Natural> index_set(const Natural& j) {
  auto members = seq_decode(j);
  std::sort(members.begin(), members.end());
  members.erase(std::unique(members.begin(), members.end()), members.end());
  return members;
}

Natural tuple_encode(std::span<const Natural> xs, std::size_t bit_budget) {
  if (xs.empty()) throw std::invalid_argument("tuple_encode: arity must be at least 1");
  Natural z = xs.back();
  for (std::size_t i = xs.size() - 1; i-- > 0;) {
    z = pair(xs[i], z);
    check_budget(z, bit_budget);
  }
  return z;
}

std::vector<Natural> tuple_decode(const Natural& z, std::size_t n) {
  if (n == 0) throw std::invalid_argument("tuple_decode: arity must be at least 1");
  std::vector<Natural> out;
  out.reserve(n);
  Natural rest = z;
  for (std::size_t i = 0; i + 1 < n; ++i) {
    auto [a, b] = unpair(rest);
    out.push_back(std::move(a));
    rest = std::move(b);
  }
  out.push_back(std::move(rest));
  return out;
}

Rational rational_at(const Natural& k) {
  auto [a, b] = unpair(k);
  Rational r(a + 1, b + 1);
  r.canonicalize();
  return r;
}

Natural rational_index(const Rational& r) {
  if (sgn(r) <= 0) throw std::domain_error("rational_index: only positive rationals are enumerated");
  Rational c = r;
  c.canonicalize();
  return pair(c.get_num() - 1, c.get_den() - 1);
}

Rational signed_rational_at(const Natural& k) {
  auto [s, rest] = unpair(k);
  auto [a, b] = unpair(rest);
  Rational r(a, b + 1);
  r.canonicalize();
  if (mpz_odd_p(s.get_mpz_t())) r = -r;
  return r;
}

Natural signed_rational_index(const Rational& r) {
  Rational c = r;
  c.canonicalize();
  Natural s = sgn(c) < 0 ? 1 : 0;
  Natural a = abs(c.get_num());
  return pair(s, pair(a, c.get_den() - 1));
}

Rational unit_rational_at(const Natural& k) {
  auto [a, b] = unpair(k);
  if (a + b == 0) return Rational(0);
  Rational r(a, a + b);
  r.canonicalize();
  return r;
}

Natural unit_rational_index(const Rational& r) {
  if (sgn(r) < 0 || r > 1) throw std::domain_error("unit_rational_index: value outside [0, 1]");
  Rational c = r;
  c.canonicalize();
  if (sgn(c) == 0) return 0;
  return pair(c.get_num(), c.get_den() - c.get_num());
}

namespace {

std::size_t checked_entry_count(std::size_t n, std::size_t m, std::size_t max_entries) {
  std::size_t count = 1;
  for (std::size_t d = 0; d < n; ++d) {
    if (count > max_entries / (m + 1)) throw std::length_error("grid family too large");
    count *= m + 1;
  }
  return count;
}

// Position of a multi-index inside the coded sequence.
Natural grid_position(std::span<const std::size_t> js) {
  std::vector<Natural> xs;
  xs.reserve(js.size());
  for (auto j : js) xs.emplace_back(static_cast<unsigned long>(j));
  return tuple_encode(xs);
}

}  // namespace

Natural grid_encode(const GridFamily& family, std::size_t bit_budget) {
  if (family.n == 0) throw std::invalid_argument("grid_encode: dimension must be at least 1");
  std::size_t count = checked_entry_count(family.n, family.m, std::size_t{1} << 30);
  if (family.entries.size() != count) throw std::invalid_argument("grid_encode: entry count does not match (m+1)^n");

  // Sequence positions reach f(m, ..., m); every other slot is padded with 0.
  std::vector<std::size_t> js(family.n, family.m);
  Natural top = grid_position(js);
  if (!top.fits_ulong_p() || top.get_ui() > bit_budget) throw std::length_error("grid_encode: sequence too long for bit budget");
  std::vector<Natural> seq(top.get_ui() + 1, Natural(0));

  std::fill(js.begin(), js.end(), 0);
  for (std::size_t flat = 0; flat < count; ++flat) {
    seq[grid_position(js).get_ui()] = family.entries[flat];
    for (std::size_t d = family.n; d-- > 0;) {
      if (++js[d] <= family.m) break;
      js[d] = 0;
    }
  }
  Natural tau = seq_encode(seq, bit_budget);
  Natural code = pair(tau, Natural(static_cast<unsigned long>(family.m)));
  check_budget(code, bit_budget);
  return code;
}

Natural grid_side(const Natural& i) { return unpair(i).second; }

Natural grid_entry(const Natural& i, std::span<const std::size_t> js) {
  auto [tau, side] = unpair(i);
  for (auto j : js)
    if (Natural(static_cast<unsigned long>(j)) > side) throw std::out_of_range("grid_entry: index exceeds side");
  Natural pos = grid_position(js);
  if (!pos.fits_ulong_p()) return 0;
  return seq_at(tau, pos.get_ui());
}

GridFamily grid_decode(const Natural& i, std::size_t n, std::size_t max_entries) {
  auto [tau, side] = unpair(i);
  if (!side.fits_ulong_p()) throw std::length_error("grid_decode: side too large");
  GridFamily family;
  family.n = n;
  family.m = side.get_ui();
  std::size_t count = checked_entry_count(n, family.m, max_entries);
  auto seq = seq_decode(tau);
  family.entries.reserve(count);
  std::vector<std::size_t> js(n, 0);
  for (std::size_t flat = 0; flat < count; ++flat) {
    Natural pos = grid_position(js);
    family.entries.push_back(pos.fits_ulong_p() && pos.get_ui() < seq.size() ? seq[pos.get_ui()] : Natural(0));
    for (std::size_t d = n; d-- > 0;) {
      if (++js[d] <= family.m) break;
      js[d] = 0;
    }
  }
  return family;
}

}  // namespace cochain::codec
