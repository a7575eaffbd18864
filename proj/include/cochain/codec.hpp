#pragma once

// Natural-number codings shared by every other module.
//
// pair      Cantor pairing  pair(x, y) = (x + y)(x + y + 1)/2 + y.
// seq       Length-prefixed iterated pairing. A nonempty sequence
//           (a_0, ..., a_L) is coded as pair(L, body) where body is
//           a_L for L = 0 and pair(a_0, body(a_1, ..., a_L)) otherwise.
//           Every natural decodes to exactly one sequence.
// tuple     Fixed-arity iterated pairing, a bijection N -> N^n.
// q         Positive rationals: q_k = (a + 1)/(b + 1) with (a, b) = unpair(k).
// grid      Sigma(i, j_1..j_n) = (tau(i))_{f(j_1..j_n)} with (tau, tau') = unpair,
//           f the n-tuple code; positions beyond the sequence read as 0.
//
// Iterated pairing roughly doubles the bit length per element, so codes for
// long sequences are astronomically large. Encoders take a bit budget and
// throw std::length_error once it is exceeded.

#include "cochain/rational.hpp"

#include <cstddef>
#include <span>
#include <utility>
#include <vector>

namespace cochain::codec {

inline constexpr std::size_t kDefaultBitBudget = std::size_t{1} << 22;

Natural pair(const Natural& x, const Natural& y);
std::pair<Natural, Natural> unpair(const Natural& z);

Natural seq_encode(std::span<const Natural> s, std::size_t bit_budget = kDefaultBitBudget);
std::vector<Natural> seq_decode(const Natural& j);

/// j-bar: the sequence length minus one.
Natural seq_last_index(const Natural& j);

/// (j)_i; 0 for i past the end.
Natural seq_at(const Natural& j, std::size_t i);

/// Members of [j], sorted and deduplicated.
std::vector<Natural> index_set(const Natural& j);

/// A computable bound: every member of [j] is <= index_set_bound(j).
inline Natural index_set_bound(const Natural& j) { return j; }

Natural tuple_encode(std::span<const Natural> xs, std::size_t bit_budget = kDefaultBitBudget);
std::vector<Natural> tuple_decode(const Natural& z, std::size_t n);

Rational rational_at(const Natural& k);
/// Canonical index of a positive rational. Throws std::domain_error for r <= 0.
Natural rational_index(const Rational& r);

/// Codes for all rationals (used for coordinates of dense points).
Rational signed_rational_at(const Natural& k);
Natural signed_rational_index(const Rational& r);

/// Codes for rationals in [0, 1].
Rational unit_rational_at(const Natural& k);
Natural unit_rational_index(const Rational& r);

/// An n-dimensional finite family with side m = i-hat: entries indexed by
/// {0..m}^n in row-major order (last coordinate fastest).
struct GridFamily {
  std::size_t n = 1;
  std::size_t m = 0;
  std::vector<Natural> entries;
};

Natural grid_encode(const GridFamily& family, std::size_t bit_budget = kDefaultBitBudget);

/// i-hat of a grid code.
Natural grid_side(const Natural& i);

/// Throws std::out_of_range if some j_l exceeds i-hat.
Natural grid_entry(const Natural& i, std::span<const std::size_t> js);

GridFamily grid_decode(const Natural& i, std::size_t n, std::size_t max_entries = std::size_t{1} << 20);

}  // namespace cochain::codec
