#include "cochain/codec.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <random>
#include <set>

using namespace cochain;
using namespace cochain::codec;

namespace {

// Independent definition of the pairing, used as the oracle below.
Natural cantor(const Natural& x, const Natural& y) { return (x + y) * (x + y + 1) / 2 + y; }

Natural seq_oracle(const std::vector<Natural>& s) {
  Natural body = s.back();
  for (std::size_t i = s.size() - 1; i-- > 0;) body = cantor(s[i], body);
  return cantor(Natural(static_cast<unsigned long>(s.size() - 1)), body);
}

std::vector<Natural> naturals(std::initializer_list<unsigned long> xs) {
  std::vector<Natural> out;
  for (auto x : xs) out.emplace_back(x);
  return out;
}

}  // namespace

TEST(Pairing, FrozenValues) {
  EXPECT_EQ(pair(0, 0), 0);
  EXPECT_EQ(pair(1, 0), 1);
  EXPECT_EQ(pair(0, 1), 2);
  EXPECT_EQ(pair(3, 4), 32);
  auto [x, y] = unpair(pair(7, 11));
  EXPECT_EQ(x, 7);
  EXPECT_EQ(y, 11);
}

// Walking the diagonals x + y = s in order of y must produce 0, 1, 2, ...;
// that is a bijection from the triangle x + y < 10^4 onto an initial segment.
TEST(Pairing, BijectiveOnCantorTriangle) {
  const unsigned long diagonals = 10000;
  unsigned long expected = 0;
  unsigned long mismatches = 0;
  Natural sx, sy;
  for (unsigned long s = 0; s < diagonals; ++s) {
    for (unsigned long y = 0; y <= s; ++y, ++expected) {
      sx = s - y;
      sy = y;
      if (pair(sx, sy) != expected) ++mismatches;
    }
  }
  EXPECT_EQ(mismatches, 0u);
}

TEST(Pairing, UnpairInvertsOnRange) {
  for (unsigned long z = 0; z < 200000; ++z) {
    auto [x, y] = unpair(Natural(z));
    ASSERT_EQ(cantor(x, y), z);
  }
}

TEST(Sequences, Examples) {
  EXPECT_EQ(seq_decode(seq_encode(naturals({5}))), naturals({5}));
  EXPECT_EQ(seq_last_index(seq_encode(naturals({1, 2, 3}))), 2);
  // Enumerate codes until one decodes to [0, 0].
  Natural j = 0;
  while (seq_decode(j) != naturals({0, 0})) ++j;
  EXPECT_EQ(seq_encode(naturals({0, 0})), j);
  EXPECT_EQ(seq_at(j, 0), 0);
  EXPECT_EQ(seq_at(j, 1), 0);
  EXPECT_EQ(seq_at(j, 7), 0);
}

TEST(Sequences, MatchIndependentEncoding) {
  EXPECT_EQ(seq_encode(naturals({1, 2, 3})), seq_oracle(naturals({1, 2, 3})));
  EXPECT_EQ(seq_encode(naturals({0})), 0);
  EXPECT_EQ(seq_encode(naturals({4, 0, 9, 2})), seq_oracle(naturals({4, 0, 9, 2})));
}

TEST(Sequences, RandomRoundTrip) {
  std::mt19937_64 rng(1);
  for (int trial = 0; trial < 1000; ++trial) {
    std::vector<Natural> s(1 + rng() % 6);
    for (auto& x : s) x = static_cast<unsigned long>(rng() % 1000);
    auto j = seq_encode(s);
    ASSERT_EQ(seq_decode(j), s);
    ASSERT_EQ(j, seq_oracle(s));
  }
}

TEST(Sequences, EveryNaturalIsASequence) {
  for (unsigned long j = 0; j < 5000; ++j) ASSERT_EQ(seq_encode(seq_decode(Natural(j))), j);
}

TEST(Sequences, BitBudgetIsEnforced) {
  std::vector<Natural> long_seq(64, Natural(1000));
  EXPECT_THROW(seq_encode(long_seq, 256), std::length_error);
}

TEST(IndexSets, BoundIsNeverExceededAndMonotone) {
  Natural previous = 0;
  for (unsigned long j = 0; j < 5000; ++j) {
    Natural code(j);
    auto members = index_set(code);
    ASSERT_TRUE(std::is_sorted(members.begin(), members.end()));
    ASSERT_LE(members.back(), index_set_bound(code));
    ASSERT_GE(index_set_bound(code), previous);
    previous = index_set_bound(code);
  }
}

TEST(Tuples, RoundTrip) {
  std::mt19937_64 rng(2);
  for (int trial = 0; trial < 300; ++trial) {
    std::size_t n = 1 + rng() % 4;
    std::vector<Natural> xs(n);
    for (auto& x : xs) x = static_cast<unsigned long>(rng() % 500);
    EXPECT_EQ(tuple_decode(tuple_encode(xs), n), xs);
  }
}

TEST(Grid, ConstantFamily) {
  GridFamily f{2, 2, std::vector<Natural>(9, Natural(5))};
  auto i = grid_encode(f);
  EXPECT_EQ(grid_side(i), 2);
  for (std::size_t a = 0; a <= 2; ++a)
    for (std::size_t b = 0; b <= 2; ++b) {
      std::vector<std::size_t> js = {a, b};
      EXPECT_EQ(grid_entry(i, js), 5);
    }
}

TEST(Grid, LargeFamiliesHitTheBitBudget) {
  GridFamily f{2, 3, std::vector<Natural>(16, Natural(5))};
  EXPECT_THROW(grid_encode(f), std::length_error);
}

TEST(Grid, RandomTwoByTwoRoundTrip) {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 50; ++trial) {
    GridFamily f{2, 1, {}};
    for (int e = 0; e < 4; ++e) f.entries.emplace_back(static_cast<unsigned long>(rng() % 10000));
    auto i = grid_encode(f);
    for (std::size_t a = 0; a <= 1; ++a)
      for (std::size_t b = 0; b <= 1; ++b) {
        std::vector<std::size_t> js = {a, b};
        EXPECT_EQ(grid_entry(i, js), f.entries[a * 2 + b]);
      }
    auto back = grid_decode(i, 2);
    EXPECT_EQ(back.m, 1u);
    EXPECT_EQ(back.entries, f.entries);
  }
}

TEST(Grid, DistinctBlockEntries) {
  GridFamily f{2, 1, naturals({11, 12, 13, 14})};
  auto i = grid_encode(f);
  std::set<Natural> seen;
  for (std::size_t a = 0; a <= 1; ++a)
    for (std::size_t b = 0; b <= 1; ++b) {
      std::vector<std::size_t> js = {a, b};
      seen.insert(grid_entry(i, js));
    }
  EXPECT_EQ(seen.size(), 4u);
  std::vector<std::size_t> outside = {2, 0};
  EXPECT_THROW(grid_entry(i, outside), std::out_of_range);
}

TEST(Rationals, Examples) {
  EXPECT_EQ(rational_at(rational_index(Rational(1, 2))), Rational(1, 2));
  EXPECT_EQ(rational_at(0), 1);
  Natural k = 0;
  while (rational_at(k) != 1) ++k;
  EXPECT_EQ(rational_index(Rational(1)), k);
  EXPECT_THROW(rational_index(Rational(0)), std::domain_error);
  EXPECT_THROW(rational_index(Rational(-1, 3)), std::domain_error);
}

TEST(Rationals, EnumerationMatchesCantorOrder) {
  for (unsigned long s = 0, k = 0; s < 40; ++s)
    for (unsigned long b = 0; b <= s; ++b, ++k) {
      unsigned long a = s - b;
      Rational q(static_cast<long>(a + 1), static_cast<long>(b + 1));
      q.canonicalize();
      ASSERT_EQ(rational_at(Natural(k)), q);
    }
}

TEST(Rationals, SignedAndUnitRoundTrip) {
  std::mt19937_64 rng(4);
  for (int trial = 0; trial < 500; ++trial) {
    Rational r(static_cast<long>(rng() % 2001) - 1000, static_cast<long>(1 + rng() % 97));
    r.canonicalize();
    EXPECT_EQ(signed_rational_at(signed_rational_index(r)), r);
    Rational u(static_cast<long>(rng() % 50), 50);
    u.canonicalize();
    EXPECT_EQ(unit_rational_at(unit_rational_index(u)), u);
  }
  for (unsigned long k = 0; k < 2000; ++k) {
    auto u = unit_rational_at(Natural(k));
    ASSERT_GE(u, 0);
    ASSERT_LE(u, 1);
  }
}
