#include "cochain/chains.hpp"
#include "cochain/codec.hpp"
#include "support.hpp"

#include <gtest/gtest.h>

#include <set>

using namespace cochain;
using namespace cochain::testing;

namespace {

Point pt(long x, long y) { return {Rational(x), Rational(y)}; }

const Space& r2() {
  static SpacePtr s = euclidean_space(2);
  return *s;
}

Chain line_chain(std::initializer_list<long> xs, Rational r) {
  std::vector<BallUnion> cells;
  for (long x : xs) cells.push_back({Ball(pt(x, 0), r)});
  std::size_t m = cells.size() - 1;
  return Chain(1, m, std::move(cells));
}

std::set<Natural> codes_of(const Space& s, const std::vector<const BallUnion*>& cells) {
  std::set<Natural> out;
  for (const auto* cell : cells)
    for (const auto& b : *cell) out.insert(s.ball_index(b));
  return out;
}

}  // namespace

TEST(ChainIndexing, FlattenRowMajor) {
  Chain c(2, 2);
  EXPECT_EQ(c.size(), 9u);
  EXPECT_EQ(c.flatten({1, 2}), 5u);
  EXPECT_EQ(c.unflatten(7), (MultiIndex{2, 1}));
  EXPECT_FALSE(c.is_boundary(4));
  EXPECT_TRUE(c.is_boundary(3));
}

TEST(ChainIndexing, BoundaryAndFaces) {
  Chain m1(2, 1);
  EXPECT_EQ(restrict_boundary(m1).size(), m1.size());
  Chain c(2, 2);
  auto face = restrict_face(c, {1, 0});
  ASSERT_EQ(face.size(), 3u);
  for (auto i : face.indices) EXPECT_EQ(c.unflatten(i)[0], 0u);
  auto top = restrict_face(c, {2, 1});
  for (auto i : top.indices) EXPECT_EQ(c.unflatten(i)[1], 2u);
  EXPECT_EQ(restrict_boundary(Chain(3, 2)).size(), 26u);
  EXPECT_EQ(boundary_count(3, 2), 26u);
  EXPECT_EQ(boundary_count(2, 7), 28u);
}

TEST(ChainIndexing, SupDistance) {
  EXPECT_EQ(sup_distance({0, 3}, {2, 2}), 2u);
  EXPECT_EQ(sup_distance({1, 1}, {1, 1}), 0u);
}

TEST(Fmesh, Examples) {
  std::vector<BallUnion> same(4, BallUnion{Ball(pt(0, 0), 1)});
  Chain c(2, 1, same);
  EXPECT_LT(abs(fmesh(r2(), full_view(c))(20) - 2), pow2_neg(20));

  std::vector<BallUnion> mixed = {{Ball(pt(0, 0), 1)}, {Ball(pt(0, 0), 1), Ball(pt(3, 0), 1)}};
  Chain d(1, 1, mixed);
  EXPECT_LT(abs(fmesh(r2(), full_view(d))(20) - 5), pow2_neg(20));
}

TEST(Fmesh, MaxOfCellDiameters) {
  Rng rng(20);
  std::vector<BallUnion> cells;
  for (int i = 0; i < 9; ++i) {
    BallUnion u;
    for (int q = 0; q < 3; ++q) u.push_back(random_ball(rng, 2, 4, 8, Rational(1, 8), Rational(1)));
    cells.push_back(std::move(u));
  }
  Chain c(2, 2, cells);
  Rational best = 0;
  for (const auto& cell : cells) best = std::max(best, fdiam(r2(), cell)(24));
  EXPECT_LT(abs(fmesh(r2(), full_view(c))(24) - best), 2 * pow2_neg(24));
  Rational mesh_up = fmesh(r2(), full_view(c)).upper(24);
  EXPECT_TRUE(fmesh_below(r2(), full_view(c), mesh_up + pow2_neg(10), 24).is_yes());
  EXPECT_FALSE(fmesh_below(r2(), full_view(c), best - pow2_neg(10), 24).is_yes());
}

TEST(ChainCondition, Examples) {
  auto line = line_chain({0, 3, 6}, 1);
  EXPECT_TRUE(is_nchain(r2(), line, 1).is_yes());

  auto same = line_chain({0, 0, 0}, 1);
  for (unsigned fuel = 1; fuel <= 8; ++fuel) EXPECT_FALSE(is_nchain(r2(), same, fuel).is_yes());

  std::vector<BallUnion> grid;
  for (long i = 0; i < 3; ++i)
    for (long j = 0; j < 3; ++j) grid.push_back({Ball(pt(4 * i, 4 * j), 1)});
  Chain g(2, 2, grid);
  EXPECT_TRUE(is_nchain(r2(), g, 1).is_yes());
  EXPECT_TRUE(is_spherical_chain(r2(), g, 1).is_yes());
}

TEST(ChainCondition, AgreesWithPairwiseOracle) {
  Rng rng(21);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<BallUnion> cells;
    for (int i = 0; i < 9; ++i) {
      BallUnion u;
      for (int q = 0; q < 2; ++q) u.push_back(random_ball(rng, 2, 6, 4, Rational(1, 4), Rational(3, 2)));
      cells.push_back(std::move(u));
    }
    Chain c(2, 2, cells);
    bool oracle = true;
    for (std::size_t a = 0; a < 9; ++a)
      for (std::size_t b = a + 1; b < 9; ++b)
        if (sup_distance(c.unflatten(a), c.unflatten(b)) > 1)
          for (const auto& u : cells[a])
            for (const auto& v : cells[b]) oracle = oracle && oracle_closed_disjoint(u, v);
    for (auto exec : {kernels::Exec::serial, kernels::Exec::parallel})
      EXPECT_EQ(chain_condition(r2(), full_view(c), 1, Route::exact_when_available, exec).is_yes(), oracle);
  }
}

TEST(Properness, Examples) {
  auto same = line_chain({0, 0, 0}, 1);
  EXPECT_TRUE(is_proper(r2(), full_view(same), pow2_neg(30), 1).verdict.is_yes());

  auto far = line_chain({0, 10}, 1);
  for (unsigned fuel = 1; fuel <= 8; ++fuel)
    EXPECT_FALSE(is_proper(r2(), full_view(far), pow2_neg(2), fuel).verdict.is_yes());

  auto overlapping = line_chain({0, 1}, 1);
  auto result = is_proper(r2(), full_view(overlapping), Rational(1, 2), 4);
  ASSERT_TRUE(result.verdict.is_yes());
  ASSERT_EQ(result.witnesses.size(), 1u);
  EXPECT_TRUE(check_witness(r2(), overlapping, result.witnesses[0], Rational(1, 2), 4));
}

TEST(Properness, ApproximateRouteAgrees) {
  auto overlapping = line_chain({0, 1, 2}, 1);
  auto result = is_proper(r2(), full_view(overlapping), Rational(1, 2), 12, Route::approximate);
  ASSERT_TRUE(result.verdict.is_yes());
  for (const auto& w : result.witnesses) EXPECT_TRUE(check_witness(r2(), overlapping, w, Rational(1, 2), 12));
}

TEST(Properness, TamperedWitnessFails) {
  auto overlapping = line_chain({0, 1}, 1);
  auto result = is_proper(r2(), full_view(overlapping), Rational(1, 2), 4);
  ASSERT_TRUE(result.verdict.is_yes());
  auto w = result.witnesses[0];
  w.on_segment = false;
  w.p = pt(-5, 0);
  w.q = pt(5, 0);
  EXPECT_FALSE(check_witness(r2(), overlapping, w, Rational(1, 2), 4));
}

TEST(Properness, ThreeEpsilonRefinement) {
  Rng rng(22);
  int used = 0;
  for (int trial = 0; trial < 100; ++trial) {
    auto pair = refinement_pair(rng);
    if (!pair.premises_hold) continue;
    ++used;
    EXPECT_TRUE(is_proper(r2(), full_view(pair.coarse), pair.eps, 1).verdict.is_yes());
    EXPECT_TRUE(is_proper(r2(), full_view(pair.fine), 3 * pair.eps, 1).verdict.is_yes());
  }
  EXPECT_GT(used, 80);
}

TEST(Zeta, Examples) {
  const auto& s = r2();
  Chain one(2, 0, {{Ball(pt(1, 2), 3), Ball(pt(0, 0), 1)}});
  auto z = zeta_codes(s, full_view(one));
  EXPECT_EQ(std::set<Natural>(z.begin(), z.end()), codes_of(s, {&one.cell(0)}));

  Chain two(1, 1, {{Ball(pt(0, 0), 1)}, {Ball(pt(5, 0), 2)}});
  auto z2 = zeta_codes(s, full_view(two));
  EXPECT_EQ(z2.size(), 2u);

  std::vector<BallUnion> grid;
  for (long i = 0; i < 3; ++i)
    for (long j = 0; j < 3; ++j) grid.push_back({Ball(pt(i, j), Rational(1, 3))});
  Chain g(2, 2, grid);
  auto zb = zeta_codes(s, restrict_boundary(g));
  EXPECT_EQ(zb.size(), 8u);
  EXPECT_EQ(std::count(zb.begin(), zb.end(), s.ball_index(grid[4][0])), 0);
}

TEST(Zeta, IndexSetEqualityOnRandomChains) {
  const auto& s = r2();
  Rng rng(23);
  std::vector<Ball> pool;
  for (int i = 0; i < 12; ++i) pool.push_back(random_ball(rng, 2, 3, 4, Rational(1, 4), Rational(1)));
  for (int trial = 0; trial < 100; ++trial) {
    std::size_t m = 1 + rng() % 2;
    std::vector<BallUnion> cells((m + 1) * (m + 1));
    for (auto& cell : cells) {
      std::size_t members = 1 + rng() % 3;
      for (std::size_t q = 0; q < members; ++q) cell.push_back(pool[rng() % pool.size()]);
    }
    Chain c(2, m, cells);
    for (const auto& view : {full_view(c), restrict_boundary(c), restrict_face(c, {2, 1})}) {
      // Independent route: union of the index sets of each cell's union code.
      std::set<Natural> expected;
      for (auto i : view.indices) {
        auto members = codec::index_set(s.union_index(c.cell(i)));
        expected.insert(members.begin(), members.end());
      }
      auto got = codec::index_set(zeta_code(s, view));
      ASSERT_EQ(std::set<Natural>(got.begin(), got.end()), expected);
    }
  }
}

TEST(ChainCode, RoundTrip) {
  const auto& s = r2();
  Chain c(1, 1, {{Ball(pt(0, 0), 1)}, {Ball(pt(1, 0), 1)}});
  auto code = chain_code(s, c);
  auto back = chain_from_code(s, code, 1);
  ASSERT_EQ(back.m(), 1u);
  for (std::size_t i = 0; i < 2; ++i) {
    ASSERT_EQ(back.cell(i).size(), 1u);
    EXPECT_EQ(back.cell(i)[0].center(), c.cell(i)[0].center());
    EXPECT_EQ(back.cell(i)[0].radius(), c.cell(i)[0].radius());
  }
}

TEST(Fdiam, DominatesExactDiameter) {
  const auto& s = r2();
  Rng rng(24);
  for (int trial = 0; trial < 200; ++trial) {
    BallUnion u;
    std::size_t members = 1 + rng() % 5;
    for (std::size_t q = 0; q < members; ++q) u.push_back(random_ball(rng, 2, 5, 16, Rational(1, 16), Rational(2)));
    ASSERT_TRUE(oracle_diameter_at_most(u, fdiam_upper(s, u, 20)));
  }
}
