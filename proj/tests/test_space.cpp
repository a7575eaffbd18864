#include "cochain/codec.hpp"
#include "cochain/semidecide.hpp"
#include "support.hpp"

#include <gtest/gtest.h>

using namespace cochain;
using namespace cochain::testing;

namespace {

Point pt(long x, long y) { return {Rational(x), Rational(y)}; }
Point pt(Rational x, Rational y) { return {std::move(x), std::move(y)}; }

const SpacePtr& r2() {
  static SpacePtr s = euclidean_space(2);
  return s;
}

}  // namespace

TEST(Euclidean, DistanceApproximations) {
  const auto& s = *r2();
  for (unsigned k = 0; k < 40; k += 3) {
    Rational f = s.dist_approx(pt(0, 0), pt(3, 4), k);
    EXPECT_LT(abs(f - 5), pow2_neg(k)) << k;
    EXPECT_EQ(s.dist_approx(pt(Rational(1, 3), Rational(2, 7)), pt(Rational(1, 3), Rational(2, 7)), k), 0);
  }
}

TEST(Euclidean, DenseSequenceReachesGivenPoints) {
  const auto& s = *r2();
  Rng rng(10);
  for (int i = 0; i < 10; ++i) {
    Point p = random_point(rng, 2, 50, 97);
    EXPECT_EQ(s.point_at(s.index_of(p)), p);
  }
  // The sequence repeats points; the canonical index still names the same point.
  for (unsigned long k = 0; k < 500; ++k) {
    Point p = s.point_at(Natural(k));
    EXPECT_LE(s.index_of(p), k);
    EXPECT_EQ(s.point_at(s.index_of(p)), p);
  }
}

TEST(Euclidean, BallAndUnionCodesRoundTrip) {
  const auto& s = *r2();
  Rng rng(11);
  BallUnion u;
  for (int i = 0; i < 4; ++i) u.push_back(random_ball(rng, 2, 5, 8, Rational(1, 8), Rational(2)));
  auto back = s.union_at(s.union_index(u));
  ASSERT_EQ(back.size(), u.size());
  for (std::size_t i = 0; i < u.size(); ++i) {
    EXPECT_EQ(back[i].center(), u[i].center());
    EXPECT_EQ(back[i].radius(), u[i].radius());
  }
}

TEST(Euclidean, TriangleSlack) {
  const auto& s = *r2();
  Rng rng(12);
  for (int i = 0; i < 200; ++i) {
    Point a = random_point(rng, 2, 10, 16), b = random_point(rng, 2, 10, 16), c = random_point(rng, 2, 10, 16);
    unsigned k = 1 + i % 20;
    // Each approximation is within 2^-k, so the triangle inequality holds up to 3 * 2^-k.
    EXPECT_LE(s.dist_approx(a, c, k), s.dist_approx(a, b, k) + s.dist_approx(b, c, k) + 3 * pow2_neg(k));
  }
}

TEST(HilbertCube, Distances) {
  auto h = hilbert_cube_space();
  Point zero;
  Point e1 = {Rational(1)};
  Point e12 = {Rational(1), Rational(1)};
  for (unsigned k = 1; k < 30; k += 4) {
    EXPECT_LT(abs(h->dist_approx(zero, zero, k)), pow2_neg(k));
    EXPECT_LT(abs(h->dist_approx(e1, zero, k) - Rational(1, 2)), pow2_neg(k));
    EXPECT_LT(abs(h->dist_approx(e12, zero, k) - Rational(3, 4)), pow2_neg(k));
  }
  EXPECT_EQ(h->point_at(h->index_of(e12)), e12);
  EXPECT_THROW(h->validate_point({Rational(2)}), std::invalid_argument);
}

TEST(PointInBall, Examples) {
  const auto& s = *r2();
  Ball unit(pt(0, 0), 1);
  EXPECT_TRUE(point_in_ball(s, pt(0, 0), unit, 1).is_yes());
  for (unsigned fuel = 1; fuel <= 40; fuel += 3) EXPECT_FALSE(point_in_ball(s, pt(1, 0), unit, fuel).is_yes());
  auto v = point_in_ball(s, pt(Rational(1, 2), Rational(0)), unit, 4);
  EXPECT_TRUE(v.is_yes());
  EXPECT_LE(v.stage, 4u);
  // Index form.
  EXPECT_TRUE(point_in_ball(s, s.index_of(pt(0, 0)), s.ball_index(unit), 1).is_yes());
}

TEST(PointInBall, MonotoneInFuel) {
  const auto& s = *r2();
  Rng rng(13);
  for (int i = 0; i < 100; ++i) {
    Point p = random_point(rng, 2, 3, 32);
    Ball b = random_ball(rng, 2, 3, 32, Rational(1, 4), Rational(3));
    bool seen = false;
    for (unsigned fuel = 1; fuel <= 16; ++fuel) {
      bool yes = point_in_ball(s, p, b, fuel).is_yes();
      if (seen) {
        ASSERT_TRUE(yes);
      }
      seen = seen || yes;
    }
  }
}

TEST(PointInUnion, Examples) {
  const auto& s = *r2();
  BallUnion j = {Ball(pt(0, 0), 1), Ball(pt(10, 0), 1), Ball(pt(20, 0), 1), Ball(pt(30, 0), 1), Ball(pt(40, 0), 1)};
  EXPECT_TRUE(point_in_union(s, pt(0, 0), j, 2).is_yes());
  auto last = point_in_union(s, pt(40, 0), j, 4);
  ASSERT_TRUE(last.is_yes());
  ASSERT_FALSE(last.witness.empty());
  EXPECT_EQ(last.witness.back(), 4);
  for (unsigned fuel = 1; fuel <= 20; fuel += 4) EXPECT_FALSE(point_in_union(s, pt(5, 5), j, fuel).is_yes());
}

TEST(CoveringOracle, Examples) {
  const auto& s = *r2();
  BallUnion a = {Ball(pt(0, 0), 1)};
  BallUnion big = {Ball(pt(0, 0), 2)};
  BallUnion same = {Ball(pt(0, 0), 1)};
  BallUnion two = {Ball(pt(-1, 0), Rational(8, 5)), Ball(pt(1, 0), Rational(8, 5))};
  EXPECT_TRUE(closed_union_in_union(s, a, big, 4).is_yes());
  for (unsigned fuel = 1; fuel <= 14; ++fuel) EXPECT_FALSE(closed_union_in_union(s, a, same, fuel).is_yes());
  EXPECT_TRUE(closed_union_in_union(s, a, two, 30).is_yes());
  EXPECT_TRUE(closed_union_in_union(s, s.union_index(a), s.union_index(big), 4).is_yes());
}

TEST(CoveringOracle, RequiresDeclaredProperty) {
  // Every shipped space declares the property; a missing ball list is trivial.
  const auto& s = *r2();
  BallUnion none;
  BallUnion j = {Ball(pt(0, 0), 1)};
  EXPECT_TRUE(closed_union_in_union(s, none, j, 1).is_yes());
}

TEST(Disjointness, Examples) {
  const auto& s = *r2();
  for (Route route : {Route::exact_when_available, Route::approximate}) {
    BallUnion a = {Ball(pt(0, 0), 1)};
    BallUnion b = {Ball(pt(3, 0), 1)};
    EXPECT_TRUE(closed_unions_disjoint(s, a, b, 8, route).is_yes());
    BallUnion a2 = {Ball(pt(0, 0), 2)}, b2 = {Ball(pt(3, 0), 2)};
    BallUnion a3 = {Ball(pt(0, 0), Rational(3, 2))}, b3 = {Ball(pt(3, 0), Rational(3, 2))};
    for (unsigned fuel = 1; fuel <= 6; ++fuel) {
      EXPECT_FALSE(closed_unions_disjoint(s, a2, b2, fuel, route).is_yes());
      EXPECT_FALSE(closed_unions_disjoint(s, a3, b3, fuel, route).is_yes());
    }
  }
}

TEST(Disjointness, ExactRouteAnswersAtFuelOne) {
  const auto& s = *r2();
  Rng rng(14);
  for (int i = 0; i < 300; ++i) {
    BallUnion a = {random_ball(rng, 2, 4, 8, Rational(1, 8), Rational(1))};
    BallUnion b = {random_ball(rng, 2, 4, 8, Rational(1, 8), Rational(1))};
    auto v = closed_unions_disjoint(s, a, b, 1);
    EXPECT_EQ(v.is_yes(), oracle_closed_disjoint(a[0], b[0]));
  }
}

TEST(Soundness, RandomPointInBall) {
  const auto& s = *r2();
  Rng rng(15);
  const Rational margin = pow2_neg(10);
  const unsigned bound = fuel_bound_for_margin(margin);
  int yes = 0, with_margin = 0;
  for (int i = 0; i < 500; ++i) {
    Point p = random_point(rng, 2, 2, 1024);
    Ball b = random_ball(rng, 2, 2, 1024, Rational(1, 16), Rational(2));
    auto v = point_in_ball(s, p, b, bound);
    if (v.is_yes()) {
      ++yes;
      ASSERT_TRUE(oracle_in_open(p, b));
    }
    if (oracle_inside_with_margin(p, b.center(), b.radius(), margin)) {
      ++with_margin;
      ASSERT_TRUE(v.is_yes());
    }
  }
  EXPECT_GT(yes, 50);
  EXPECT_GT(with_margin, 50);
}

TEST(Soundness, RandomCoveringOracle) {
  const auto& s = *r2();
  Rng rng(16);
  const Rational margin = pow2_neg(10);
  int yes = 0;
  for (int i = 0; i < 120; ++i) {
    BallUnion a, j;
    for (int q = 0; q < 2; ++q) a.push_back(random_ball(rng, 2, 2, 16, Rational(1, 8), Rational(1, 2)));
    for (int q = 0; q < 4; ++q) j.push_back(random_ball(rng, 2, 2, 16, Rational(1, 4), Rational(2)));
    auto v = closed_union_in_union(s, a, j, 12);
    if (v.is_yes()) {
      ++yes;
      for (const auto& x : union_samples(a, 12)) {
        bool in = false;
        for (const auto& b : j) in = in || oracle_in_open(x, b);
        ASSERT_TRUE(in);
      }
    }
    // Completeness: each member of a sits inside one member of j with margin.
    bool nested = true;
    for (const auto& u : a) {
      bool inside = false;
      for (const auto& b : j)
        inside = inside || oracle_inside_with_margin(u.center(), b.center(), b.radius() - u.radius(), margin);
      nested = nested && inside;
    }
    if (nested) {
      ASSERT_TRUE(closed_union_in_union(s, a, j, ecp_fuel_bound(a, margin)).is_yes());
    }
  }
  EXPECT_GT(yes, 5);
}

TEST(Soundness, RandomDisjointnessApproximateRoute) {
  const auto& s = *r2();
  Rng rng(17);
  for (int i = 0; i < 60; ++i) {
    BallUnion a = {random_ball(rng, 2, 3, 8, Rational(1, 4), Rational(1))};
    BallUnion b = {random_ball(rng, 2, 3, 8, Rational(1, 4), Rational(1))};
    if (closed_unions_disjoint(s, a, b, 6, Route::approximate).is_yes()) {
      ASSERT_TRUE(oracle_closed_disjoint(a[0], b[0]));
    }
  }
}

TEST(FuelBound, MarginFormula) {
  EXPECT_EQ(fuel_bound_for_margin(Rational(1)), 1u);
  EXPECT_EQ(fuel_bound_for_margin(Rational(1, 2)), 2u);
  EXPECT_EQ(fuel_bound_for_margin(Rational(3, 8)), 3u);
  EXPECT_EQ(fuel_bound_for_margin(pow2_neg(10)), 11u);
  EXPECT_THROW(fuel_bound_for_margin(Rational(0)), std::invalid_argument);
}

TEST(Geometry, ExactPredicatesAgreeWithOracles) {
  Rng rng(18);
  for (int i = 0; i < 500; ++i) {
    Ball u = random_ball(rng, 2, 3, 8, Rational(1, 8), Rational(2));
    Ball v = random_ball(rng, 2, 3, 8, Rational(1, 8), Rational(2));
    Rational eps = random_rational(rng, 0, 1, 16);
    EXPECT_EQ(exact::closed_balls_disjoint(u, v), oracle_closed_disjoint(u, v));
    if (sgn(eps) > 0) {
      EXPECT_EQ(exact::open_balls_within(u, v, eps), oracle_within(u, v, eps));
    }
    Point p = random_point(rng, 2, 3, 8);
    EXPECT_EQ(exact::in_open_ball(p, u), oracle_in_open(p, u));
    EXPECT_EQ(exact::in_closed_ball(p, u), oracle_in_closed(p, u));
    EXPECT_EQ(exact::distance_squared(p, u.center()), sq_dist(p, u.center()));
  }
}

TEST(Geometry, TouchingBallsAreNotDisjoint) {
  Ball u(pt(0, 0), Rational(3, 2)), v(pt(3, 0), Rational(3, 2));
  EXPECT_FALSE(exact::closed_balls_disjoint(u, v));
  EXPECT_TRUE(exact::open_balls_within(u, v, pow2_neg(40)));
}

TEST(Fdiam, Examples) {
  const auto& s = *r2();
  BallUnion one = {Ball(pt(1, 1), Rational(3, 7))};
  BallUnion concentric = {Ball(pt(0, 0), 1), Ball(pt(0, 0), 2)};
  BallUnion apart = {Ball(pt(0, 0), 1), Ball(pt(3, 0), 1)};
  for (unsigned k : {4u, 12u, 30u}) {
    EXPECT_LT(abs(fdiam(s, one)(k) - Rational(6, 7)), pow2_neg(k));
    EXPECT_LT(abs(fdiam(s, concentric)(k) - 4), pow2_neg(k));
    EXPECT_LT(abs(fdiam(s, apart)(k) - 5), pow2_neg(k));
    EXPECT_GT(fdiam_upper(s, apart, k), 5);
  }
}
