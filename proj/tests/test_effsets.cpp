#include "cochain/approx.hpp"
#include "cochain/codec.hpp"
#include "cochain/semidecide.hpp"
#include "support.hpp"

#include <gtest/gtest.h>

using namespace cochain;
using namespace cochain::testing;

namespace {

Point pt(Rational x, Rational y) { return {std::move(x), std::move(y)}; }

const Space& r2() {
  static SpacePtr s = euclidean_space(2);
  return *s;
}

CoCeSetPtr builtin_set(const char* name) { return shape_set(shape_from_json({{"shape", name}})); }

// Closed ball B(p, r) misses the unit sphere centered at 0, on squared rationals.
bool misses_unit_sphere(const Ball& b) {
  Rational p2 = sq_dist(b.center(), Point(b.dim(), Rational(0)));
  Rational out = 1 + b.radius(), in = 1 - b.radius();
  return p2 > out * out || (sgn(in) > 0 && p2 < in * in);
}

bool misses_unit_disk(const Ball& b) {
  Rational out = 1 + b.radius();
  return sq_dist(b.center(), Point(b.dim(), Rational(0))) > out * out;
}

// Closed ball misses [0,1]^2: squared distance from the center to the box exceeds r^2.
bool misses_unit_square(const Ball& b) {
  Rational s = 0;
  for (const auto& x : b.center()) {
    Rational d = 0;
    if (x < 0) d = -x;
    if (x > 1) d = x - 1;
    s += d * d;
  }
  return s > b.radius() * b.radius();
}

BallUnion first_complement_balls(const CoCeSet& set, std::size_t count) {
  for (unsigned t = 0; t <= 24; ++t) {
    auto stage = set.complement_stage(t);
    if (stage.size() >= count) {
      stage.resize(count);
      return stage;
    }
  }
  return set.complement_stage(24);
}

// Eight balls of radius 1/2 around rational points near the 8th roots of unity.
BallUnion eight_roots() {
  Rational h(181, 256);
  BallUnion j;
  for (auto [x, y] : std::vector<std::pair<Rational, Rational>>{
           {1, 0}, {h, h}, {0, 1}, {-h, h}, {-1, 0}, {-h, -h}, {0, -1}, {h, -h}})
    j.emplace_back(pt(x, y), Rational(1, 2));
  return j;
}

// Unit circle approximator: radius 2^-k around about 16 * 2^k exact points of the circle.
Approximator circle_approximator() {
  auto circle = shape_from_json({{"shape", "circle"}});
  Approximator a;
  a.c = 1;
  a.g = [circle](unsigned k) {
    BallUnion u;
    for (auto& p : circle->exact_points(std::size_t{16} << std::min(k, 12U))) u.emplace_back(std::move(p), pow2_neg(k));
    return u;
  };
  return a;
}

}  // namespace

TEST(Covers, Examples) {
  auto circle = builtin_set("circle");
  BallUnion big = {Ball(pt(0, 0), 2)};
  bool big_yes = false;
  for (unsigned fuel = 1; fuel <= 16 && !big_yes; ++fuel) big_yes = covers(r2(), *circle, big, fuel).is_yes();
  EXPECT_TRUE(big_yes);

  BallUnion off = {Ball(pt(2, 0), Rational(1, 2))};
  for (unsigned fuel = 1; fuel <= 16; ++fuel) EXPECT_FALSE(covers(r2(), *circle, off, fuel).is_yes());

  auto roots = eight_roots();
  bool confirmed = false;
  for (unsigned fuel = 1; fuel <= 24 && !confirmed; ++fuel) confirmed = covers(r2(), *circle, roots, fuel).is_yes();
  EXPECT_TRUE(confirmed);
}

TEST(Covers, StagedRouteAgreesWithLazyRoute) {
  auto circle = builtin_set("circle");
  auto roots = eight_roots();
  bool staged = false;
  for (unsigned fuel = 1; fuel <= 14 && !staged; ++fuel) staged = covers_staged(r2(), *circle, roots, fuel).is_yes();
  EXPECT_TRUE(staged);

  BallUnion off = {Ball(pt(2, 0), Rational(1, 2))};
  for (unsigned fuel = 1; fuel <= 10; ++fuel) EXPECT_FALSE(covers_staged(r2(), *circle, off, fuel).is_yes());

  Rng rng(30);
  for (int trial = 0; trial < 40; ++trial) {
    BallUnion j;
    std::size_t count = 6 + rng() % 8;
    for (std::size_t q = 0; q < count; ++q) j.push_back(random_ball(rng, 2, 1, 8, Rational(1, 4), Rational(1)));
    bool lazy = covers(r2(), *circle, j, 12).is_yes();
    bool stage = covers_staged(r2(), *circle, j, 10).is_yes();
    if (stage) {
      EXPECT_TRUE(covers(r2(), *circle, j, 24).is_yes()) << "trial " << trial;
    }
    if (lazy || stage) {
      auto points = circle->shape()->exact_points(2000);
      EXPECT_FALSE(find_uncovered(points, j).has_value()) << "trial " << trial;
    }
  }
}

TEST(Covers, YesImpliesDenseSampleCoverage) {
  Rng rng(31);
  auto circle = builtin_set("circle");
  auto points = circle->shape()->exact_points(10000);
  ASSERT_GE(points.size(), 10000u);
  int yes = 0;
  for (int trial = 0; trial < 60; ++trial) {
    // A ring of balls around the circle, sometimes with gaps.
    BallUnion j;
    std::size_t count = 6 + rng() % 10;
    Rational r = random_rational(rng, 0, 1, 16) / 2 + Rational(1, 8);
    for (std::size_t q = 0; q < count; ++q) {
      Point c = points[(q * points.size()) / count];
      j.emplace_back(std::move(c), r);
    }
    if (!covers(r2(), *circle, j, 20).is_yes()) continue;
    ++yes;
    for (const auto& p : points) {
      bool in = false;
      for (const auto& b : j) in = in || oracle_in_open(p, b);
      ASSERT_TRUE(in);
    }
  }
  EXPECT_GT(yes, 10);
}

TEST(ChainCovers, Examples) {
  auto circle = builtin_set("circle");
  Chain one(2, 0, {{Ball(pt(0, 0), 2)}});
  bool one_yes = false;
  for (unsigned fuel = 1; fuel <= 16 && !one_yes; ++fuel) one_yes = chain_covers(r2(), *circle, full_view(one), fuel).is_yes();
  EXPECT_TRUE(one_yes);

  // Three balls along the right half only.
  Chain arc(1, 2, {{Ball(pt(0, 1), Rational(3, 4))}, {Ball(pt(1, 0), Rational(3, 4))}, {Ball(pt(0, -1), Rational(3, 4))}});
  for (unsigned fuel = 1; fuel <= 16; ++fuel) EXPECT_FALSE(chain_covers(r2(), *circle, full_view(arc), fuel).is_yes());

  auto problem = builtin_problem({{"shape", "circle"}});
  auto seeded = seed_candidate(problem, 7, Rational(1, 16), 20);
  bool confirmed = false;
  for (unsigned fuel = 1; fuel <= 24 && !confirmed; ++fuel)
    confirmed = chain_covers(r2(), *circle, restrict_boundary(seeded.chain), fuel).is_yes();
  EXPECT_TRUE(confirmed);
}

TEST(BuiltinComplements, Examples) {
  auto circle = builtin_set("circle");
  Ball hole(pt(0, 0), Rational(1, 4));
  auto covered_by_stage = [](const CoCeSet& set, const Point& p, unsigned t) {
    for (const auto& b : set.complement_stage(t))
      if (oracle_in_open(p, b)) return true;
    return false;
  };
  // The hole ball lies inside the union of the enumerated balls at some stage.
  bool inside = false;
  for (unsigned t = 0; t <= 10 && !inside; ++t) {
    BallUnion stage = circle->complement_stage(t);
    inside = r2().ecp_inclusion(std::span<const Ball>(&hole, 1), stage, 12).is_yes();
  }
  EXPECT_TRUE(inside);

  Ball touching(pt(1, 0), Rational(1, 10));
  for (const auto& b : circle->complement_stage(12)) {
    EXPECT_FALSE(exact::closed_ball_in_open_ball(touching, b));
    EXPECT_FALSE(oracle_in_open(pt(1, 0), b));
  }

  auto disk = builtin_set("disk");
  for (const auto& p : {pt(Rational(101, 100), 0), pt(0, Rational(-3, 2)), pt(Rational(-3, 4), Rational(3, 4)),
                        pt(Rational(11, 10), Rational(1, 3))}) {
    bool reached = false;
    for (unsigned t = 0; t <= 16 && !reached; ++t) reached = covered_by_stage(*disk, p, t);
    EXPECT_TRUE(reached);
  }
}

TEST(BuiltinComplements, SoundnessAudit) {
  struct Case {
    const char* name;
    std::function<bool(const Ball&)> misses;
  };
  std::vector<Case> cases = {{"circle", misses_unit_sphere}, {"sphere2", misses_unit_sphere},
                             {"disk", misses_unit_disk}, {"square_cell", misses_unit_square}};
  for (const auto& c : cases) {
    auto set = builtin_set(c.name);
    auto balls = first_complement_balls(*set, 1000);
    ASSERT_EQ(balls.size(), 1000u) << c.name;
    for (const auto& b : balls) ASSERT_TRUE(c.misses(b)) << c.name;
  }
  // No exact distance formula for the ellipse; audit against its exact points.
  auto ellipse = builtin_set("ellipse");
  auto balls = first_complement_balls(*ellipse, 1000);
  ASSERT_EQ(balls.size(), 1000u);
  auto points = ellipse->shape()->exact_points(2000);
  for (const auto& b : balls)
    for (const auto& p : points) ASSERT_FALSE(oracle_in_closed(p, b));
}

TEST(BuiltinComplements, BoundingBallContainsShape) {
  for (const char* name : {"circle", "disk", "square_cell", "ellipse"}) {
    auto set = builtin_set(name);
    for (const auto& p : set->shape()->exact_points(500)) ASSERT_TRUE(oracle_in_closed(p, set->bounding_ball())) << name;
  }
}

TEST(CeHits, Examples) {
  auto space = euclidean_space(2);
  CeHitStream stream(space, circle_approximator());
  auto circle = builtin_set("circle");
  EXPECT_TRUE(stream.hits(circle->bounding_ball(), 8).is_yes());

  Ball far(pt(3, 0), Rational(1, 2));
  for (unsigned fuel = 0; fuel <= 20; ++fuel) EXPECT_FALSE(stream.hits(far, fuel).is_yes());

  Ball near(pt(1, 0), Rational(1, 4));
  auto v = stream.hits(near, 16);
  ASSERT_TRUE(v.is_yes());
  ASSERT_EQ(v.witness.size(), 3u);
  // Witness: (k, member, delta index) with B(p, 2^-k + q_delta) inside the target.
  unsigned k = static_cast<unsigned>(v.witness[0].get_ui());
  Ball member = circle_approximator().g(k)[v.witness[1].get_ui()];
  Rational reach = pow2_neg(k) + codec::rational_at(v.witness[2]);
  EXPECT_TRUE(oracle_inside_with_margin(member.center(), near.center(), near.radius(), reach));
}

TEST(CeHits, SoundOnRandomTargets) {
  auto space = euclidean_space(2);
  CeHitStream stream(space, circle_approximator());
  Rng rng(32);
  int emitted = 0;
  for (int trial = 0; trial < 300; ++trial) {
    Ball target = random_ball(rng, 2, 2, 16, Rational(1, 32), Rational(1));
    if (!stream.hits(target, 12).is_yes()) continue;
    ++emitted;
    // The open ball meets the unit circle iff the distance from its center to the circle is below r.
    Rational c2 = sq_dist(target.center(), pt(0, 0));
    Rational out = 1 + target.radius(), in = 1 - target.radius();
    EXPECT_TRUE(c2 < out * out && (sgn(in) <= 0 || c2 > in * in));
  }
  EXPECT_GT(emitted, 20);
}

TEST(CeHits, DeepBallsAreEmittedWithinFuel) {
  auto space = euclidean_space(2);
  CeHitStream stream(space, circle_approximator());
  auto circle = builtin_set("circle");
  Rational depth = pow2_neg(8);
  unsigned fuel = stream.fuel_bound(depth);
  Rng rng(33);
  // Targets B(x, r) containing B(y, 2^-8) for a point y of the circle.
  for (const auto& y : circle->shape()->exact_points(40)) {
    Point x = {y[0] + random_rational(rng, -1, 1, 256) / 64, y[1] + random_rational(rng, -1, 1, 256) / 64};
    Rational r = sqrt_approx(sq_dist(x, y), 30) + pow2_neg(30) + depth;
    EXPECT_TRUE(stream.hits(Ball(x, r), fuel).is_yes());
  }
}

TEST(CeHits, StreamEmitsOnlySoundCodes) {
  auto space = euclidean_space(2);
  CeHitStream stream(space, circle_approximator());
  for (int q = 0; q < 5; ++q) {
    auto code = stream.next(1 << 14);
    if (!code) break;
    Ball b = space->ball_at(*code);
    Rational c2 = sq_dist(b.center(), pt(0, 0));
    Rational out = 1 + b.radius(), in = 1 - b.radius();
    EXPECT_TRUE(c2 < out * out && (sgn(in) <= 0 || c2 > in * in));
  }
}

TEST(ProgramSet, ReadsBallsIncrementally) {
  std::string cmd =
      "printf '%s\\n' '{\"center\":[\"3/1\",\"0/1\"],\"radius\":\"1/2\"}' "
      "'{\"center\":[\"-3/1\",\"0/1\"],\"radius\":\"1/2\"}' '{\"center\":[\"0/1\",\"3/1\"],\"radius\":\"1/3\"}'";
  auto set = program_set(cmd, Ball(pt(0, 0), 2), 2);
  EXPECT_EQ(set->complement_stage(0).size(), 1u);
  EXPECT_EQ(set->complement_stage(1).size(), 2u);
  auto all = set->complement_stage(5);
  ASSERT_EQ(all.size(), 3u);
  EXPECT_EQ(all[2].radius(), Rational(1, 3));
  EXPECT_EQ(set->spec()["shape"], "custom");
  BallUnion big = {Ball(pt(0, 0), 3)};
  Ball w0 = set->bounding_ball();
  unsigned fuel = ecp_fuel_bound(std::span<const Ball>(&w0, 1), Rational(1));
  EXPECT_TRUE(covers(r2(), *set, big, fuel).is_yes());

  auto wrong = program_set("printf '%s\\n' '{\"center\":[\"1/1\"],\"radius\":\"1/2\"}'", Ball(pt(0, 0), 2), 2);
  EXPECT_THROW(wrong->complement_stage(0), std::invalid_argument);
}
