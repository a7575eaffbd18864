#pragma once

// Co-c.e. closed sets (complement given as an enumeration of rational balls
// plus a bounding closed ball), the covering semi-decision, and the
// conversion from approximators to hit enumerations.

#include "cochain/chains.hpp"

#include <json.hpp>

#include <cstdint>
#include <cstdio>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>

namespace cochain {

/// A closed subset of R^n with exact geometric tests. Used to build
/// complement enumerations and as an independent test oracle.
class Shape {
 public:
  virtual ~Shape() = default;
  virtual std::string name() const = 0;
  virtual std::size_t dim() const = 0;
  virtual nlohmann::json spec() const = 0;
  virtual Ball bounding_ball() const = 0;
  /// Exact and conservative: true only if the closed ball does not meet the set.
  /// For every point outside the set, true for all small enough balls around it.
  virtual bool closed_ball_misses(const Ball& b) const = 0;
  /// Rational points lying exactly on the set (about `count` of them).
  virtual std::vector<Point> exact_points(std::size_t count) const = 0;
  /// Euclidean distance from x to the set.
  virtual long double distance(std::span<const long double> x) const = 0;
};

using ShapePtr = std::shared_ptr<const Shape>;

/// Uniform grid over the bounding boxes of a Euclidean ball family, for
/// point location queries.
class BallGrid {
 public:
  explicit BallGrid(std::span<const Ball> balls);
  /// Positions of balls whose bounding box contains p (superset of the balls containing p).
  std::vector<std::uint32_t> candidates(std::span<const double> p) const;
  /// p lies in some open ball (exact).
  bool in_open_union(const Point& p) const;
  /// Position of a ball whose open interior contains p, if any.
  std::optional<std::uint32_t> locate(const Point& p) const;

 private:
  std::optional<std::size_t> cell_of(std::span<const double> p) const;

  std::span<const Ball> balls_;
  std::size_t axes_ = 0;
  std::vector<double> lo_, width_;
  std::vector<std::size_t> res_;
  std::vector<std::vector<std::uint32_t>> cells_;
};

/// First point (in order) not inside the open union, if any.
std::optional<std::size_t> find_uncovered(std::span<const Point> points, std::span<const Ball> j);

class CoCeSet {
 public:
  virtual ~CoCeSet() = default;
  virtual std::string name() const = 0;
  virtual nlohmann::json spec() const = 0;
  /// Closed ball containing the set.
  virtual Ball bounding_ball() const = 0;
  /// Balls enumerated up to stage t; their union grows with t and exhausts
  /// the complement.
  virtual BallUnion complement_stage(unsigned t) const = 0;
  /// The i-th enumerated ball, if the enumeration reaches i within its stage cap.
  virtual std::optional<Ball> complement(std::size_t i) const;
  /// Exact geometric structure, when known.
  virtual const Shape* shape() const { return nullptr; }
};

using CoCeSetPtr = std::shared_ptr<const CoCeSet>;

/// Complement enumeration of a shape by dyadic boxes: a box of the tree
/// rooted at the bounding ball's dyadic root box is emitted (as the ball
/// around it with radius side * rho_n) when that ball misses the shape;
/// otherwise it is subdivided. Stage t contains the emitted boxes of
/// levels 0..t.
CoCeSetPtr shape_set(ShapePtr shape);

/// Complement balls read incrementally from an external program that prints
/// one {"center":[...],"radius":"p/q"} object per line.
CoCeSetPtr program_set(std::string command, Ball bound, std::size_t n);

/// S subset of J (the open union). For shape sets in Euclidean space the
/// complement enumeration is walked lazily alongside the covering test; other
/// sets run the covering oracle on bounding ball vs J plus complement stage
/// `fuel`.
Verdict covers(const Space& space, const CoCeSet& set, std::span<const Ball> j, unsigned fuel,
               kernels::Exec exec = kernels::default_exec());
/// The staged route only (used to cross-check the lazy one).
Verdict covers_staged(const Space& space, const CoCeSet& set, std::span<const Ball> j, unsigned fuel);

/// H covers S, i.e. S subset of J_zeta(view).
Verdict chain_covers(const Space& space, const CoCeSet& set, const ChainView& view, unsigned fuel,
                     kernels::Exec exec = kernels::default_exec());

/// g(k) with S inside J_{g(k)} and every point of J_{g(k)} within c 2^-k of S.
struct Approximator {
  std::function<BallUnion(unsigned)> g;
  Rational c = 1;
};

/// Hit enumeration {i | S meets I_i} obtained from an approximator.
class CeHitStream {
 public:
  CeHitStream(SpacePtr space, Approximator approximator);

  /// Searches k <= fuel, centers of g(k) and delta among q_0..q_fuel for a
  /// closed ball B(p, c 2^-k + delta) inside the target. Witness: (k, member, delta index).
  Verdict hits(const Ball& target, unsigned fuel) const;

  /// Fuel after which hits() answers Yes for every target containing a ball
  /// B(y, depth) with y in S, provided the members of every g(k) have radius
  /// at most c 2^-k: the least fuel reaching both c 2^-k <= depth / 4 and a
  /// q value <= depth / 4.
  unsigned fuel_bound(const Rational& depth) const;

  /// Next emitted ball code, dovetailing (code, fuel) pairs in Cantor order;
  /// gives up after `budget` pairs.
  std::optional<Natural> next(std::size_t budget = 1 << 16);

 private:
  const BallUnion& level(unsigned k) const;

  SpacePtr space_;
  Approximator approx_;
  mutable std::map<unsigned, BallUnion> cache_;
  mutable std::mutex mu_;
  Natural cursor_ = 0;
  std::vector<Natural> emitted_;
};

}  // namespace cochain
