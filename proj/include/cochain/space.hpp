#pragma once

// Computable metric spaces: a dense sequence alpha, distance approximations,
// rational balls I_i = B(alpha_{tau(i)}, q_{tau'(i)}) and finite unions J_j.
//
// Ball code   i = pair(center index, radius index)
// Union code  j = seq code of the member ball codes

#include "cochain/geometry.hpp"
#include "cochain/verdict.hpp"

#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>

namespace cochain {

/// A real x given by k -> r_k with |x - r_k| < 2^-k.
struct ComputableReal {
  std::function<Rational(unsigned)> approx;

  Rational operator()(unsigned k) const { return approx(k); }
  /// Strict upper bound r_k + 2^-k.
  Rational upper(unsigned k) const { return approx(k) + pow2_neg(k); }
  Rational lower(unsigned k) const { return approx(k) - pow2_neg(k); }

  static ComputableReal constant(Rational r);
};

class Space : public std::enable_shared_from_this<Space> {
 public:
  virtual ~Space() = default;

  virtual std::string kind() const = 0;
  /// Number of coordinates of a point; 0 for the Hilbert cube.
  virtual std::size_t dimension() const = 0;

  virtual Point point_at(const Natural& index) const = 0;
  virtual Natural index_of(const Point& p) const = 0;
  /// Throws std::invalid_argument if p is not a dense point of this space.
  virtual void validate_point(const Point& p) const = 0;

  /// F with |d(a, b) - F| < 2^-k.
  virtual Rational dist_approx(const Point& a, const Point& b, unsigned k) const = 0;

  /// Exact sign(d(a, b) - r), if the space has one.
  virtual bool has_exact_comparator() const { return false; }
  virtual int compare_distance(const Point& a, const Point& b, const Rational& r) const;

  virtual bool has_ecp() const = 0;
  virtual bool compact_closed_balls() const = 0;

  /// Effective covering property: closed union a inside open union j.
  /// Yes is sound; if the inclusion holds, Yes for all large enough fuel.
  virtual Verdict ecp_inclusion(std::span<const Ball> a, std::span<const Ball> j, unsigned fuel) const = 0;

  /// Finite family of closed balls covering the closed ball b, each of
  /// radius at most 2^-depth times a space-dependent constant.
  virtual BallUnion refine_cover(const Ball& b, unsigned depth) const = 0;

  /// Dense point on a geodesic from a to b at parameter t in [0, 1], if available.
  virtual std::optional<Point> interpolate(const Point& a, const Point& b, const Rational& t) const;

  Ball ball_at(const Natural& code) const;
  Natural ball_index(const Ball& b) const;
  BallUnion union_at(const Natural& code) const;
  Natural union_index(std::span<const Ball> u) const;

  ComputableReal distance(const Point& a, const Point& b) const;
};

using SpacePtr = std::shared_ptr<const Space>;

SpacePtr euclidean_space(std::size_t n);
SpacePtr hilbert_cube_space();

/// Rational rho_n with rho_n^2 > n/4: the ball B(center of a cube of side s,
/// s * rho_n) contains the closed cube.
Rational cube_ball_factor(std::size_t n);

}  // namespace cochain
