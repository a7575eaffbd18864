#pragma once

// Exact Euclidean predicates on rational balls and dyadic boxes.
//
// Every predicate is the sign of a sum of squares minus a square. It is
// first evaluated in double precision against a forward error bound and
// recomputed in exact rational arithmetic only when the bound cannot
// separate the result from zero, so answers are always exact.

#include "cochain/rational.hpp"

#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

namespace cochain {

using Point = std::vector<Rational>;

std::vector<double> to_doubles(const Point& p);

class Ball {
 public:
  Ball() = default;
  Ball(Point center, Rational radius);

  const Point& center() const { return center_; }
  const Rational& radius() const { return radius_; }
  const std::vector<double>& center_d() const { return center_d_; }
  double radius_d() const { return radius_d_; }
  std::size_t dim() const { return center_.size(); }

  friend bool operator==(const Ball& a, const Ball& b) {
    return a.radius_ == b.radius_ && a.center_ == b.center_;
  }

 private:
  Point center_;
  Rational radius_;
  std::vector<double> center_d_;
  double radius_d_ = 0;
};

using BallUnion = std::vector<Ball>;

/// Axis-aligned box whose corners are exact doubles (dyadic rationals).
struct Box {
  std::vector<double> lo;
  std::vector<double> hi;

  std::size_t dim() const { return lo.size(); }
  std::vector<double> center() const;
  /// Child number `which` of the 2^n halving split (bit d selects the upper half on axis d).
  Box child(unsigned which) const;
};

/// Smallest cube with dyadic corners and power-of-two side containing the
/// closed ball; corners stay exactly representable as doubles.
Box dyadic_root_box(const Ball& b);
Box dyadic_root_box(std::span<const Ball> balls);

namespace exact {

/// sign(|a - b| - r), r >= 0.
int compare_distance(const Point& a, const Point& b, const Rational& r);
int compare_distance(const Point& a, std::span<const double> ad, const Point& b, std::span<const double> bd,
                     const Rational& r);

/// Exact squared distance.
Rational distance_squared(const Point& a, const Point& b);

bool in_open_ball(const Point& p, std::span<const double> pd, const Ball& b);
bool in_closed_ball(const Point& p, std::span<const double> pd, const Ball& b);
inline bool in_open_ball(const Point& p, const Ball& b) { return in_open_ball(p, to_doubles(p), b); }
inline bool in_closed_ball(const Point& p, const Ball& b) { return in_closed_ball(p, to_doubles(p), b); }

/// |c_u - c_v| > r_u + r_v, i.e. the closed balls do not meet.
bool closed_balls_disjoint(const Ball& u, const Ball& v);
/// |c_u - c_v| > r_u + r_v + gap.
bool closed_balls_separated_by(const Ball& u, const Ball& v, const Rational& gap);
/// |c_u - c_v| < r_u + r_v + eps: the open balls contain points closer than eps.
bool open_balls_within(const Ball& u, const Ball& v, const Rational& eps);

/// Closed ball a inside open ball b.
bool closed_ball_in_open_ball(const Ball& a, const Ball& b);

bool box_in_open_ball(const Box& box, const Ball& b);
bool box_in_closed_ball(const Box& box, const Ball& b);
/// Every point of the box is farther than r from the center.
bool box_outside_closed_ball(const Box& box, const Ball& b);
/// No point of the box lies in the open ball.
bool box_misses_open_ball(const Box& box, const Ball& b);

}  // namespace exact

/// Outward-rounded axis-aligned bounds of a ball along one axis.
inline double ball_lower(const Ball& b, std::size_t axis) {
  double c = b.center_d()[axis];
  double r = b.radius_d();
  return (c - r) - 1e-12 * (std::abs(c) + r) - 1e-300;
}
inline double ball_upper(const Ball& b, std::size_t axis) {
  double c = b.center_d()[axis];
  double r = b.radius_d();
  return (c + r) + 1e-12 * (std::abs(c) + r) + 1e-300;
}

}  // namespace cochain
