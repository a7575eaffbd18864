#pragma once

// Fuel-bounded semi-decisions over a Space.
//
// Each predicate has an approximate route that uses only dist_approx (works
// in every space) and, where the space has an exact comparator, an exact
// route. Spaces with an exact comparator are Euclidean: closed balls there
// are disjoint exactly when the center distance exceeds the radius sum.

#include "cochain/space.hpp"

#include <span>

namespace cochain {

enum class Route { approximate, exact_when_available };

/// Fuel after which the approximate route of point_in_ball (and of other
/// strict distance inequalities) must answer Yes when the inequality holds
/// with margin m > 0: 1 + ceil(log2(1/m)), at least 1.
unsigned fuel_bound_for_margin(const Rational& margin);

/// d(p, c) < r.
Verdict point_in_ball(const Space& space, const Point& p, const Ball& b, unsigned fuel,
                      Route route = Route::approximate);
Verdict point_in_ball(const Space& space, const Natural& k, const Natural& i, unsigned fuel,
                      Route route = Route::approximate);

/// d(p, q) < eps.
Verdict distance_less(const Space& space, const Point& p, const Point& q, const Rational& eps, unsigned fuel,
                      Route route = Route::approximate);

/// Dovetails stage t over the members; the witness is the member position.
Verdict point_in_union(const Space& space, const Point& p, std::span<const Ball> j, unsigned fuel,
                       Route route = Route::approximate);
Verdict point_in_union(const Space& space, const Natural& k, const Natural& j, unsigned fuel,
                       Route route = Route::approximate);

/// Fuel after which the Euclidean covering oracle answers Yes when every
/// point x of the closed union a has a ball B(c, r) of j with |x - c| + margin < r:
/// 1 + the depth at which boxes of the dyadic root box of a have diameter
/// below the margin.
unsigned ecp_fuel_bound(std::span<const Ball> a, const Rational& margin);

/// The effective covering property oracle: closed union a inside open union j.
/// Throws std::logic_error if the space does not declare the property.
Verdict closed_union_in_union(const Space& space, std::span<const Ball> a, std::span<const Ball> j, unsigned fuel);
Verdict closed_union_in_union(const Space& space, const Natural& a, const Natural& j, unsigned fuel);

/// Closed unions do not meet. The exact route answers at fuel 1 (Yes or a
/// refutation). The generic route looks at stage t for refined
/// covers (depth t - 1) whose ball pairs are formally separated at precision t.
Verdict closed_unions_disjoint(const Space& space, std::span<const Ball> a, std::span<const Ball> b, unsigned fuel,
                               Route route = Route::exact_when_available);
Verdict closed_unions_disjoint(const Space& space, const Natural& a, const Natural& b, unsigned fuel,
                               Route route = Route::exact_when_available);

/// Formal diameter: max over member pairs of d(x_v, x_w) plus twice the
/// largest radius. An upper bound for the diameter of the closed union.
ComputableReal fdiam(const Space& space, std::span<const Ball> j);
/// Rational strict upper bound fdiam(k) + 2^-k.
Rational fdiam_upper(const Space& space, std::span<const Ball> j, unsigned k);

}  // namespace cochain
