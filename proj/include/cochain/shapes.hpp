#pragma once

// Builtin closed sets in R^n with exact miss tests and exact rational points.

#include "cochain/effsets.hpp"

namespace cochain {

/// Sphere {x : |x - c| = R}; "circle" for n = 2, "sphere2" for n = 3.
ShapePtr sphere_shape(Point center, Rational radius);
/// Closed ball {x : |x - c| <= R}; "disk" for n = 2.
ShapePtr solid_ball_shape(Point center, Rational radius);
/// Closed box [lo, hi]; "square_cell" for n = 2.
ShapePtr box_shape(Point lo, Point hi);
/// Boundary of the box [lo, hi].
ShapePtr box_boundary_shape(Point lo, Point hi);
/// {((x - cx)/a)^2 + ((y - cy)/b)^2 = 1}.
ShapePtr ellipse_shape(Point center, Rational a, Rational b);
/// Upper half {y >= cy} of the circle.
ShapePtr half_circle_shape(Point center, Rational radius);

/// {"shape": name, ...}. Missing parameters take the unit defaults (unit
/// circle, unit sphere in R^3, unit disk, [0,1]^2, ellipse a = 2, b = 1).
/// Throws std::invalid_argument for unknown names or malformed parameters.
ShapePtr shape_from_json(const nlohmann::json& spec);

/// Names accepted by shape_from_json.
std::vector<std::string> shape_names();

/// Points on the unit sphere S^{n-1} with rational coordinates, spread
/// roughly evenly (inverse stereographic projection of dyadic points).
std::vector<Point> rational_sphere_points(std::size_t n, std::size_t count);

}  // namespace cochain
