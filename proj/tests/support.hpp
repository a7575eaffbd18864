#pragma once

// Random instance generators and exact Euclidean oracles shared by the unit
// tests and the acceptance runner. The oracles are written directly on
// squared rationals and do not call the library predicates.

#include "cochain/approx.hpp"

#include <algorithm>
#include <random>
#include <vector>

namespace cochain::testing {

using Rng = std::mt19937_64;

inline Rational random_rational(Rng& rng, long lo, long hi, long den) {
  std::uniform_int_distribution<long> d(lo * den, hi * den);
  Rational r(d(rng), den);
  r.canonicalize();
  return r;
}

inline Point random_point(Rng& rng, std::size_t n, long range, long den) {
  Point p(n);
  for (auto& x : p) x = random_rational(rng, -range, range, den);
  return p;
}

inline Ball random_ball(Rng& rng, std::size_t n, long range, long den, Rational rmin, Rational rmax) {
  Rational r;
  do {
    r = random_rational(rng, 0, 1, 64) * (rmax - rmin) + rmin;
  } while (sgn(r) <= 0);
  return Ball(random_point(rng, n, range, den), r);
}

inline Rational sq_dist(const Point& a, const Point& b) {
  Rational s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
  return s;
}

/// |p - c| < r.
inline bool oracle_in_open(const Point& p, const Ball& b) { return sq_dist(p, b.center()) < b.radius() * b.radius(); }
inline bool oracle_in_closed(const Point& p, const Ball& b) {
  return sq_dist(p, b.center()) <= b.radius() * b.radius();
}
/// |c_u - c_v| > r_u + r_v.
inline bool oracle_closed_disjoint(const Ball& u, const Ball& v) {
  Rational s = u.radius() + v.radius();
  return sq_dist(u.center(), v.center()) > s * s;
}
/// |c_u - c_v| < r_u + r_v + eps: the open balls hold points closer than eps.
inline bool oracle_within(const Ball& u, const Ball& v, const Rational& eps) {
  Rational s = u.radius() + v.radius() + eps;
  return sq_dist(u.center(), v.center()) < s * s;
}
/// |a - b| + margin <= r, for a, b points and margin >= 0.
inline bool oracle_inside_with_margin(const Point& a, const Point& b, const Rational& r, const Rational& margin) {
  Rational s = r - margin;
  return sgn(s) > 0 && sq_dist(a, b) <= s * s;
}

/// Rational points on the circle of radius r around c (n = 2) from
/// Pythagorean triples, plus the four axis points.
inline std::vector<Point> circle_points(const Point& c, const Rational& r, int depth = 6) {
  std::vector<Point> out;
  for (int a = 1; a <= depth; ++a)
    for (int b = 0; b < a; ++b) {
      Rational den(a * a + b * b);
      Rational x = Rational(a * a - b * b) / den, y = Rational(2 * a * b) / den;
      for (int sx : {-1, 1})
        for (int sy : {-1, 1}) {
          out.push_back({c[0] + sx * r * x, c[1] + sy * r * y});
          out.push_back({c[0] + sx * r * y, c[1] + sy * r * x});
        }
    }
  return out;
}

/// Dense exact sample of a closed union in the plane: boundary points of
/// every member plus a grid restricted to the members.
inline std::vector<Point> union_samples(const BallUnion& u, int grid = 24) {
  std::vector<Point> out;
  for (const auto& b : u) {
    for (auto& p : circle_points(b.center(), b.radius())) out.push_back(std::move(p));
    for (int i = 0; i <= grid; ++i)
      for (int j = 0; j <= grid; ++j) {
        Point p = {b.center()[0] + b.radius() * Rational(2 * i - grid, grid),
                   b.center()[1] + b.radius() * Rational(2 * j - grid, grid)};
        if (oracle_in_closed(p, b)) out.push_back(std::move(p));
      }
  }
  return out;
}

/// Exact diameter check of a closed union: diam <= d iff every member pair
/// has |c_u - c_v| + r_u + r_v <= d.
inline bool oracle_diameter_at_most(const BallUnion& u, const Rational& d) {
  for (const auto& a : u)
    for (const auto& b : u) {
      Rational rest = d - a.radius() - b.radius();
      if (sgn(rest) < 0 || sq_dist(a.center(), b.center()) > rest * rest) return false;
    }
  return true;
}

/// A chain C in the plane that is eps-proper with mesh below eps (checked by
/// the exact oracles), and a cellwise refinement D with nonempty sub-unions.
struct RefinementPair {
  Chain coarse, fine;
  Rational eps;
  bool premises_hold = false;
};

inline RefinementPair refinement_pair(Rng& rng) {
  std::size_t m = 1 + rng() % 3;
  Rational h = random_rational(rng, 1, 2, 8);
  Rational r = h * random_rational(rng, 1, 3, 16) / 8;  // member radius
  Rational spread = h / 4;                            // member centers within this of the cell center
  std::vector<BallUnion> cells;
  for (std::size_t i = 0; i <= m; ++i)
    for (std::size_t j = 0; j <= m; ++j) {
      BallUnion cell;
      std::size_t members = 1 + rng() % 4;
      for (std::size_t q = 0; q < members; ++q) {
        Point c = {h * static_cast<long>(i) + spread * random_rational(rng, -1, 1, 32) / 2,
                   h * static_cast<long>(j) + spread * random_rational(rng, -1, 1, 32) / 2};
        cell.emplace_back(std::move(c), r);
      }
      cells.push_back(std::move(cell));
    }
  RefinementPair out;
  out.coarse = Chain(2, m, cells);
  // Adjacent cell centers are at most h * sqrt(2) apart; a cell's diameter is
  // at most spread * sqrt(2) + 2r. eps above both makes the premises hold.
  Rational diam = spread * 3 / 2 + 2 * r;
  out.eps = (h * 3 / 2 + diam) * random_rational(rng, 1, 2, 8);
  bool ok = true;
  for (const auto& cell : cells) ok = ok && oracle_diameter_at_most(cell, out.eps - pow2_neg(20));
  const Chain& c = out.coarse;
  for (std::size_t a = 0; a < c.size(); ++a)
    for (std::size_t b = a + 1; b < c.size(); ++b) {
      auto ia = c.unflatten(a), ib = c.unflatten(b);
      std::size_t sup = 0;
      for (std::size_t d = 0; d < 2; ++d) sup = std::max(sup, ia[d] > ib[d] ? ia[d] - ib[d] : ib[d] - ia[d]);
      if (sup != 1) continue;
      bool close = false;
      for (const auto& u : c.cell(a))
        for (const auto& v : c.cell(b)) close = close || oracle_within(u, v, out.eps);
      ok = ok && close;
    }
  out.premises_hold = ok;
  for (auto& cell : cells) {
    std::shuffle(cell.begin(), cell.end(), rng);
    cell.resize(1 + rng() % cell.size());
  }
  out.fine = Chain(2, m, std::move(cells));
  return out;
}

}  // namespace cochain::testing
