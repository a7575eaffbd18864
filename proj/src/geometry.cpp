#include "cochain/geometry.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>

namespace cochain {

std::vector<double> to_doubles(const Point& p) {
  std::vector<double> out(p.size());
  for (std::size_t i = 0; i < p.size(); ++i) out[i] = p[i].get_d();
  return out;
}

Ball::Ball(Point center, Rational radius)
    : center_(std::move(center)), radius_(std::move(radius)) {
  if (sgn(radius_) <= 0) throw std::invalid_argument("ball radius must be positive");
  radius_.canonicalize();
  for (auto& c : center_) c.canonicalize();
  center_d_ = to_doubles(center_);
  radius_d_ = radius_.get_d();
}

std::vector<double> Box::center() const {
  std::vector<double> c(lo.size());
  for (std::size_t i = 0; i < lo.size(); ++i) c[i] = 0.5 * (lo[i] + hi[i]);
  return c;
}

Box Box::child(unsigned which) const {
  Box b = *this;
  for (std::size_t d = 0; d < lo.size(); ++d) {
    double mid = 0.5 * (lo[d] + hi[d]);
    if ((which >> d) & 1U)
      b.lo[d] = mid;
    else
      b.hi[d] = mid;
  }
  return b;
}

Box dyadic_root_box(std::span<const Ball> balls) {
  if (balls.empty()) throw std::invalid_argument("dyadic_root_box: no balls");
  std::size_t n = balls.front().dim();
  std::vector<double> lo(n, std::numeric_limits<double>::infinity());
  std::vector<double> hi(n, -std::numeric_limits<double>::infinity());
  for (const auto& b : balls)
    for (std::size_t d = 0; d < n; ++d) {
      lo[d] = std::min(lo[d], ball_lower(b, d));
      hi[d] = std::max(hi[d], ball_upper(b, d));
    }
  double extent = 0;
  for (std::size_t d = 0; d < n; ++d) extent = std::max(extent, hi[d] - lo[d]);
  double side = std::ldexp(1.0, std::ilogb(extent) + 1);
  // Anchoring at a multiple of `side` and doubling covers [lo, lo + side].
  Box box;
  box.lo.resize(n);
  box.hi.resize(n);
  for (std::size_t d = 0; d < n; ++d) {
    box.lo[d] = std::floor(lo[d] / side) * side;
    box.hi[d] = box.lo[d] + 2 * side;
  }
  return box;
}

Box dyadic_root_box(const Ball& b) { return dyadic_root_box(std::span<const Ball>(&b, 1)); }

namespace exact {

namespace {

constexpr double kUnit = 0x1p-52;

// Decides sign(s - t) from floating estimates; 2 means "ask exact arithmetic".
int filter(double s, double t, double mag, std::size_t n) {
  if (!(mag > 1e-250 && mag < 1e250)) return 2;
  double err = (16.0 + 2.0 * static_cast<double>(n)) * kUnit * mag;
  double d = s - t;
  if (d > err) return 1;
  if (d < -err) return -1;
  return 2;
}

int sign_of(const Rational& x) { return sgn(x); }

Rational exact_of(double x) { return Rational(x); }

// Per-axis contribution |x - c| for the point of [lo, hi] farthest from c.
struct Far {
  static double d(double lo, double hi, double c) { return std::max(std::abs(lo - c), std::abs(hi - c)); }
  static Rational x(double lo, double hi, const Rational& c) {
    Rational a = abs(exact_of(lo) - c);
    Rational b = abs(exact_of(hi) - c);
    return a > b ? a : b;
  }
};

// Per-axis contribution for the point of [lo, hi] nearest to c.
struct Near {
  static double d(double lo, double hi, double c) { return std::max({lo - c, 0.0, c - hi}); }
  static Rational x(double lo, double hi, const Rational& c) {
    Rational l = exact_of(lo);
    if (c < l) return l - c;
    Rational h = exact_of(hi);
    if (c > h) return c - h;
    return Rational(0);
  }
};

// sign(sum_i w_i^2 - r^2) for the box-to-center contributions of Mode.
template <class Mode>
int box_sign(const Box& box, const Ball& b) {
  std::size_t n = box.dim();
  const auto& cd = b.center_d();
  double s = 0, mag = 0;
  for (std::size_t i = 0; i < n; ++i) {
    double w = Mode::d(box.lo[i], box.hi[i], cd[i]);
    s += w * w;
    double m = std::max(std::abs(box.lo[i]), std::abs(box.hi[i])) + std::abs(cd[i]);
    mag += m * m;
  }
  double rd = b.radius_d();
  mag += rd * rd;
  int f = filter(s, rd * rd, mag, n);
  if (f != 2) return f;
  Rational se = 0;
  for (std::size_t i = 0; i < n; ++i) {
    Rational w = Mode::x(box.lo[i], box.hi[i], b.center()[i]);
    se += w * w;
  }
  return sign_of(se - b.radius() * b.radius());
}

// sign(|a - b|^2 - rho^2) where rho = sum of `terms` (all >= 0).
int point_sign(const Point& a, std::span<const double> ad, const Point& b, std::span<const double> bd,
               std::initializer_list<const Rational*> terms, std::initializer_list<double> terms_d) {
  std::size_t n = a.size();
  if (b.size() != n) throw std::invalid_argument("dimension mismatch");
  double s = 0, mag = 0;
  for (std::size_t i = 0; i < n; ++i) {
    double w = ad[i] - bd[i];
    s += w * w;
    double m = std::abs(ad[i]) + std::abs(bd[i]);
    mag += m * m;
  }
  double rho = 0;
  for (double t : terms_d) rho += std::abs(t);
  mag += rho * rho;
  int f = filter(s, rho * rho, mag, n);
  if (f != 2) return f;
  Rational se = 0;
  for (std::size_t i = 0; i < n; ++i) {
    Rational w = a[i] - b[i];
    se += w * w;
  }
  Rational re = 0;
  for (const Rational* t : terms) re += *t;
  return sign_of(se - re * re);
}

}  // namespace

Rational distance_squared(const Point& a, const Point& b) {
  if (a.size() != b.size()) throw std::invalid_argument("dimension mismatch");
  Rational s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    Rational w = a[i] - b[i];
    s += w * w;
  }
  return s;
}

int compare_distance(const Point& a, std::span<const double> ad, const Point& b, std::span<const double> bd,
                     const Rational& r) {
  if (sgn(r) < 0) throw std::invalid_argument("compare_distance: negative radius");
  return point_sign(a, ad, b, bd, {&r}, {r.get_d()});
}

int compare_distance(const Point& a, const Point& b, const Rational& r) {
  return compare_distance(a, to_doubles(a), b, to_doubles(b), r);
}

bool in_open_ball(const Point& p, std::span<const double> pd, const Ball& b) {
  return point_sign(p, pd, b.center(), b.center_d(), {&b.radius()}, {b.radius_d()}) < 0;
}

bool in_closed_ball(const Point& p, std::span<const double> pd, const Ball& b) {
  return point_sign(p, pd, b.center(), b.center_d(), {&b.radius()}, {b.radius_d()}) <= 0;
}

bool closed_balls_disjoint(const Ball& u, const Ball& v) {
  return point_sign(u.center(), u.center_d(), v.center(), v.center_d(), {&u.radius(), &v.radius()},
                    {u.radius_d(), v.radius_d()}) > 0;
}

bool closed_balls_separated_by(const Ball& u, const Ball& v, const Rational& gap) {
  return point_sign(u.center(), u.center_d(), v.center(), v.center_d(), {&u.radius(), &v.radius(), &gap},
                    {u.radius_d(), v.radius_d(), gap.get_d()}) > 0;
}

bool open_balls_within(const Ball& u, const Ball& v, const Rational& eps) {
  return point_sign(u.center(), u.center_d(), v.center(), v.center_d(), {&u.radius(), &v.radius(), &eps},
                    {u.radius_d(), v.radius_d(), eps.get_d()}) < 0;
}

bool closed_ball_in_open_ball(const Ball& a, const Ball& b) {
  if (a.radius() >= b.radius()) return false;
  Rational slack = b.radius() - a.radius();
  return point_sign(a.center(), a.center_d(), b.center(), b.center_d(), {&slack}, {slack.get_d()}) < 0;
}

bool box_in_open_ball(const Box& box, const Ball& b) { return box_sign<Far>(box, b) < 0; }
bool box_in_closed_ball(const Box& box, const Ball& b) { return box_sign<Far>(box, b) <= 0; }
bool box_outside_closed_ball(const Box& box, const Ball& b) { return box_sign<Near>(box, b) > 0; }
bool box_misses_open_ball(const Box& box, const Ball& b) { return box_sign<Near>(box, b) >= 0; }

}  // namespace exact

}  // namespace cochain
