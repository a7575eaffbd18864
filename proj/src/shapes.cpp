#include "cochain/shapes.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>

namespace cochain {

namespace {

using nlohmann::json;

json point_json(const Point& p) {
  json a = json::array();
  for (const auto& x : p) a.push_back(to_string(x));
  return a;
}

Rational rational_json(const json& v, const char* what) {
  if (v.is_string()) return parse_rational(v.get<std::string>());
  if (v.is_number_integer()) return Rational(v.get<long>());
  throw std::invalid_argument(std::string("shape parameter '") + what + "' must be a rational string");
}

Point point_from(const json& spec, const char* key, Point fallback) {
  if (!spec.contains(key)) return fallback;
  const auto& v = spec.at(key);
  if (!v.is_array()) throw std::invalid_argument(std::string("shape parameter '") + key + "' must be an array");
  Point p;
  for (const auto& x : v) p.push_back(rational_json(x, key));
  return p;
}

Rational rational_from(const json& spec, const char* key, Rational fallback) {
  if (!spec.contains(key)) return fallback;
  return rational_json(spec.at(key), key);
}

Rational squared_distance(const Point& a, const Point& b) { return exact::distance_squared(a, b); }

long double norm(std::span<const long double> v) {
  long double s = 0;
  for (auto x : v) s += x * x;
  return std::sqrt(s);
}

std::vector<long double> offset(std::span<const long double> x, const Point& c) {
  std::vector<long double> d(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) d[i] = x[i] - static_cast<long double>(c[i].get_d());
  return d;
}

void require_positive(const Rational& r, const char* what) {
  if (sgn(r) <= 0) throw std::invalid_argument(std::string(what) + " must be positive");
}

std::vector<std::vector<double>> unit_directions(std::size_t n, std::size_t count) {
  std::vector<std::vector<double>> dirs;
  if (n == 1) return {{-1.0}, {1.0}};
  if (n == 2) {
    for (std::size_t i = 0; i < count; ++i) {
      double th = 2 * std::numbers::pi * (static_cast<double>(i) + 0.5) / static_cast<double>(count);
      dirs.push_back({std::cos(th), std::sin(th)});
    }
    return dirs;
  }
  if (n == 3) {
    double golden = std::numbers::pi * (3.0 - std::sqrt(5.0));
    for (std::size_t i = 0; i < count; ++i) {
      double z = 1 - 2 * (static_cast<double>(i) + 0.5) / static_cast<double>(count);
      double rad = std::sqrt(std::max(0.0, 1 - z * z));
      double th = golden * static_cast<double>(i);
      dirs.push_back({rad * std::cos(th), rad * std::sin(th), z});
    }
    return dirs;
  }
  std::mt19937_64 rng(0);
  std::normal_distribution<double> gauss;
  for (std::size_t i = 0; i < count; ++i) {
    std::vector<double> d(n);
    double s = 0;
    for (auto& x : d) {
      x = gauss(rng);
      s += x * x;
    }
    for (auto& x : d) x /= std::sqrt(s);
    dirs.push_back(std::move(d));
  }
  return dirs;
}

class SphereShape final : public Shape {
 public:
  SphereShape(Point c, Rational r) : c_(std::move(c)), r_(std::move(r)) {
    if (c_.empty()) throw std::invalid_argument("sphere center needs at least one coordinate");
    require_positive(r_, "sphere radius");
  }
  std::string name() const override {
    if (c_.size() == 2) return "circle";
    if (c_.size() == 3) return "sphere2";
    return "sphere";
  }
  std::size_t dim() const override { return c_.size(); }
  json spec() const override { return {{"shape", name()}, {"center", point_json(c_)}, {"radius", to_string(r_)}}; }
  Ball bounding_ball() const override { return Ball(c_, r_ + 1); }
  bool closed_ball_misses(const Ball& b) const override {
    Rational s = squared_distance(b.center(), c_);
    Rational hi = r_ + b.radius();
    if (s > hi * hi) return true;
    if (b.radius() < r_) {
      Rational lo = r_ - b.radius();
      return s < lo * lo;
    }
    return false;
  }
  std::vector<Point> exact_points(std::size_t count) const override {
    auto pts = rational_sphere_points(c_.size(), count);
    for (auto& p : pts)
      for (std::size_t i = 0; i < p.size(); ++i) p[i] = c_[i] + r_ * p[i];
    return pts;
  }
  long double distance(std::span<const long double> x) const override {
    return std::abs(norm(offset(x, c_)) - static_cast<long double>(r_.get_d()));
  }

 private:
  Point c_;
  Rational r_;
};

class SolidBallShape final : public Shape {
 public:
  SolidBallShape(Point c, Rational r) : c_(std::move(c)), r_(std::move(r)) {
    if (c_.empty()) throw std::invalid_argument("ball center needs at least one coordinate");
    require_positive(r_, "ball radius");
  }
  std::string name() const override { return c_.size() == 2 ? "disk" : "ball"; }
  std::size_t dim() const override { return c_.size(); }
  json spec() const override { return {{"shape", name()}, {"center", point_json(c_)}, {"radius", to_string(r_)}}; }
  Ball bounding_ball() const override { return Ball(c_, r_ + 1); }
  bool closed_ball_misses(const Ball& b) const override {
    Rational hi = r_ + b.radius();
    return squared_distance(b.center(), c_) > hi * hi;
  }
  std::vector<Point> exact_points(std::size_t count) const override {
    std::size_t n = c_.size();
    auto pts = rational_sphere_points(n, std::max<std::size_t>(count / 2, 2));
    for (auto& p : pts)
      for (std::size_t i = 0; i < n; ++i) p[i] = c_[i] + r_ * p[i];
    // Interior grid with pitch 2R/g.
    auto g = static_cast<std::size_t>(std::ceil(std::pow(static_cast<double>(count), 1.0 / static_cast<double>(n))));
    g = std::max<std::size_t>(g, 2);
    std::vector<std::size_t> idx(n, 0);
    Rational r2 = r_ * r_;
    while (true) {
      Point p(n);
      for (std::size_t i = 0; i < n; ++i)
        p[i] = c_[i] - r_ + 2 * r_ * Rational(static_cast<unsigned long>(idx[i])) / Rational(static_cast<unsigned long>(g));
      if (squared_distance(p, c_) <= r2) pts.push_back(std::move(p));
      std::size_t a = n;
      while (a-- > 0) {
        if (++idx[a] <= g) break;
        idx[a] = 0;
      }
      if (a == static_cast<std::size_t>(-1)) break;
    }
    return pts;
  }
  long double distance(std::span<const long double> x) const override {
    return std::max<long double>(0, norm(offset(x, c_)) - static_cast<long double>(r_.get_d()));
  }

 private:
  Point c_;
  Rational r_;
};

class BoxShapeBase : public Shape {
 public:
  BoxShapeBase(Point lo, Point hi) : lo_(std::move(lo)), hi_(std::move(hi)) {
    if (lo_.empty() || lo_.size() != hi_.size()) throw std::invalid_argument("box corners must have equal dimension");
    for (std::size_t i = 0; i < lo_.size(); ++i)
      if (!(lo_[i] < hi_[i])) throw std::invalid_argument("box needs lo < hi on every axis");
  }
  std::size_t dim() const override { return lo_.size(); }
  json spec() const override { return {{"shape", name()}, {"lo", point_json(lo_)}, {"hi", point_json(hi_)}}; }
  Ball bounding_ball() const override {
    Point c(lo_.size());
    Rational r = 1;
    for (std::size_t i = 0; i < lo_.size(); ++i) {
      c[i] = (lo_[i] + hi_[i]) / 2;
      r += (hi_[i] - lo_[i]) / 2;
    }
    return Ball(std::move(c), r);
  }

 protected:
  Rational outside_squared(const Point& p) const {
    Rational s = 0;
    for (std::size_t i = 0; i < p.size(); ++i) {
      if (p[i] < lo_[i]) s += (lo_[i] - p[i]) * (lo_[i] - p[i]);
      if (p[i] > hi_[i]) s += (p[i] - hi_[i]) * (p[i] - hi_[i]);
    }
    return s;
  }
  long double outside_distance(std::span<const long double> x) const {
    long double s = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
      long double l = lo_[i].get_d(), h = hi_[i].get_d();
      if (x[i] < l) s += (l - x[i]) * (l - x[i]);
      if (x[i] > h) s += (x[i] - h) * (x[i] - h);
    }
    return std::sqrt(s);
  }
  // Grid points with g + 1 values per axis; with boundary_only, only those
  // having some coordinate at an extreme value.
  std::vector<Point> grid_points(std::size_t g, bool boundary_only) const {
    std::size_t n = lo_.size();
    std::vector<Point> pts;
    std::vector<std::size_t> idx(n, 0);
    while (true) {
      bool on_boundary = std::any_of(idx.begin(), idx.end(), [&](std::size_t v) { return v == 0 || v == g; });
      if (!boundary_only || on_boundary) {
        Point p(n);
        for (std::size_t i = 0; i < n; ++i)
          p[i] = lo_[i] + (hi_[i] - lo_[i]) * Rational(static_cast<unsigned long>(idx[i])) /
                              Rational(static_cast<unsigned long>(g));
        pts.push_back(std::move(p));
      }
      std::size_t a = n;
      while (a-- > 0) {
        if (++idx[a] <= g) break;
        idx[a] = 0;
      }
      if (a == static_cast<std::size_t>(-1)) break;
    }
    return pts;
  }

  Point lo_, hi_;
};

class BoxShape final : public BoxShapeBase {
 public:
  using BoxShapeBase::BoxShapeBase;
  std::string name() const override { return lo_.size() == 2 ? "square_cell" : "box"; }
  bool closed_ball_misses(const Ball& b) const override {
    return outside_squared(b.center()) > b.radius() * b.radius();
  }
  std::vector<Point> exact_points(std::size_t count) const override {
    auto g = static_cast<std::size_t>(std::ceil(std::pow(static_cast<double>(count), 1.0 / static_cast<double>(dim()))));
    return grid_points(std::max<std::size_t>(g, 2), false);
  }
  long double distance(std::span<const long double> x) const override { return outside_distance(x); }
};

class BoxBoundaryShape final : public BoxShapeBase {
 public:
  using BoxShapeBase::BoxShapeBase;
  std::string name() const override { return "box_boundary"; }
  bool closed_ball_misses(const Ball& b) const override {
    const auto& p = b.center();
    const auto& r = b.radius();
    if (outside_squared(p) > r * r) return true;
    for (std::size_t i = 0; i < p.size(); ++i)
      if (!(p[i] - lo_[i] > r && hi_[i] - p[i] > r)) return false;
    return true;
  }
  std::vector<Point> exact_points(std::size_t count) const override {
    double faces = 2.0 * static_cast<double>(dim());
    auto g = static_cast<std::size_t>(
        std::ceil(std::pow(static_cast<double>(count) / faces, 1.0 / std::max(1.0, static_cast<double>(dim()) - 1))));
    return grid_points(std::max<std::size_t>(g, 2), true);
  }
  long double distance(std::span<const long double> x) const override {
    long double out = outside_distance(x);
    if (out > 0) return out;
    long double best = INFINITY;
    for (std::size_t i = 0; i < x.size(); ++i) {
      best = std::min(best, x[i] - static_cast<long double>(lo_[i].get_d()));
      best = std::min(best, static_cast<long double>(hi_[i].get_d()) - x[i]);
    }
    return best;
  }
};

class EllipseShape final : public Shape {
 public:
  EllipseShape(Point c, Rational a, Rational b) : c_(std::move(c)), a_(std::move(a)), b_(std::move(b)) {
    if (c_.size() != 2) throw std::invalid_argument("ellipse center must have two coordinates");
    require_positive(a_, "ellipse semi-axis a");
    require_positive(b_, "ellipse semi-axis b");
  }
  std::string name() const override { return "ellipse"; }
  std::size_t dim() const override { return 2; }
  json spec() const override {
    return {{"shape", "ellipse"}, {"center", point_json(c_)}, {"a", to_string(a_)}, {"b", to_string(b_)}};
  }
  Ball bounding_ball() const override { return Ball(c_, std::max(a_, b_) + 1); }
  // g(x) = (dx/a)^2 + (dy/b)^2 - 1 stays on one side of 0 over the ball:
  // for |h_x|, |h_y| <= r the linear part is at most 2r(|dx|/a^2 + |dy|/b^2)
  // and the quadratic part lies in [0, r^2 max(1/a^2, 1/b^2)].
  bool closed_ball_misses(const Ball& ball) const override {
    Rational dx = ball.center()[0] - c_[0];
    Rational dy = ball.center()[1] - c_[1];
    Rational a2 = a_ * a_, b2 = b_ * b_;
    const Rational& r = ball.radius();
    Rational g = dx * dx / a2 + dy * dy / b2 - 1;
    Rational lin = 2 * r * (abs(dx) / a2 + abs(dy) / b2);
    Rational quad = r * r / std::min(a2, b2);
    return g - lin > 0 || g + lin + quad < 0;
  }
  std::vector<Point> exact_points(std::size_t count) const override {
    auto pts = rational_sphere_points(2, count);
    for (auto& p : pts) {
      p[0] = c_[0] + a_ * p[0];
      p[1] = c_[1] + b_ * p[1];
    }
    return pts;
  }
  long double distance(std::span<const long double> x) const override {
    long double a = a_.get_d(), b = b_.get_d();
    long double px = x[0] - static_cast<long double>(c_[0].get_d());
    long double py = x[1] - static_cast<long double>(c_[1].get_d());
    auto f = [&](long double th) {
      long double ex = a * std::cos(th) - px, ey = b * std::sin(th) - py;
      return ex * ex + ey * ey;
    };
    constexpr int samples = 720;
    const long double step = 2 * std::numbers::pi_v<long double> / samples;
    int best = 0;
    long double best_val = f(0);
    for (int i = 1; i < samples; ++i) {
      long double v = f(step * i);
      if (v < best_val) {
        best_val = v;
        best = i;
      }
    }
    long double lo = step * (best - 1), hi = step * (best + 1);
    const long double phi = (std::sqrt(5.0L) - 1) / 2;
    for (int it = 0; it < 120; ++it) {
      long double m1 = hi - phi * (hi - lo), m2 = lo + phi * (hi - lo);
      if (f(m1) < f(m2))
        hi = m2;
      else
        lo = m1;
    }
    return std::sqrt(std::min(best_val, f((lo + hi) / 2)));
  }

 private:
  Point c_;
  Rational a_, b_;
};

class HalfCircleShape final : public Shape {
 public:
  HalfCircleShape(Point c, Rational r) : circle_(c, r), c_(std::move(c)), r_(std::move(r)) {
    if (c_.size() != 2) throw std::invalid_argument("half circle center must have two coordinates");
  }
  std::string name() const override { return "half_circle"; }
  std::size_t dim() const override { return 2; }
  json spec() const override { return {{"shape", name()}, {"center", point_json(c_)}, {"radius", to_string(r_)}}; }
  Ball bounding_ball() const override { return Ball(c_, r_ + 1); }
  bool closed_ball_misses(const Ball& b) const override {
    return circle_.closed_ball_misses(b) || b.center()[1] + b.radius() < c_[1];
  }
  std::vector<Point> exact_points(std::size_t count) const override {
    auto pts = circle_.exact_points(2 * count);
    std::erase_if(pts, [&](const Point& p) { return p[1] < c_[1]; });
    return pts;
  }
  long double distance(std::span<const long double> x) const override {
    auto d = offset(x, c_);
    long double r = r_.get_d();
    if (d[1] >= 0) return std::abs(norm(d) - r);
    long double e1 = std::hypot(d[0] - r, d[1]), e2 = std::hypot(d[0] + r, d[1]);
    return std::min(e1, e2);
  }

 private:
  SphereShape circle_;
  Point c_;
  Rational r_;
};

Point zeros(std::size_t n) { return Point(n, Rational(0)); }

}  // namespace

std::vector<Point> rational_sphere_points(std::size_t n, std::size_t count) {
  if (n == 0) throw std::invalid_argument("rational_sphere_points: dimension must be positive");
  if (n == 1) return {Point{Rational(-1)}, Point{Rational(1)}};
  constexpr unsigned bits = 40;
  std::vector<Point> out;
  bool pole_added = false;
  for (const auto& d : unit_directions(n, std::max<std::size_t>(count, 1))) {
    double last = d[n - 1];
    if (last > 1 - 1e-9) {
      if (!pole_added) {
        Point pole = zeros(n);
        pole[n - 1] = 1;
        out.push_back(std::move(pole));
        pole_added = true;
      }
      continue;
    }
    // Stereographic coordinates from the pole e_n, rounded to dyadics; the
    // inverse projection of any rational u is an exact rational point.
    std::vector<Rational> u(n - 1);
    Rational s = 0;
    for (std::size_t i = 0; i + 1 < n; ++i) {
      u[i] = round_to_dyadic(d[i] / (1 - last), bits);
      s += u[i] * u[i];
    }
    Point p(n);
    for (std::size_t i = 0; i + 1 < n; ++i) p[i] = 2 * u[i] / (s + 1);
    p[n - 1] = (s - 1) / (s + 1);
    out.push_back(std::move(p));
  }
  return out;
}

ShapePtr sphere_shape(Point center, Rational radius) {
  return std::make_shared<SphereShape>(std::move(center), std::move(radius));
}
ShapePtr solid_ball_shape(Point center, Rational radius) {
  return std::make_shared<SolidBallShape>(std::move(center), std::move(radius));
}
ShapePtr box_shape(Point lo, Point hi) { return std::make_shared<BoxShape>(std::move(lo), std::move(hi)); }
ShapePtr box_boundary_shape(Point lo, Point hi) {
  return std::make_shared<BoxBoundaryShape>(std::move(lo), std::move(hi));
}
ShapePtr ellipse_shape(Point center, Rational a, Rational b) {
  return std::make_shared<EllipseShape>(std::move(center), std::move(a), std::move(b));
}
ShapePtr half_circle_shape(Point center, Rational radius) {
  return std::make_shared<HalfCircleShape>(std::move(center), std::move(radius));
}

std::vector<std::string> shape_names() {
  return {"circle", "sphere2", "sphere", "disk", "ball", "square_cell", "box", "box_boundary", "ellipse",
          "half_circle"};
}

ShapePtr shape_from_json(const nlohmann::json& spec) {
  if (!spec.is_object() || !spec.contains("shape") || !spec.at("shape").is_string())
    throw std::invalid_argument("set definition needs a \"shape\" name");
  auto name = spec.at("shape").get<std::string>();
  Rational one = 1;
  if (name == "circle") return sphere_shape(point_from(spec, "center", zeros(2)), rational_from(spec, "radius", one));
  if (name == "sphere2")
    return sphere_shape(point_from(spec, "center", zeros(3)), rational_from(spec, "radius", one));
  if (name == "sphere" || name == "ball") {
    if (!spec.contains("center")) throw std::invalid_argument(name + " needs a center");
    auto c = point_from(spec, "center", {});
    auto r = rational_from(spec, "radius", one);
    return name == "sphere" ? sphere_shape(std::move(c), std::move(r)) : solid_ball_shape(std::move(c), std::move(r));
  }
  if (name == "disk") return solid_ball_shape(point_from(spec, "center", zeros(2)), rational_from(spec, "radius", one));
  if (name == "square_cell" || name == "box" || name == "box_boundary") {
    std::size_t n = 2;
    if (spec.contains("lo") && spec.at("lo").is_array()) n = spec.at("lo").size();
    Point hi_default(n, Rational(1));
    auto lo = point_from(spec, "lo", zeros(n));
    auto hi = point_from(spec, "hi", hi_default);
    if (name == "box_boundary") return box_boundary_shape(std::move(lo), std::move(hi));
    return box_shape(std::move(lo), std::move(hi));
  }
  if (name == "ellipse")
    return ellipse_shape(point_from(spec, "center", zeros(2)), rational_from(spec, "a", Rational(2)),
                         rational_from(spec, "b", one));
  if (name == "half_circle")
    return half_circle_shape(point_from(spec, "center", zeros(2)), rational_from(spec, "radius", one));
  throw std::invalid_argument("unknown shape '" + name + "'");
}

}  // namespace cochain
