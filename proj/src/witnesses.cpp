#include "cochain/approx.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <numbers>
#include <stdexcept>

namespace cochain {

namespace {

using nlohmann::json;

double param(const json& spec, const char* key, double fallback) {
  if (!spec.contains(key)) return fallback;
  const auto& v = spec.at(key);
  if (v.is_string()) return parse_rational(v.get<std::string>()).get_d();
  if (v.is_number()) return v.get<double>();
  throw std::invalid_argument(std::string("sampler parameter '") + key + "' must be a rational");
}

std::vector<double> point_param(const json& spec, const char* key, std::vector<double> fallback) {
  if (!spec.contains(key)) return fallback;
  std::vector<double> out;
  for (const auto& v : spec.at(key)) out.push_back(v.is_string() ? parse_rational(v.get<std::string>()).get_d() : v.get<double>());
  return out;
}

// Radial projection of the boundary of I^n (centered at 1/2) onto the unit sphere.
std::vector<double> unit_direction(std::span<const double> x) {
  std::vector<double> v(x.size());
  double s = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    v[i] = x[i] - 0.5;
    s += v[i] * v[i];
  }
  s = std::sqrt(s);
  if (s == 0) throw std::invalid_argument("sampler evaluated at the cube center");
  for (auto& c : v) c /= s;
  return v;
}

std::uint64_t splitmix(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

Sampler perturbed(Sampler base, double amplitude, std::uint64_t seed) {
  return [base = std::move(base), amplitude, seed](std::span<const double> x) {
    auto y = base(x);
    std::uint64_t h = splitmix(seed);
    for (double v : x) {
      std::uint64_t bits;
      std::memcpy(&bits, &v, sizeof bits);
      h = splitmix(h ^ bits);
    }
    for (std::size_t i = 0; i < y.size(); ++i) {
      h = splitmix(h + i);
      double u = static_cast<double>(h >> 11) * 0x1.0p-53;
      y[i] += amplitude * (2 * u - 1);
    }
    return y;
  };
}

Sampler base_sampler(const json& shape, ProblemKind kind) {
  if (!shape.is_object() || !shape.contains("shape")) throw std::invalid_argument("sampler needs a shape definition");
  auto name = shape.at("shape").get<std::string>();
  if (name == "circle" || name == "sphere2") {
    std::size_t n = name == "circle" ? 2 : 3;
    auto c = point_param(shape, "center", std::vector<double>(n, 0.0));
    double r = param(shape, "radius", 1);
    if (kind != ProblemKind::sphere) throw std::invalid_argument(name + " sampler parametrizes a sphere");
    return [c, r](std::span<const double> x) {
      auto u = unit_direction(x);
      for (std::size_t i = 0; i < u.size(); ++i) u[i] = c[i] + r * u[i];
      return u;
    };
  }
  if (name == "ellipse") {
    auto c = point_param(shape, "center", {0.0, 0.0});
    double a = param(shape, "a", 2), b = param(shape, "b", 1);
    if (kind != ProblemKind::sphere) throw std::invalid_argument("ellipse sampler parametrizes a sphere");
    return [c, a, b](std::span<const double> x) {
      auto u = unit_direction(x);
      return std::vector<double>{c[0] + a * u[0], c[1] + b * u[1]};
    };
  }
  if (name == "disk") {
    auto c = point_param(shape, "center", {0.0, 0.0});
    double r = param(shape, "radius", 1);
    if (kind != ProblemKind::cell) throw std::invalid_argument("disk sampler parametrizes a cell");
    // Squares centered at 1/2 go to circles: v -> 2R v |v|_inf / |v|_2.
    return [c, r](std::span<const double> x) {
      double vx = x[0] - 0.5, vy = x[1] - 0.5;
      double l2 = std::hypot(vx, vy);
      double linf = std::max(std::abs(vx), std::abs(vy));
      double scale = l2 == 0 ? 0 : 2 * r * linf / l2;
      return std::vector<double>{c[0] + scale * vx, c[1] + scale * vy};
    };
  }
  if (name == "square_cell") {
    auto lo = point_param(shape, "lo", {0.0, 0.0});
    auto hi = point_param(shape, "hi", {1.0, 1.0});
    if (kind != ProblemKind::cell) throw std::invalid_argument("square_cell sampler parametrizes a cell");
    return [lo, hi](std::span<const double> x) {
      std::vector<double> y(x.size());
      for (std::size_t i = 0; i < x.size(); ++i) y[i] = lo[i] + (hi[i] - lo[i]) * x[i];
      return y;
    };
  }
  throw std::invalid_argument("no sampler for shape '" + name + "'");
}

Point dyadic_point(std::span<const double> x, unsigned bits) {
  Point p;
  for (double v : x) p.push_back(round_to_dyadic(v, bits));
  return p;
}

constexpr unsigned kWitnessBits = 20;

// Balls of radius rho centered on a parametrized arc, theta in [from, to].
BallUnion arc_balls(const std::function<std::vector<double>(double)>& curve, double from, double to, std::size_t count,
                    const Rational& rho) {
  BallUnion out;
  for (std::size_t i = 0; i < count; ++i) {
    double th = from + (to - from) * static_cast<double>(i) / static_cast<double>(count - 1);
    out.emplace_back(dyadic_point(curve(th), kWitnessBits), rho);
  }
  return out;
}

// Smallest k0 with 2 * 2^-k0 < d, given d^2 exactly.
unsigned k0_below(const Rational& d2) {
  unsigned k0 = 0;
  while (4 * pow2_neg(2 * k0) >= d2) ++k0;
  return k0;
}

// Smallest k0 whose closure separation 2 * 2^-k0 holds for all opposite faces.
unsigned k0_separating(const Witness& w) {
  for (unsigned k0 = 0; k0 < 40; ++k0) {
    Rational gap = 2 * pow2_neg(k0);
    bool ok = true;
    for (const auto& f : w.faces)
      for (const auto& u : f[0])
        for (const auto& v : f[1])
          if (ok && !exact::closed_balls_separated_by(u, v, gap)) ok = false;
    if (ok) return k0;
  }
  throw std::invalid_argument("witness face sets are not separated");
}

Rational rat(const json& spec, const char* key, Rational fallback) {
  if (!spec.contains(key)) return fallback;
  const auto& v = spec.at(key);
  return v.is_string() ? parse_rational(v.get<std::string>()) : Rational(v.get<long>());
}

}  // namespace

Sampler sampler_from_json(const json& spec, ProblemKind kind) {
  if (!spec.is_object() || !spec.contains("shape")) throw std::invalid_argument("sampler needs a \"shape\" entry");
  Sampler s = base_sampler(spec.at("shape"), kind);
  if (spec.contains("perturb")) {
    double amp = param(spec, "perturb", 0);
    auto seed = spec.contains("seed") ? spec.at("seed").get<std::uint64_t>() : 0;
    if (amp > 0) s = perturbed(std::move(s), amp, seed);
  }
  return s;
}

Problem builtin_problem(const json& set_spec) {
  ShapePtr shape = shape_from_json(set_spec);
  auto name = shape->name();
  json spec = shape->spec();
  Problem p;
  p.set = shape_set(shape);
  p.witness.sampler_spec = {{"shape", spec}};
  constexpr double pi = std::numbers::pi;
  constexpr double deg = pi / 180;

  if (name == "circle" || name == "ellipse") {
    p.kind = ProblemKind::sphere;
    p.space = euclidean_space(2);
    std::vector<double> cd = {0, 0};
    Rational a, b;
    if (name == "circle") {
      a = b = rat(spec, "radius", 1);
    } else {
      a = rat(spec, "a", 2);
      b = rat(spec, "b", 1);
    }
    for (std::size_t i = 0; i < 2; ++i) cd[i] = parse_rational(spec.at("center")[i].get<std::string>()).get_d();
    double ad = a.get_d(), bd = b.get_d();
    auto curve = [cd, ad, bd](double th) { return std::vector<double>{cd[0] + ad * std::cos(th), cd[1] + bd * std::sin(th)}; };
    Rational small = std::min(a, b);
    Rational rho = Rational(3, 8) * small;
    std::size_t count = name == "circle" ? 12 : 24;
    p.witness.n = 2;
    p.witness.faces.resize(2);
    // Face x_i = rho (rho in {0,1}) maps to the arc around -e_i or +e_i.
    double around[2][2] = {{pi, 0}, {1.5 * pi, 0.5 * pi}};
    for (std::size_t i = 0; i < 2; ++i)
      for (int r = 0; r < 2; ++r)
        p.witness.faces[i][r] = arc_balls(curve, around[i][r] - 60 * deg, around[i][r] + 60 * deg, count, rho);
    // Opposite face images are at distance sqrt(2) min(a, b).
    p.witness.k0 = k0_below(2 * small * small);
  } else if (name == "sphere2") {
    p.kind = ProblemKind::sphere;
    p.space = euclidean_space(3);
    Rational radius = rat(spec, "radius", 1);
    std::vector<double> cd(3);
    for (std::size_t i = 0; i < 3; ++i) cd[i] = parse_rational(spec.at("center")[i].get<std::string>()).get_d();
    double rd = radius.get_d();
    Rational rho = Rational(3, 8) * radius;
    p.witness.n = 3;
    p.witness.faces.resize(3);
    constexpr int g = 8;
    for (std::size_t i = 0; i < 3; ++i) {
      for (int r = 0; r < 2; ++r) {
        // Grid on the face x_i = r of the cube extended by 1/10, projected radially.
        for (int u = 0; u <= g; ++u) {
          for (int v = 0; v <= g; ++v) {
            std::vector<double> x(3);
            double su = -0.1 + 1.2 * u / g, sv = -0.1 + 1.2 * v / g;
            std::size_t j1 = (i + 1) % 3, j2 = (i + 2) % 3;
            x[i] = r;
            x[j1] = su;
            x[j2] = sv;
            auto dir = unit_direction(x);
            for (std::size_t q = 0; q < 3; ++q) dir[q] = cd[q] + rd * dir[q];
            p.witness.faces[i][r].emplace_back(dyadic_point(dir, kWitnessBits), rho);
          }
        }
      }
    }
    // Opposite faces project to caps at chordal distance 2R/sqrt(3).
    p.witness.k0 = k0_below(Rational(4, 3) * radius * radius);
  } else if (name == "disk") {
    p.kind = ProblemKind::cell;
    p.space = euclidean_space(2);
    Rational radius = rat(spec, "radius", 1);
    std::vector<double> cd(2);
    for (std::size_t i = 0; i < 2; ++i) cd[i] = parse_rational(spec.at("center")[i].get<std::string>()).get_d();
    Point c = {parse_rational(spec.at("center")[0].get<std::string>()),
               parse_rational(spec.at("center")[1].get<std::string>())};
    p.boundary = shape_set(sphere_shape(c, radius));
    double rd = radius.get_d();
    auto curve = [cd, rd](double th) { return std::vector<double>{cd[0] + rd * std::cos(th), cd[1] + rd * std::sin(th)}; };
    Rational rho = Rational(3, 32) * radius;
    p.witness.n = 2;
    p.witness.faces.resize(2);
    double around[2][2] = {{pi, 0}, {1.5 * pi, 0.5 * pi}};
    for (std::size_t i = 0; i < 2; ++i)
      for (int r = 0; r < 2; ++r)
        p.witness.faces[i][r] = arc_balls(curve, around[i][r] - 52 * deg, around[i][r] + 52 * deg, 48, rho);
    p.witness.k0 = k0_separating(p.witness);
  } else if (name == "square_cell") {
    if (shape->dim() != 2) throw std::invalid_argument("square_cell witness needs a planar box");
    p.kind = ProblemKind::cell;
    p.space = euclidean_space(2);
    Point lo, hi;
    for (std::size_t i = 0; i < 2; ++i) {
      lo.push_back(parse_rational(spec.at("lo")[i].get<std::string>()));
      hi.push_back(parse_rational(spec.at("hi")[i].get<std::string>()));
    }
    p.boundary = shape_set(box_boundary_shape(lo, hi));
    Rational side = std::min(hi[0] - lo[0], hi[1] - lo[1]);
    Rational rho = Rational(3, 16) * side;
    p.witness.n = 2;
    p.witness.faces.resize(2);
    constexpr std::size_t count = 14;
    for (std::size_t i = 0; i < 2; ++i) {
      std::size_t other = 1 - i;
      for (int r = 0; r < 2; ++r) {
        // Along the edge x_i = lo_i or hi_i, extended by 15% beyond both ends.
        for (std::size_t q = 0; q < count; ++q) {
          Rational t = Rational(-15, 100) + Rational(130, 100) * Rational(static_cast<long>(q), static_cast<long>(count - 1));
          Point center(2);
          center[i] = r == 0 ? lo[i] : hi[i];
          center[other] = lo[other] + t * (hi[other] - lo[other]);
          p.witness.faces[i][r].emplace_back(std::move(center), rho);
        }
      }
    }
    p.witness.k0 = k0_separating(p.witness);
  } else {
    throw std::invalid_argument("no builtin witness for shape '" + name + "'");
  }
  p.witness.sampler = sampler_from_json(p.witness.sampler_spec, p.kind);
  return p;
}

Verdict validate_witness(const Problem& problem, unsigned fuel) {
  const auto& w = problem.witness;
  if (w.faces.size() != w.n) return Verdict::refute(0, "witness needs one pair of face sets per axis");
  std::size_t stage = 0;
  for (std::size_t i = 0; i < w.n; ++i) {
    const auto& f = w.faces[i];
    if (f[0].empty() || f[1].empty()) return Verdict::refute(0, "empty face set on axis " + std::to_string(i + 1));
    Verdict v;
    if (problem.kind == ProblemKind::sphere) {
      v = closed_unions_disjoint(*problem.space, f[0], f[1], fuel);
    } else {
      Rational gap = 2 * pow2_neg(w.k0);
      if (problem.space->has_exact_comparator()) {
        v = Verdict::yes(1);
        for (const auto& u : f[0])
          for (const auto& b : f[1])
            if (v.is_yes() && !exact::closed_balls_separated_by(u, b, gap))
              v = Verdict::refute(1, "closures of opposite face sets are within 2 * 2^-k0");
      } else {
        v = Verdict::not_yet(fuel);
        for (unsigned t = 1; t <= fuel && !v.is_yes(); ++t) {
          bool all = true;
          for (const auto& u : f[0])
            for (const auto& b : f[1])
              if (all && !(problem.space->dist_approx(u.center(), b.center(), t) - pow2_neg(t) >
                           u.radius() + b.radius() + gap))
                all = false;
          if (all) v = Verdict::yes(t);
        }
      }
    }
    if (!v.is_yes()) {
      v.note = "axis " + std::to_string(i + 1) + ": " + v.note;
      return v;
    }
    stage = std::max(stage, v.stage);
  }
  return Verdict::yes(stage);
}

K0Check spot_check_k0(const Problem& problem, std::size_t samples_per_axis) {
  const auto& w = problem.witness;
  std::size_t n = w.n;
  std::size_t g = std::max<std::size_t>(samples_per_axis, 2);
  double best = INFINITY;
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<std::vector<double>> side[2];
    for (int r = 0; r < 2; ++r) {
      std::vector<std::size_t> idx(n - 1, 0);
      while (true) {
        std::vector<double> x(n);
        x[i] = r;
        for (std::size_t q = 0, a = 0; a < n; ++a) {
          if (a == i) continue;
          x[a] = static_cast<double>(idx[q++]) / static_cast<double>(g - 1);
        }
        side[r].push_back(w.sampler(x));
        std::size_t q = n - 1;
        while (q-- > 0) {
          if (++idx[q] < g) break;
          idx[q] = 0;
        }
        if (q == static_cast<std::size_t>(-1)) break;
      }
    }
    for (const auto& a : side[0])
      for (const auto& b : side[1]) {
        double s = 0;
        for (std::size_t q = 0; q < a.size(); ++q) s += (a[q] - b[q]) * (a[q] - b[q]);
        best = std::min(best, std::sqrt(s));
      }
  }
  K0Check out;
  out.min_distance = best;
  out.ok = 2 * std::ldexp(1.0, -static_cast<int>(w.k0)) < best;
  return out;
}

}  // namespace cochain
