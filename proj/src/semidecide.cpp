#include "cochain/semidecide.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>

namespace cochain {

unsigned fuel_bound_for_margin(const Rational& margin) {
  if (sgn(margin) <= 0) throw std::invalid_argument("fuel_bound_for_margin: margin must be positive");
  unsigned e = 0;
  while (pow2_neg(e) > margin) ++e;
  return 1 + e;
}

unsigned ecp_fuel_bound(std::span<const Ball> a, const Rational& margin) {
  if (sgn(margin) <= 0) throw std::invalid_argument("ecp_fuel_bound: margin must be positive");
  if (a.empty()) return 1;
  Box root = dyadic_root_box(a);
  std::size_t n = root.dim();
  // side * 2^-d * sqrt(n) < margin, compared on squares.
  Rational side(root.hi[0]);
  side -= Rational(root.lo[0]);
  Rational diam2 = side * side * static_cast<unsigned long>(n);
  unsigned d = 0;
  while (diam2 >= margin * margin) {
    diam2 /= 4;
    ++d;
  }
  return 1 + d;
}

namespace {

// Stage t of the approximate test d(p, q) < r: F_t + 2^-t < r. Also reports
// a proof of d(p, q) > r when F_t - 2^-t >= r.
enum class Stage { yes, unknown, refuted };

Stage strict_less_stage(const Space& space, const Point& p, const Point& q, const Rational& r, unsigned t) {
  Rational f = space.dist_approx(p, q, t);
  Rational slack = pow2_neg(t);
  if (f + slack < r) return Stage::yes;
  if (f - slack >= r) return Stage::refuted;
  return Stage::unknown;
}

}  // namespace

Verdict distance_less(const Space& space, const Point& p, const Point& q, const Rational& eps, unsigned fuel,
                      Route route) {
  if (route == Route::exact_when_available && space.has_exact_comparator()) {
    if (fuel == 0) return Verdict::not_yet(0, "no fuel");
    if (space.compare_distance(p, q, eps) < 0) return Verdict::yes(1);
    return Verdict::refute(1, "distance is not below the bound");
  }
  for (unsigned t = 1; t <= fuel; ++t) {
    switch (strict_less_stage(space, p, q, eps, t)) {
      case Stage::yes:
        return Verdict::yes(t);
      case Stage::refuted:
        return Verdict::refute(t, "distance exceeds the bound");
      case Stage::unknown:
        break;
    }
  }
  return Verdict::not_yet(fuel);
}

Verdict point_in_ball(const Space& space, const Point& p, const Ball& b, unsigned fuel, Route route) {
  return distance_less(space, p, b.center(), b.radius(), fuel, route);
}

Verdict point_in_ball(const Space& space, const Natural& k, const Natural& i, unsigned fuel, Route route) {
  return point_in_ball(space, space.point_at(k), space.ball_at(i), fuel, route);
}

Verdict point_in_union(const Space& space, const Point& p, std::span<const Ball> j, unsigned fuel, Route route) {
  if (j.empty()) throw std::invalid_argument("point_in_union: empty union");
  std::vector<bool> refuted(j.size(), false);
  std::size_t alive = j.size();
  for (unsigned t = 1; t <= fuel && alive > 0; ++t) {
    for (std::size_t m = 0; m < j.size(); ++m) {
      if (refuted[m]) continue;
      Verdict v = point_in_ball(space, p, j[m], route == Route::approximate ? t : 1, route);
      if (v.is_yes()) return Verdict::yes(t, {Natural(static_cast<unsigned long>(m))});
      if (v.refuted) {
        refuted[m] = true;
        --alive;
      }
    }
  }
  if (alive == 0) return Verdict::refute(fuel, "point lies outside every member ball");
  return Verdict::not_yet(fuel);
}

Verdict point_in_union(const Space& space, const Natural& k, const Natural& j, unsigned fuel, Route route) {
  auto members = space.union_at(j);
  return point_in_union(space, space.point_at(k), members, fuel, route);
}

Verdict closed_union_in_union(const Space& space, std::span<const Ball> a, std::span<const Ball> j, unsigned fuel) {
  if (!space.has_ecp()) throw std::logic_error(space.kind() + " space does not have the effective covering property");
  return space.ecp_inclusion(a, j, fuel);
}

Verdict closed_union_in_union(const Space& space, const Natural& a, const Natural& j, unsigned fuel) {
  auto aa = space.union_at(a);
  auto jj = space.union_at(j);
  return closed_union_in_union(space, aa, jj, fuel);
}

namespace {

constexpr std::size_t kMaxCoverPairs = std::size_t{1} << 20;

Verdict disjoint_exact(std::span<const Ball> a, std::span<const Ball> b) {
  for (std::size_t u = 0; u < a.size(); ++u)
    for (std::size_t v = 0; v < b.size(); ++v)
      if (!exact::closed_balls_disjoint(a[u], b[v]))
        return Verdict::refute(1, "closed member balls " + std::to_string(u) + " and " + std::to_string(v) + " meet");
  return Verdict::yes(1);
}

BallUnion cover_of(const Space& space, std::span<const Ball> u, unsigned depth) {
  if (depth == 0) return BallUnion(u.begin(), u.end());
  BallUnion out;
  for (const auto& b : u) {
    auto part = space.refine_cover(b, depth);
    out.insert(out.end(), part.begin(), part.end());
  }
  return out;
}

}  // namespace

Verdict closed_unions_disjoint(const Space& space, std::span<const Ball> a, std::span<const Ball> b, unsigned fuel,
                               Route route) {
  if (!space.compact_closed_balls())
    throw std::logic_error(space.kind() + " space does not declare compact closed balls");
  if (a.empty() || b.empty()) throw std::invalid_argument("closed_unions_disjoint: empty union");
  if (fuel == 0) return Verdict::not_yet(0, "no fuel");
  if (route == Route::exact_when_available && space.has_exact_comparator()) return disjoint_exact(a, b);

  std::map<unsigned, std::pair<BallUnion, BallUnion>> covers;
  for (unsigned t = 1; t <= fuel; ++t) {
    // A center of one union strictly inside a ball of the other is a common point.
    for (const auto& u : a)
      for (const auto& v : b) {
        if (strict_less_stage(space, u.center(), v.center(), v.radius(), t) == Stage::yes ||
            strict_less_stage(space, v.center(), u.center(), u.radius(), t) == Stage::yes)
          return Verdict::refute(t, "a member center lies inside a member of the other union");
      }
    unsigned depth = t - 1;
    auto it = covers.find(depth);
    if (it == covers.end()) {
      auto ca = cover_of(space, a, depth);
      auto cb = cover_of(space, b, depth);
      if (ca.size() * cb.size() > kMaxCoverPairs) return Verdict::not_yet(t, "refined covers too large");
      it = covers.emplace(depth, std::make_pair(std::move(ca), std::move(cb))).first;
    }
    const auto& [ca, cb] = it->second;
    Rational slack = pow2_neg(t);
    bool all = true;
    for (const auto& u : ca) {
      for (const auto& v : cb) {
        Rational f = space.dist_approx(u.center(), v.center(), t);
        if (!(f - slack > u.radius() + v.radius())) {
          all = false;
          break;
        }
      }
      if (!all) break;
    }
    if (all) return Verdict::yes(t);
  }
  return Verdict::not_yet(fuel);
}

Verdict closed_unions_disjoint(const Space& space, const Natural& a, const Natural& b, unsigned fuel, Route route) {
  auto aa = space.union_at(a);
  auto bb = space.union_at(b);
  return closed_unions_disjoint(space, aa, bb, fuel, route);
}

ComputableReal fdiam(const Space& space, std::span<const Ball> j) {
  if (j.empty()) throw std::invalid_argument("fdiam: empty union");
  auto self = space.shared_from_this();
  BallUnion members(j.begin(), j.end());
  Rational rmax = 0;
  for (const auto& b : members) rmax = std::max(rmax, b.radius());
  return ComputableReal{[self, members = std::move(members), rmax](unsigned k) -> Rational {
    Rational best = 0;
    for (std::size_t v = 0; v < members.size(); ++v)
      for (std::size_t w = v + 1; w < members.size(); ++w)
        best = std::max(best, self->dist_approx(members[v].center(), members[w].center(), k + 1));
    return best + 2 * rmax;
  }};
}

Rational fdiam_upper(const Space& space, std::span<const Ball> j, unsigned k) { return fdiam(space, j).upper(k); }

}  // namespace cochain
