#include "cochain/chains.hpp"

#include "cochain/codec.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

namespace cochain {

Chain::Chain(std::size_t n, std::size_t m) : n_(n), m_(m) {
  if (n == 0) throw std::invalid_argument("chain dimension must be at least 1");
  if (m >= (std::size_t{1} << 40)) throw std::length_error("chain too large");
  std::size_t count = 1;
  for (std::size_t d = 0; d < n; ++d) {
    if (count > (std::size_t{1} << 40) / (m + 1)) throw std::length_error("chain too large");
    count *= m + 1;
  }
  cells_.resize(count);
}

Chain::Chain(std::size_t n, std::size_t m, std::vector<BallUnion> cells) : Chain(n, m) {
  if (cells.size() != cells_.size()) throw std::invalid_argument("chain cell count does not match (m+1)^n");
  for (const auto& c : cells)
    if (c.empty()) throw std::invalid_argument("chain cells must be nonempty");
  cells_ = std::move(cells);
}

std::size_t Chain::flatten(const MultiIndex& a) const {
  if (a.size() != n_) throw std::invalid_argument("multi-index has wrong dimension");
  std::size_t flat = 0;
  for (auto x : a) {
    if (x > m_) throw std::out_of_range("multi-index coordinate exceeds m");
    flat = flat * (m_ + 1) + x;
  }
  return flat;
}

MultiIndex Chain::unflatten(std::size_t flat) const {
  MultiIndex a(n_);
  for (std::size_t d = n_; d-- > 0;) {
    a[d] = flat % (m_ + 1);
    flat /= m_ + 1;
  }
  return a;
}

bool Chain::is_boundary(std::size_t flat) const {
  for (std::size_t d = 0; d < n_; ++d) {
    std::size_t x = flat % (m_ + 1);
    if (x == 0 || x == m_) return true;
    flat /= m_ + 1;
  }
  return false;
}

std::size_t boundary_count(std::size_t n, std::size_t m) {
  std::size_t all = 1, inner = 1;
  for (std::size_t d = 0; d < n; ++d) {
    all *= m + 1;
    inner *= m >= 1 ? m - 1 : 0;
  }
  return m == 0 ? 1 : all - inner;
}

ChainView full_view(const Chain& chain) {
  ChainView v{&chain, {}};
  v.indices.resize(chain.size());
  for (std::size_t i = 0; i < chain.size(); ++i) v.indices[i] = i;
  return v;
}

ChainView restrict_boundary(const Chain& chain) {
  ChainView v{&chain, {}};
  for (std::size_t i = 0; i < chain.size(); ++i)
    if (chain.is_boundary(i)) v.indices.push_back(i);
  return v;
}

ChainView restrict_face(const Chain& chain, FaceSelector face) {
  if (face.axis < 1 || face.axis > chain.n()) throw std::out_of_range("face axis out of range");
  if (face.side != 0 && face.side != 1) throw std::invalid_argument("face side must be 0 or 1");
  std::size_t want = face.side == 0 ? 0 : chain.m();
  ChainView v{&chain, {}};
  for (std::size_t i = 0; i < chain.size(); ++i)
    if (chain.unflatten(i)[face.axis - 1] == want) v.indices.push_back(i);
  return v;
}

std::size_t sup_distance(const MultiIndex& a, const MultiIndex& b) {
  std::size_t best = 0;
  for (std::size_t d = 0; d < a.size(); ++d) best = std::max(best, a[d] > b[d] ? a[d] - b[d] : b[d] - a[d]);
  return best;
}

namespace {

std::string index_text(const MultiIndex& a) {
  std::string s = "(";
  for (std::size_t d = 0; d < a.size(); ++d) s += (d ? "," : "") + std::to_string(a[d]);
  return s + ")";
}

// Approximation of fdiam(cell) within 2^-k, computed directly.
Rational fdiam_approx(const Space& space, const BallUnion& cell, unsigned k) {
  Rational rmax = 0, best = 0;
  for (const auto& b : cell) rmax = std::max(rmax, b.radius());
  for (std::size_t v = 0; v < cell.size(); ++v)
    for (std::size_t w = v + 1; w < cell.size(); ++w)
      best = std::max(best, space.dist_approx(cell[v].center(), cell[w].center(), k + 1));
  return best + 2 * rmax;
}

double fdiam_estimate(const BallUnion& cell) {
  double rmax = 0, best = 0;
  for (const auto& b : cell) rmax = std::max(rmax, b.radius_d());
  for (std::size_t v = 0; v < cell.size(); ++v)
    for (std::size_t w = v + 1; w < cell.size(); ++w) {
      double s = 0;
      for (std::size_t d = 0; d < cell[v].dim(); ++d) {
        double x = cell[v].center_d()[d] - cell[w].center_d()[d];
        s += x * x;
      }
      best = std::max(best, std::sqrt(s));
    }
  return best + 2 * rmax;
}

}  // namespace

ComputableReal fmesh(const Space& space, const ChainView& view) {
  auto self = space.shared_from_this();
  std::vector<BallUnion> cells;
  for (std::size_t i = 0; i < view.size(); ++i) cells.push_back(view.cell(i));
  return ComputableReal{[self, cells = std::move(cells)](unsigned k) -> Rational {
    Rational best = 0;
    for (const auto& c : cells) best = std::max(best, fdiam_approx(*self, c, k));
    return best;
  }};
}

Verdict fmesh_below(const Space& space, const ChainView& view, const Rational& eps, unsigned fuel) {
  if (fuel == 0) return Verdict::not_yet(0, "no fuel");
  std::size_t stage = 1;
  bool euclidean_like = space.dimension() > 0;
  double eps_d = eps.get_d();
  for (std::size_t i = 0; i < view.size(); ++i) {
    const BallUnion& cell = view.cell(i);
    // Start at the precision the floating estimate suggests; fall back to
    // the full fuel. Both choices depend only on (cell, eps, fuel).
    unsigned t0 = fuel;
    if (euclidean_like) {
      double margin = eps_d - fdiam_estimate(cell);
      if (margin > 0) t0 = std::clamp<unsigned>(static_cast<unsigned>(std::ceil(-std::log2(margin))) + 2, 1, fuel);
    }
    bool ok = false;
    for (unsigned t : {t0, fuel}) {
      Rational f = fdiam_approx(space, cell, t);
      if (f + pow2_neg(t) < eps) {
        stage = std::max<std::size_t>(stage, t);
        ok = true;
        break;
      }
      if (f - pow2_neg(t) >= eps)
        return Verdict::refute(t, "cell " + index_text(view.chain->unflatten(view.indices[i])) +
                                      " has formal diameter at least the mesh bound");
      if (t == fuel) break;
    }
    if (!ok) return Verdict::not_yet(fuel, "mesh bound not confirmed at this precision");
  }
  return Verdict::yes(stage);
}

Verdict chain_condition(const Space& space, const ChainView& view, unsigned fuel, Route route, kernels::Exec exec) {
  if (!space.compact_closed_balls())
    throw std::logic_error(space.kind() + " space does not declare compact closed balls");
  if (fuel == 0) return Verdict::not_yet(0, "no fuel");
  const Chain& chain = *view.chain;
  std::vector<MultiIndex> multi(view.size());
  for (std::size_t i = 0; i < view.size(); ++i) multi[i] = chain.unflatten(view.indices[i]);

  if (route == Route::exact_when_available && space.has_exact_comparator()) {
    std::vector<const Ball*> balls;
    std::vector<std::uint32_t> owner;
    for (std::size_t i = 0; i < view.size(); ++i)
      for (const auto& b : view.cell(i)) {
        balls.push_back(&b);
        owner.push_back(static_cast<std::uint32_t>(i));
      }
    auto conflict = kernels::find_overlap_conflict(
        balls,
        [&](std::uint32_t u, std::uint32_t v) {
          return sup_distance(multi[owner[u]], multi[owner[v]]) > 1 && !exact::closed_balls_disjoint(*balls[u], *balls[v]);
        },
        exec);
    if (conflict)
      return Verdict::refute(1, "closed cells " + index_text(multi[owner[conflict->first]]) + " and " +
                                    index_text(multi[owner[conflict->second]]) + " meet");
    return Verdict::yes(1);
  }

  std::size_t stage = 1;
  bool pending = false;
  for (std::size_t i = 0; i < view.size(); ++i)
    for (std::size_t j = i + 1; j < view.size(); ++j) {
      if (sup_distance(multi[i], multi[j]) <= 1) continue;
      Verdict v = closed_unions_disjoint(space, view.cell(i), view.cell(j), fuel, Route::approximate);
      if (v.refuted)
        return Verdict::refute(v.stage, "closed cells " + index_text(multi[i]) + " and " + index_text(multi[j]) + " meet");
      if (!v.is_yes())
        pending = true;
      else
        stage = std::max(stage, v.stage);
    }
  if (pending) return Verdict::not_yet(fuel, "some non-adjacent cells not yet separated");
  return Verdict::yes(stage);
}

Verdict is_nchain(const Space& space, const Chain& chain, unsigned fuel, Route route) {
  return chain_condition(space, full_view(chain), fuel, route);
}

Verdict is_spherical_chain(const Space& space, const Chain& chain, unsigned fuel, Route route) {
  return chain_condition(space, restrict_boundary(chain), fuel, route);
}

std::vector<std::pair<std::size_t, std::size_t>> adjacent_pairs(const ChainView& view) {
  const Chain& chain = *view.chain;
  std::vector<char> in_view(chain.size(), 0);
  for (auto i : view.indices) in_view[i] = 1;
  std::size_t n = chain.n();
  std::size_t offsets = 1;
  for (std::size_t d = 0; d < n; ++d) offsets *= 3;
  std::vector<std::pair<std::size_t, std::size_t>> out;
  for (auto a : view.indices) {
    MultiIndex ma = chain.unflatten(a);
    for (std::size_t o = 0; o < offsets; ++o) {
      std::size_t code = o;
      MultiIndex mb = ma;
      bool valid = true;
      for (std::size_t d = n; d-- > 0;) {
        int step = static_cast<int>(code % 3) - 1;
        code /= 3;
        if ((step < 0 && mb[d] == 0) || (step > 0 && mb[d] == chain.m())) {
          valid = false;
          break;
        }
        mb[d] = static_cast<std::size_t>(static_cast<long>(mb[d]) + step);
      }
      if (!valid) continue;
      std::size_t b = chain.flatten(mb);
      if (b > a && in_view[b]) out.emplace_back(a, b);
    }
  }
  return out;
}

namespace {

Point segment_point(const Space& space, const Ball& u, const Ball& v, const Rational& s) {
  auto p = space.interpolate(u.center(), v.center(), s);
  if (!p) throw std::logic_error("space has no interpolation");
  return *p;
}

Rational floor_dyadic(const Rational& x, unsigned bits) {
  Natural scaled = x.get_num();
  mpz_mul_2exp(scaled.get_mpz_t(), scaled.get_mpz_t(), bits);
  Natural q;
  mpz_fdiv_q(q.get_mpz_t(), scaled.get_mpz_t(), x.get_den_mpz_t());
  return dyadic(q, bits);
}

bool exact_witness_holds(const Ball& u, const Ball& v, const Point& p, const Point& q, const Rational& eps) {
  return exact::in_open_ball(p, u) && exact::in_open_ball(q, v) && exact::compare_distance(p, q, eps) < 0;
}

// Parameters (s, t) on the segment from c_u to c_v such that the points lie in
// the open balls and are closer than eps. d is the (approximate) center distance.
template <class Num>
std::pair<Num, Num> segment_parameters(const Num& d, const Num& r1, const Num& r2, const Num& eps) {
  const Num zero(0), one(1), half = Num(1) / Num(2);
  if (d <= zero) return {zero, zero};
  if (d < r1 + r2) {
    Num lo = Num(one - r2 / d);
    Num hi = Num(r1 / d);
    lo = std::max(zero, lo);
    hi = std::min(one, hi);
    return {Num((lo + hi) / 2), Num((lo + hi) / 2)};
  }
  Num gap = Num(d - r1 - r2);
  Num eta = Num((eps - gap) / (Num(2) * (r1 + r2)));
  eta = std::min(half, eta);
  return {Num(r1 / d * (one - eta)), Num(one - r2 / d * (one - eta))};
}

std::optional<ProperWitness> euclidean_witness(const Space& space, const Ball& u, const Ball& v, const Rational& eps) {
  auto attempt = [&](const Rational& s, const Rational& t) -> std::optional<ProperWitness> {
    ProperWitness w;
    w.on_segment = true;
    w.s = s;
    w.t = t;
    w.p = segment_point(space, u, v, s);
    w.q = segment_point(space, u, v, t);
    if (exact_witness_holds(u, v, w.p, w.q, eps)) return w;
    return std::nullopt;
  };
  double dd = 0;
  for (std::size_t i = 0; i < u.dim(); ++i) {
    double x = u.center_d()[i] - v.center_d()[i];
    dd += x * x;
  }
  auto [sd, td] = segment_parameters<double>(std::sqrt(dd), u.radius_d(), v.radius_d(), eps.get_d());
  if (std::isfinite(sd) && std::isfinite(td)) {
    for (unsigned bits : {32U, 52U}) {
      if (auto w = attempt(round_to_dyadic(sd, bits), round_to_dyadic(td, bits))) return w;
    }
  }
  Rational d2 = exact::distance_squared(u.center(), v.center());
  for (unsigned bits : {64U, 128U, 256U}) {
    Rational d = sqrt_approx(d2, bits);
    auto [s, t] = segment_parameters<Rational>(d, u.radius(), v.radius(), eps);
    if (auto w = attempt(floor_dyadic(s, bits), floor_dyadic(t, bits))) return w;
  }
  return std::nullopt;
}

struct PairOutcome {
  bool found = false;
  bool refuted = false;
  std::size_t stage = 0;
  ProperWitness witness;
};

bool point_in_cell(const Space& space, const Point& p, const BallUnion& cell, unsigned fuel, std::size_t& member) {
  Verdict v = point_in_union(space, p, cell, fuel, Route::approximate);
  if (!v.is_yes()) return false;
  member = v.witness.front().get_ui();
  return true;
}

// Approximate-route search for a witness pair at stage t.
bool generic_pair_stage(const Space& space, const BallUnion& a, const BallUnion& b, const Rational& eps, unsigned t,
                        ProperWitness& out) {
  auto try_points = [&](const Point& p, const Point& q) {
    std::size_t mu = 0, mv = 0;
    if (!distance_less(space, p, q, eps, t, Route::approximate).is_yes()) return false;
    if (!point_in_cell(space, p, a, t, mu) || !point_in_cell(space, q, b, t, mv)) return false;
    out.ball_u = mu;
    out.ball_v = mv;
    out.on_segment = false;
    out.p = p;
    out.q = q;
    return true;
  };
  // Phase 1: member centers.
  for (const auto& u : a)
    for (const auto& v : b)
      if (try_points(u.center(), v.center())) return true;
  // Phase 2: dyadic points on center segments.
  unsigned res = std::min(t, 10U);
  Natural steps = Natural(1) << res;
  unsigned long count = steps.get_ui();
  for (std::size_t iu = 0; iu < a.size(); ++iu)
    for (std::size_t iv = 0; iv < b.size(); ++iv) {
      const Ball& u = a[iu];
      const Ball& v = b[iv];
      std::vector<std::optional<Point>> pts(count + 1);
      for (unsigned long i = 0; i <= count; ++i)
        pts[i] = space.interpolate(u.center(), v.center(), Rational(Natural(i), steps));
      if (!pts[0]) break;
      for (unsigned long i = 0; i <= count; ++i)
        for (unsigned long j = i; j <= std::min(count, i + 2); ++j)
          if (try_points(*pts[i], *pts[j])) return true;
    }
  // Phase 3: dovetail over (p, q, stage) codes.
  for (unsigned long z = 0; z < t; ++z) {
    auto [pi, rest] = codec::unpair(Natural(z));
    auto [qi, st] = codec::unpair(rest);
    (void)st;
    if (try_points(space.point_at(pi), space.point_at(qi))) return true;
  }
  return false;
}

}  // namespace

ProperResult is_proper(const Space& space, const ChainView& view, const Rational& eps, unsigned fuel, Route route,
                       kernels::Exec exec) {
  ProperResult result;
  if (fuel == 0) {
    result.verdict = Verdict::not_yet(0, "no fuel");
    return result;
  }
  auto pairs = adjacent_pairs(view);
  const Chain& chain = *view.chain;
  std::vector<PairOutcome> outcomes(pairs.size());
  bool fast = route == Route::exact_when_available && space.has_exact_comparator() && space.dimension() > 0;

  auto check = [&](std::size_t idx) {
    const auto& [a, b] = pairs[idx];
    const BallUnion& ca = chain.cell(a);
    const BallUnion& cb = chain.cell(b);
    PairOutcome& out = outcomes[idx];
    if (fast) {
      bool any_close = false;
      for (std::size_t u = 0; u < ca.size() && !out.found; ++u)
        for (std::size_t v = 0; v < cb.size(); ++v) {
          if (!exact::open_balls_within(ca[u], cb[v], eps)) continue;
          any_close = true;
          if (auto w = euclidean_witness(space, ca[u], cb[v], eps)) {
            out.witness = std::move(*w);
            out.witness.ball_u = u;
            out.witness.ball_v = v;
            out.found = true;
            out.stage = 1;
            break;
          }
        }
      if (!any_close) {
        out.refuted = true;
        return false;
      }
      if (out.found) {
        out.witness.cell_a = a;
        out.witness.cell_b = b;
        return true;
      }
    }
    for (unsigned t = 1; t <= fuel; ++t) {
      if (generic_pair_stage(space, ca, cb, eps, t, out.witness)) {
        out.found = true;
        out.stage = t;
        out.witness.cell_a = a;
        out.witness.cell_b = b;
        return true;
      }
    }
    return false;
  };

  auto bad = kernels::first_failure(pairs.size(), check, exec);
  if (bad) {
    const auto& [a, b] = pairs[*bad];
    std::string cells = index_text(chain.unflatten(a)) + " and " + index_text(chain.unflatten(b));
    if (outcomes[*bad].refuted)
      result.verdict = Verdict::refute(1, "open cells " + cells + " are at least the properness bound apart");
    else
      result.verdict = Verdict::not_yet(fuel, "no witness yet for cells " + cells);
    return result;
  }
  std::size_t stage = 1;
  result.witnesses.reserve(pairs.size());
  for (auto& o : outcomes) {
    stage = std::max(stage, o.stage);
    result.witnesses.push_back(std::move(o.witness));
  }
  result.verdict = Verdict::yes(stage);
  return result;
}

bool check_witness(const Space& space, const Chain& chain, const ProperWitness& w, const Rational& eps, unsigned fuel) {
  if (w.cell_a >= chain.size() || w.cell_b >= chain.size()) return false;
  const BallUnion& ca = chain.cell(w.cell_a);
  const BallUnion& cb = chain.cell(w.cell_b);
  if (w.ball_u >= ca.size() || w.ball_v >= cb.size()) return false;
  Point p = w.p, q = w.q;
  if (w.on_segment) {
    p = segment_point(space, ca[w.ball_u], cb[w.ball_v], w.s);
    q = segment_point(space, ca[w.ball_u], cb[w.ball_v], w.t);
  }
  Route route = Route::exact_when_available;
  return point_in_ball(space, p, ca[w.ball_u], fuel, route).is_yes() &&
         point_in_ball(space, q, cb[w.ball_v], fuel, route).is_yes() &&
         distance_less(space, p, q, eps, fuel, route).is_yes();
}

std::vector<Natural> zeta_codes(const Space& space, const ChainView& view) {
  std::vector<Natural> codes;
  for (std::size_t i = 0; i < view.size(); ++i)
    for (const auto& b : view.cell(i)) codes.push_back(space.ball_index(b));
  std::sort(codes.begin(), codes.end());
  codes.erase(std::unique(codes.begin(), codes.end()), codes.end());
  return codes;
}

BallUnion zeta_balls(const Space& space, const ChainView& view) {
  std::map<Natural, const Ball*> by_code;
  for (std::size_t i = 0; i < view.size(); ++i)
    for (const auto& b : view.cell(i)) by_code.emplace(space.ball_index(b), &b);
  BallUnion out;
  out.reserve(by_code.size());
  for (const auto& [code, b] : by_code) out.push_back(*b);
  return out;
}

Natural zeta_code(const Space& space, const ChainView& view) { return codec::seq_encode(zeta_codes(space, view)); }

Natural chain_code(const Space& space, const Chain& chain) {
  codec::GridFamily family;
  family.n = chain.n();
  family.m = chain.m();
  for (const auto& cell : chain.cells()) family.entries.push_back(space.union_index(cell));
  return codec::grid_encode(family);
}

Chain chain_from_code(const Space& space, const Natural& code, std::size_t n) {
  auto family = codec::grid_decode(code, n);
  std::vector<BallUnion> cells;
  cells.reserve(family.entries.size());
  for (const auto& e : family.entries) cells.push_back(space.union_at(e));
  return Chain(n, family.m, std::move(cells));
}

}  // namespace cochain
