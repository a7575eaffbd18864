#include "cochain/approx.hpp"

#include "cochain/codec.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <limits>
#include <set>
#include <stdexcept>

namespace cochain {

std::string kind_name(ProblemKind kind) { return kind == ProblemKind::sphere ? "sphere" : "cell"; }

std::string provenance_name(Provenance p) { return p == Provenance::seeded ? "seeded" : "enumerated"; }

// ---------------------------------------------------------------------------
// Grid chains

std::vector<GridCell> grid_chain(std::size_t n, std::size_t m) {
  if (n == 0) throw std::invalid_argument("grid_chain: n must be at least 1");
  std::size_t count = 1;
  for (std::size_t i = 0; i < n; ++i) count *= m + 1;
  Rational side(1, static_cast<unsigned long>(m + 1));
  std::vector<GridCell> out(count);
  std::vector<std::size_t> a(n, 0);
  for (std::size_t flat = 0; flat < count; ++flat) {
    std::size_t rest = flat;
    for (std::size_t i = n; i-- > 0;) {
      a[i] = rest % (m + 1);
      rest /= m + 1;
    }
    GridCell& c = out[flat];
    for (std::size_t i = 0; i < n; ++i) {
      c.lo.push_back(side * Rational(static_cast<unsigned long>(a[i])));
      c.hi.push_back(side * Rational(static_cast<unsigned long>(a[i] + 1)));
    }
  }
  return out;
}

std::vector<std::vector<GridCell>> boundary_grid_chain(std::size_t n, std::size_t m) {
  if (n < 2) throw std::invalid_argument("boundary_grid_chain: n must be at least 2");
  auto cells = grid_chain(n, m);
  std::vector<std::vector<GridCell>> out(cells.size());
  for (std::size_t flat = 0; flat < cells.size(); ++flat) {
    const GridCell& c = cells[flat];
    for (std::size_t i = 0; i < n; ++i) {
      for (int side = 0; side < 2; ++side) {
        const Rational& v = side == 0 ? c.lo[i] : c.hi[i];
        if (v != (side == 0 ? 0 : 1)) continue;
        GridCell f = c;
        f.lo[i] = v;
        f.hi[i] = v;
        out[flat].push_back(std::move(f));
      }
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Seeding

std::size_t subdivisions_for(std::size_t m, const Rational& delta) {
  if (sgn(delta) <= 0) throw std::invalid_argument("seeding pitch must be positive");
  Rational per = Rational(1) / (Rational(static_cast<unsigned long>(m + 1)) * delta);
  Natural s = per.get_num() / per.get_den();
  if (s * per.get_den() < per.get_num()) s += 1;
  if (s < 1) s = 1;
  if (s > 64) throw std::invalid_argument("seeding pitch too fine for this grid");
  return s.get_ui();
}

namespace {

// Balls covering the image of one grid piece, split into s sub-boxes per free axis.
void seed_piece(const Sampler& f, const GridCell& piece, std::size_t s, unsigned bits, BallUnion& out) {
  std::size_t n = piece.lo.size();
  std::vector<std::size_t> free_axes;
  for (std::size_t i = 0; i < n; ++i)
    if (piece.lo[i] != piece.hi[i]) free_axes.push_back(i);
  std::vector<double> lo(n), hi(n);
  for (std::size_t i = 0; i < n; ++i) {
    lo[i] = piece.lo[i].get_d();
    hi[i] = piece.hi[i].get_d();
  }
  std::size_t d = free_axes.size();
  std::vector<std::size_t> sub(d, 0);
  constexpr std::size_t kSamples = 5;
  Rational slack = pow2_neg(bits);
  while (true) {
    std::vector<double> blo = lo, bhi = hi;
    for (std::size_t q = 0; q < d; ++q) {
      std::size_t ax = free_axes[q];
      double w = (hi[ax] - lo[ax]) / static_cast<double>(s);
      blo[ax] = lo[ax] + w * static_cast<double>(sub[q]);
      bhi[ax] = sub[q] + 1 == s ? hi[ax] : blo[ax] + w;
    }
    std::vector<double> mid(n);
    for (std::size_t i = 0; i < n; ++i) mid[i] = (blo[i] + bhi[i]) / 2;
    auto center = f(mid);
    double dmax = 0;
    std::vector<std::size_t> g(d, 0);
    while (true) {
      std::vector<double> x = blo;
      for (std::size_t q = 0; q < d; ++q) {
        std::size_t ax = free_axes[q];
        x[ax] = blo[ax] + (bhi[ax] - blo[ax]) * static_cast<double>(g[q]) / (kSamples - 1);
      }
      auto y = f(x);
      double dist = 0;
      for (std::size_t i = 0; i < y.size(); ++i) dist += (y[i] - center[i]) * (y[i] - center[i]);
      dmax = std::max(dmax, std::sqrt(dist));
      std::size_t q = d;
      while (q-- > 0) {
        if (++g[q] < kSamples) break;
        g[q] = 0;
      }
      if (q == static_cast<std::size_t>(-1)) break;
    }
    if (!std::all_of(center.begin(), center.end(), [](double v) { return std::isfinite(v); }) || !std::isfinite(dmax))
      throw std::runtime_error("sampler returned a non-finite point");
    Point c;
    for (double v : center) c.push_back(round_to_dyadic(v, bits));
    Rational r = ceil_to_dyadic(1.1 * dmax, bits) + slack;
    out.emplace_back(std::move(c), std::move(r));
    std::size_t q = d;
    while (q-- > 0) {
      if (++sub[q] < s) break;
      sub[q] = 0;
    }
    if (q == static_cast<std::size_t>(-1)) break;
  }
}

}  // namespace

CandidateChain seed_candidate(const Problem& problem, std::size_t m, const Rational& delta, unsigned bits) {
  if (m == 0) throw std::invalid_argument("seed_candidate: m must be at least 1");
  if (!problem.witness.sampler) throw std::invalid_argument("seed_candidate: witness has no sampler");
  std::size_t n = problem.witness.n;
  std::size_t s = subdivisions_for(m, delta);
  Chain chain(n, m);
  std::size_t total = chain.size();
  std::vector<BallUnion> cells(total);
  if (problem.kind == ProblemKind::sphere) {
    auto pieces = boundary_grid_chain(n, m);
    for (std::size_t flat = 0; flat < total; ++flat)
      for (const auto& p : pieces[flat]) seed_piece(problem.witness.sampler, p, s, bits, cells[flat]);
    // Interior cells are not part of the spherical chain; a single ball of
    // cell 0 keeps them nonempty without raising the mesh.
    Ball filler = cells[0].front();
    for (std::size_t flat = 0; flat < total; ++flat)
      if (cells[flat].empty()) cells[flat].push_back(filler);
  } else {
    auto pieces = grid_chain(n, m);
    for (std::size_t flat = 0; flat < total; ++flat)
      seed_piece(problem.witness.sampler, pieces[flat], s, bits, cells[flat]);
  }
  CandidateChain c;
  c.chain = Chain(n, m, std::move(cells));
  c.provenance = Provenance::seeded;
  c.m = m;
  c.subdivisions = s;
  return c;
}

// ---------------------------------------------------------------------------
// Conditions

std::vector<std::string> condition_names(ProblemKind kind) {
  if (kind == ProblemKind::sphere) return {"tm3", "tm1", "tm5", "tm4", "tm2"};
  return {"2tm3.fmesh", "2tm1.chain", "2tm5", "2tm3.proper", "2tm1.covers", "2tm1.boundary_covers"};
}

std::string condition_group(const std::string& name) { return name.substr(0, name.find('.')); }

Rational condition_epsilon(const Problem& problem, unsigned k) { return pow2_neg(k + problem.witness.k0); }

bool ConditionReport::all_yes(ProblemKind kind) const {
  for (const auto& name : condition_names(kind)) {
    const Verdict* v = find(name);
    if (!v || !v->is_yes()) return false;
  }
  return true;
}

const Verdict* ConditionReport::find(const std::string& name) const {
  for (const auto& c : conditions)
    if (c.name == name) return &c.verdict;
  return nullptr;
}

std::optional<std::string> ConditionReport::blamed() const {
  for (const auto& c : conditions)
    if (!c.verdict.is_yes()) return condition_group(c.name);
  return std::nullopt;
}

bool ConditionReport::refuted() const {
  return std::any_of(conditions.begin(), conditions.end(), [](const auto& c) { return c.verdict.refuted; });
}

namespace {

BallUnion view_balls(const ChainView& view) {
  BallUnion out;
  for (std::size_t i = 0; i < view.size(); ++i) out.insert(out.end(), view.cell(i).begin(), view.cell(i).end());
  return out;
}

Verdict faces_inside_witness(const Problem& problem, const Chain& chain, unsigned fuel) {
  const auto& w = problem.witness;
  std::size_t stage = 0;
  for (std::size_t i = 1; i <= w.n; ++i) {
    for (int rho = 0; rho < 2; ++rho) {
      auto balls = view_balls(restrict_face(chain, {i, rho}));
      Verdict v = closed_union_in_union(*problem.space, balls, w.faces[i - 1][rho], fuel);
      std::string where = "face (" + std::to_string(i) + "," + std::to_string(rho) + ")";
      if (v.refuted) return Verdict::refute(v.stage, where + " leaves its witness set");
      if (!v.is_yes()) return Verdict::not_yet(fuel, where + " not yet inside its witness set");
      stage = std::max(stage, v.stage);
    }
  }
  return Verdict::yes(stage);
}

ConditionReport run_checks(const Problem& problem, const Chain& chain, unsigned k, unsigned fuel,
                           const CheckOptions& options) {
  if (chain.n() != problem.witness.n) throw std::invalid_argument("chain dimension does not match the witness");
  const Space& space = *problem.space;
  Rational eps = condition_epsilon(problem, k);
  ConditionReport report;
  bool sphere = problem.kind == ProblemKind::sphere;
  for (const auto& name : condition_names(problem.kind)) {
    if (options.previous) {
      const Verdict* prev = options.previous->find(name);
      if (prev && prev->is_yes()) {
        report.conditions.push_back({name, *prev});
        if (name == "tm4" || name == "2tm3.proper") report.proper_witnesses = options.previous->proper_witnesses;
        continue;
      }
    }
    Verdict v;
    if (name == "tm3" || name == "2tm3.fmesh") {
      v = fmesh_below(space, full_view(chain), eps, fuel);
    } else if (name == "tm1") {
      v = chain_condition(space, restrict_boundary(chain), fuel, Route::exact_when_available, options.exec);
    } else if (name == "2tm1.chain") {
      v = chain_condition(space, full_view(chain), fuel, Route::exact_when_available, options.exec);
    } else if (name == "tm5" || name == "2tm5") {
      v = faces_inside_witness(problem, chain, fuel);
    } else if (name == "tm4" || name == "2tm3.proper") {
      auto view = sphere ? restrict_boundary(chain) : full_view(chain);
      auto res = is_proper(space, view, eps, fuel, Route::exact_when_available, options.exec);
      v = std::move(res.verdict);
      if (v.is_yes()) report.proper_witnesses = std::move(res.witnesses);
    } else if (name == "tm2") {
      v = chain_covers(space, *problem.set, restrict_boundary(chain), fuel, options.exec);
    } else if (name == "2tm1.covers") {
      v = chain_covers(space, *problem.set, full_view(chain), fuel, options.exec);
    } else if (name == "2tm1.boundary_covers") {
      if (!problem.boundary) throw std::invalid_argument("cell problem without a boundary set");
      v = chain_covers(space, *problem.boundary, restrict_boundary(chain), fuel, options.exec);
    }
    bool ok = v.is_yes();
    report.conditions.push_back({name, std::move(v)});
    if (!ok && options.stop_at_first_failure) break;
  }
  return report;
}

}  // namespace

ConditionReport check_sphere_conditions(const Problem& problem, const Chain& chain, unsigned k, unsigned fuel,
                                        const CheckOptions& options) {
  if (problem.kind != ProblemKind::sphere) throw std::invalid_argument("not a sphere problem");
  return run_checks(problem, chain, k, fuel, options);
}

ConditionReport check_cell_conditions(const Problem& problem, const Chain& chain, unsigned k, unsigned fuel,
                                      const CheckOptions& options) {
  if (problem.kind != ProblemKind::cell) throw std::invalid_argument("not a cell problem");
  return run_checks(problem, chain, k, fuel, options);
}

ConditionReport check_conditions(const Problem& problem, const Chain& chain, unsigned k, unsigned fuel,
                                 const CheckOptions& options) {
  return run_checks(problem, chain, k, fuel, options);
}

// ---------------------------------------------------------------------------
// Search

std::vector<std::size_t> SearchOptions::default_m_schedule() {
  // Roughly geometric with ratio sqrt(2).
  std::vector<std::size_t> out{1, 2, 3, 4, 6, 8, 11, 16, 23, 32, 45, 64, 90, 128, 181, 256, 362, 512, 724, 1024};
  return out;
}

Rational approximation_bound(ProblemKind kind, unsigned k) {
  return Rational(kind == ProblemKind::sphere ? 3 : 7) * pow2_neg(k);
}

BallUnion output_balls(const Problem& problem, const Chain& chain) {
  auto view = problem.kind == ProblemKind::sphere ? restrict_boundary(chain) : full_view(chain);
  return zeta_balls(*problem.space, view);
}

namespace {

// Sphere chains store interior cells too, so the cap is on all (m + 1)^n cells.
constexpr std::size_t kMaxCells = std::size_t{1} << 18;
constexpr std::size_t kMaxEnumeratedCells = 64;
// Chain codes decoded per fuel round once the seeded candidates are exhausted.
constexpr std::size_t kFreshCodesPerRound = 64;

struct Slot {
  Provenance provenance = Provenance::seeded;
  std::size_t m = 0;
  std::size_t s = 0;
  Natural code;
  std::optional<CandidateChain> candidate;
  std::string state = "alive";
  std::string note;
  ConditionReport report;

  std::string label() const {
    if (provenance == Provenance::seeded) return "seeded m=" + std::to_string(m) + " s=" + std::to_string(s);
    return "enumerated l=" + to_string(code);
  }
};

}  // namespace

Approximation approximate(const Problem& problem, unsigned k, const SearchOptions& options) {
  if (!problem.space || !problem.set) throw std::invalid_argument("approximate: incomplete problem");
  if (options.fuel_ceiling < 1) throw std::invalid_argument("approximate: fuel ceiling must be at least 1");
  if (options.m_schedule.empty() || options.subdivision_schedule.empty())
    throw std::invalid_argument("approximate: empty seeding schedule");
  auto log = [&](const std::string& msg) {
    if (options.log) options.log(msg);
  };

  Approximation result;
  result.kind = problem.kind;
  result.k = k;
  result.bound = approximation_bound(problem.kind, k);
  result.epsilon = condition_epsilon(problem, k);
  unsigned bits = k + problem.witness.k0 + 12;

  std::vector<Slot> slots;
  for (std::size_t m : options.m_schedule) {
    if (m == 0 || std::pow(m + 1.0, problem.witness.n) > static_cast<double>(kMaxCells)) continue;
    std::set<std::size_t> seen;
    for (std::size_t s : options.subdivision_schedule) {
      if (s == 0 || !seen.insert(s).second) continue;
      Slot slot;
      slot.m = m;
      slot.s = s;
      slots.push_back(std::move(slot));
    }
  }
  Natural next_code = 0;

  CheckOptions check;
  check.exec = options.exec;
  for (unsigned t = 1; t <= options.fuel_ceiling; ++t) {
    std::size_t admitted = 1 + t / 8;
    std::size_t counted = 0;
    std::size_t fresh = 0;
    for (std::size_t idx = 0; counted < admitted; ++idx) {
      if (idx == slots.size()) {
        if (!options.enumerate || fresh++ == kFreshCodesPerRound) break;
        Slot slot;
        slot.provenance = Provenance::enumerated;
        slot.code = next_code;
        next_code += 1;
        slots.push_back(std::move(slot));
      }
      Slot& slot = slots[idx];
      if (slot.state != "alive") continue;
      ++counted;
      try {
        if (!slot.candidate) {
          if (slot.provenance == Provenance::seeded) {
            Rational delta = Rational(1) / Rational(static_cast<unsigned long>((slot.m + 1) * slot.s));
            slot.candidate = seed_candidate(problem, slot.m, delta, bits);
          } else {
            Natural side = codec::grid_side(slot.code), cells = 1;
            for (std::size_t i = 0; i < problem.witness.n && cells <= Natural(kMaxEnumeratedCells); ++i) cells *= side + 1;
            if (side == 0 || cells > Natural(kMaxEnumeratedCells))
              throw std::invalid_argument("enumerated chain outside the search range");
            Chain chain = chain_from_code(*problem.space, slot.code, problem.witness.n);
            if (chain.m() == 0 || chain.size() > kMaxEnumeratedCells)
              throw std::invalid_argument("enumerated chain outside the search range");
            CandidateChain c;
            c.chain = std::move(chain);
            c.provenance = Provenance::enumerated;
            c.m = c.chain.m();
            c.code = slot.code;
            slot.candidate = std::move(c);
          }
          log("built candidate " + slot.label());
        }
        check.previous = &slot.report;
        ConditionReport report = check_conditions(problem, slot.candidate->chain, k, t, check);
        slot.report = std::move(report);
      } catch (const std::exception& e) {
        slot.state = "failed";
        slot.note = e.what();
        slot.candidate.reset();
        --counted;
        continue;
      }
      if (slot.report.all_yes(problem.kind)) {
        slot.state = "certified";
        log("certified " + slot.label() + " at fuel " + std::to_string(t));
        result.certified = true;
        result.fuel = t;
        result.candidate = std::move(slot.candidate);
        result.report = std::move(slot.report);
        result.balls = output_balls(problem, result.candidate->chain);
        for (const auto& s : slots) result.candidates.push_back({s.label(), s.state, s.note});
        return result;
      }
      auto blamed = slot.report.blamed().value_or("");
      const Verdict* last = slot.report.conditions.empty() ? nullptr : &slot.report.conditions.back().verdict;
      slot.note = blamed + (last && !last->note.empty() ? ": " + last->note : "");
      if (slot.report.refuted()) {
        slot.state = "pruned";
        slot.candidate.reset();
        --counted;
        log("pruned " + slot.label() + " (" + slot.note + ")");
      }
    }
  }
  result.fuel = options.fuel_ceiling;
  for (const auto& s : slots) {
    if (s.provenance == Provenance::enumerated && s.state == "failed") continue;
    result.candidates.push_back({s.label(), s.state, s.note});
  }
  return result;
}

Approximation approximate_sphere(const Problem& problem, unsigned k, const SearchOptions& options) {
  if (problem.kind != ProblemKind::sphere) throw std::invalid_argument("not a sphere problem");
  return approximate(problem, k, options);
}

Approximation approximate_cell(const Problem& problem, unsigned k, const SearchOptions& options) {
  if (problem.kind != ProblemKind::cell) throw std::invalid_argument("not a cell problem");
  return approximate(problem, k, options);
}

// ---------------------------------------------------------------------------
// Oracle

namespace {

std::vector<std::vector<long double>> sphere_directions(std::size_t n, std::size_t count) {
  std::vector<std::vector<long double>> dirs;
  if (n == 1) return {{-1.0L}, {1.0L}};
  if (n == 2) {
    for (std::size_t i = 0; i < count; ++i) {
      long double th = 2 * std::numbers::pi_v<long double> * static_cast<long double>(i) / static_cast<long double>(count);
      dirs.push_back({std::cos(th), std::sin(th)});
    }
    return dirs;
  }
  // Fibonacci lattice in the first three coordinates.
  long double golden = std::numbers::pi_v<long double> * (3 - std::sqrt(5.0L));
  for (std::size_t i = 0; i < count; ++i) {
    long double z = 1 - 2 * (static_cast<long double>(i) + 0.5L) / static_cast<long double>(count);
    long double rad = std::sqrt(std::max<long double>(0, 1 - z * z));
    std::vector<long double> d(n, 0);
    d[0] = rad * std::cos(golden * static_cast<long double>(i));
    d[1] = rad * std::sin(golden * static_cast<long double>(i));
    d[2] = z;
    dirs.push_back(std::move(d));
  }
  return dirs;
}

}  // namespace

OracleReport verify_approximation(const Shape& shape, std::span<const Ball> j, const Rational& bound,
                                  std::size_t samples) {
  OracleReport rep;
  std::size_t n = shape.dim();
  if (j.empty()) return rep;
  for (const auto& b : j)
    if (b.dim() != n) throw std::invalid_argument("verify_approximation: ball dimension mismatch");

  auto points = shape.exact_points(samples);
  rep.coverage_points = points.size();
  BallGrid grid(j);
  for (const auto& p : points) {
    if (grid.in_open_union(p)) continue;
    ++rep.uncovered;
    long double best = INFINITY;
    for (const auto& b : j) {
      long double s = 0;
      for (std::size_t i = 0; i < n; ++i) {
        long double d = static_cast<long double>(p[i].get_d()) - static_cast<long double>(b.center_d()[i]);
        s += d * d;
      }
      best = std::min(best, std::max<long double>(0, std::sqrt(s) - static_cast<long double>(b.radius_d())));
    }
    // An uncovered point on a ball boundary still counts as a violation.
    rep.coverage_excess = std::max(rep.coverage_excess, std::max(best, std::numeric_limits<long double>::min()));
  }

  std::size_t per_ball = std::max<std::size_t>(n == 2 ? 8 : 14, (samples + j.size() - 1) / j.size());
  auto dirs = sphere_directions(n, per_ball);
  std::vector<long double> x(n);
  for (const auto& b : j) {
    long double r = static_cast<long double>(b.radius().get_d());
    for (std::size_t i = 0; i < n; ++i) x[i] = static_cast<long double>(b.center()[i].get_d());
    rep.outward_excess = std::max(rep.outward_excess, shape.distance(x));
    ++rep.outward_samples;
    for (const auto& d : dirs) {
      for (std::size_t i = 0; i < n; ++i) x[i] = static_cast<long double>(b.center()[i].get_d()) + r * d[i];
      rep.outward_excess = std::max(rep.outward_excess, shape.distance(x));
      ++rep.outward_samples;
    }
  }
  rep.pass = rep.uncovered == 0 && rep.outward_excess <= static_cast<long double>(bound.get_d());
  return rep;
}

}  // namespace cochain
