#pragma once

// Certified approximation of co-c.e. spheres and cells: grid chains, seeded
// candidate construction, the semi-decidable checklists and the search that
// realizes the approximating function g.

#include "cochain/effsets.hpp"
#include "cochain/shapes.hpp"

#include <array>
#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace cochain {

/// Exact rational box; a facet has lo == hi on its fixed axis.
struct GridCell {
  std::vector<Rational> lo, hi;
};

/// D^m: cells [a_i/(m+1), (a_i+1)/(m+1)] in flat (row-major) order.
std::vector<GridCell> grid_chain(std::size_t n, std::size_t m);
/// G^m(a) = facets of D^m(a) lying in the boundary of I^n; empty for
/// interior indices. Requires n >= 2.
std::vector<std::vector<GridCell>> boundary_grid_chain(std::size_t n, std::size_t m);

/// Realization of the homeomorphism on points of I^n (or its boundary), in
/// floating point. Used only to build candidates.
using Sampler = std::function<std::vector<double>(std::span<const double>)>;

enum class ProblemKind { sphere, cell };

std::string kind_name(ProblemKind kind);

struct Witness {
  std::size_t n = 0;
  /// faces[i - 1][rho] = W_i^rho.
  std::vector<std::array<BallUnion, 2>> faces;
  unsigned k0 = 0;
  Sampler sampler;
  nlohmann::json sampler_spec;
};

struct Problem {
  ProblemKind kind = ProblemKind::sphere;
  SpacePtr space;
  /// The sphere S, or the cell E.
  CoCeSetPtr set;
  /// For cells: the boundary sphere f(boundary of I^n).
  CoCeSetPtr boundary;
  Witness witness;
};

/// Builtin problems: circle, sphere2 and ellipse are spheres; disk and
/// square_cell are cells. Throws std::invalid_argument for other shapes.
Problem builtin_problem(const nlohmann::json& set_spec);

/// Sampler from {"shape": {...}} (the parametrization of a builtin shape),
/// optionally {"perturb": "p/q", "seed": s} adding a deterministic
/// displacement of at most that size in every coordinate.
Sampler sampler_from_json(const nlohmann::json& spec, ProblemKind kind);

/// Faces of a sphere witness must have disjoint unions; faces of a cell
/// witness must have closures at distance more than 2 * 2^-k0.
Verdict validate_witness(const Problem& problem, unsigned fuel);

/// Smallest sampled distance between the images of opposite faces, and
/// whether 2 * 2^-k0 stays below it.
struct K0Check {
  double min_distance = 0;
  bool ok = false;
};
K0Check spot_check_k0(const Problem& problem, std::size_t samples_per_axis = 16);

// ---------------------------------------------------------------------------
// Candidates

enum class Provenance { seeded, enumerated };

std::string provenance_name(Provenance p);

struct CandidateChain {
  Chain chain;
  Provenance provenance = Provenance::seeded;
  std::size_t m = 0;
  /// Sub-boxes per axis of each grid piece (seeded) or the chain code (enumerated).
  std::size_t subdivisions = 0;
  std::optional<Natural> code;
};

/// One ball per sub-box of pitch delta: the center is the sampled image of
/// the sub-box center, the radius 11/10 of the largest distance to 5 samples
/// per axis of the sub-box, both rounded outward to dyadics with `bits` bits.
/// Sphere candidates fill interior cells with a copy of cell 0.
CandidateChain seed_candidate(const Problem& problem, std::size_t m, const Rational& delta, unsigned bits);
/// Sub-box count per axis realizing pitch at most delta in a cell of side 1/(m+1).
std::size_t subdivisions_for(std::size_t m, const Rational& delta);

// ---------------------------------------------------------------------------
// Conditions

struct ConditionResult {
  std::string name;
  Verdict verdict;
};

struct ConditionReport {
  std::vector<ConditionResult> conditions;
  std::vector<ProperWitness> proper_witnesses;

  bool all_yes(ProblemKind kind) const;
  const Verdict* find(const std::string& name) const;
  /// First condition that is not Yes, as its top-level name (tm1..tm5, 2tm1..2tm5).
  std::optional<std::string> blamed() const;
  bool refuted() const;
};

/// Evaluation order: cheap exact checks first.
std::vector<std::string> condition_names(ProblemKind kind);
/// "2tm1.covers" -> "2tm1".
std::string condition_group(const std::string& name);

struct CheckOptions {
  bool stop_at_first_failure = true;
  /// Conditions already confirmed (skipped).
  const ConditionReport* previous = nullptr;
  kernels::Exec exec = kernels::default_exec();
};

/// eps = 2^-(k + k0).
Rational condition_epsilon(const Problem& problem, unsigned k);

ConditionReport check_sphere_conditions(const Problem& problem, const Chain& chain, unsigned k, unsigned fuel,
                                        const CheckOptions& options = {});
ConditionReport check_cell_conditions(const Problem& problem, const Chain& chain, unsigned k, unsigned fuel,
                                      const CheckOptions& options = {});
ConditionReport check_conditions(const Problem& problem, const Chain& chain, unsigned k, unsigned fuel,
                                 const CheckOptions& options = {});

// ---------------------------------------------------------------------------
// Search

struct SearchOptions {
  unsigned fuel_ceiling = 64;
  std::vector<std::size_t> m_schedule = default_m_schedule();
  std::vector<std::size_t> subdivision_schedule = {1, 2, 3};
  bool enumerate = true;
  kernels::Exec exec = kernels::default_exec();
  std::function<void(const std::string&)> log;

  static std::vector<std::size_t> default_m_schedule();
};

struct CandidateStatus {
  std::string label;
  std::string state;  // alive, pruned, failed, certified
  std::string note;
};

struct Approximation {
  bool certified = false;
  ProblemKind kind = ProblemKind::sphere;
  unsigned k = 0;
  Rational bound;
  Rational epsilon;
  std::optional<CandidateChain> candidate;
  /// zeta'(l) for spheres, zeta(l) for cells.
  BallUnion balls;
  ConditionReport report;
  unsigned fuel = 0;
  std::vector<CandidateStatus> candidates;
};

/// 3 * 2^-k for spheres, 7 * 2^-k for cells.
Rational approximation_bound(ProblemKind kind, unsigned k);

Approximation approximate(const Problem& problem, unsigned k, const SearchOptions& options = {});
Approximation approximate_sphere(const Problem& problem, unsigned k, const SearchOptions& options = {});
Approximation approximate_cell(const Problem& problem, unsigned k, const SearchOptions& options = {});

/// The output family of a certified chain.
BallUnion output_balls(const Problem& problem, const Chain& chain);

// ---------------------------------------------------------------------------
// Independent oracle

struct OracleReport {
  std::size_t coverage_points = 0;
  std::size_t uncovered = 0;
  /// Largest distance from a sampled point of S to J (0 when all are covered).
  long double coverage_excess = 0;
  std::size_t outward_samples = 0;
  /// Largest sampled distance from a point of J to S.
  long double outward_excess = 0;
  bool pass = false;
};

/// Coverage: exact rational points of S tested for membership in the open
/// union. Outward: centers and boundary points of every ball of J, at least
/// `samples` in total, measured against the shape's distance function.
OracleReport verify_approximation(const Shape& shape, std::span<const Ball> j, const Rational& bound,
                                  std::size_t samples = 10000);

}  // namespace cochain
