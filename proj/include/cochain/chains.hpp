#pragma once

// Finite families of ball unions indexed by N_m^n = {0..m}^n (chains), their
// boundary and face restrictions, and the semi-decidable chain predicates.
//
// Cells are stored in row-major order, last coordinate fastest, matching the
// grid coding in codec.hpp. Face axes are numbered from 1.

#include "cochain/kernels.hpp"
#include "cochain/semidecide.hpp"

#include <cstddef>
#include <optional>
#include <vector>

namespace cochain {

using MultiIndex = std::vector<std::size_t>;

class Chain {
 public:
  Chain() = default;
  Chain(std::size_t n, std::size_t m);
  Chain(std::size_t n, std::size_t m, std::vector<BallUnion> cells);

  std::size_t n() const { return n_; }
  std::size_t m() const { return m_; }
  std::size_t size() const { return cells_.size(); }

  const BallUnion& cell(std::size_t flat) const { return cells_.at(flat); }
  const BallUnion& cell(const MultiIndex& a) const { return cells_.at(flatten(a)); }
  BallUnion& cell_mut(std::size_t flat) { return cells_.at(flat); }
  const std::vector<BallUnion>& cells() const { return cells_; }

  std::size_t flatten(const MultiIndex& a) const;
  MultiIndex unflatten(std::size_t flat) const;
  bool is_boundary(std::size_t flat) const;

 private:
  std::size_t n_ = 0;
  std::size_t m_ = 0;
  std::vector<BallUnion> cells_;
};

struct FaceSelector {
  std::size_t axis = 1;  // 1..n
  int side = 0;          // 0 selects x_axis = 0, 1 selects x_axis = m
};

/// Number of multi-indices of N_m^n with some coordinate in {0, m}.
std::size_t boundary_count(std::size_t n, std::size_t m);

/// A reindexing of a chain; shares the chain's storage.
struct ChainView {
  const Chain* chain = nullptr;
  std::vector<std::size_t> indices;  // flat indices, ascending

  std::size_t size() const { return indices.size(); }
  const BallUnion& cell(std::size_t pos) const { return chain->cell(indices[pos]); }
};

ChainView full_view(const Chain& chain);
ChainView restrict_boundary(const Chain& chain);
ChainView restrict_face(const Chain& chain, FaceSelector face);

/// max_l |a_l - b_l|.
std::size_t sup_distance(const MultiIndex& a, const MultiIndex& b);

ComputableReal fmesh(const Space& space, const ChainView& view);

/// fmesh(view) < eps, certified by the rational upper bound of every cell's
/// formal diameter at precision t <= fuel. Refuted when some cell's lower
/// bound already reaches eps.
Verdict fmesh_below(const Space& space, const ChainView& view, const Rational& eps, unsigned fuel);

/// Cells of the view whose indices are at sup-distance > 1 have disjoint
/// closures. is_nchain uses the full view, is_spherical_chain the boundary.
Verdict chain_condition(const Space& space, const ChainView& view, unsigned fuel,
                        Route route = Route::exact_when_available,
                        kernels::Exec exec = kernels::default_exec());
Verdict is_nchain(const Space& space, const Chain& chain, unsigned fuel, Route route = Route::exact_when_available);
Verdict is_spherical_chain(const Space& space, const Chain& chain, unsigned fuel,
                           Route route = Route::exact_when_available);

/// Evidence that the open cells a and b contain points p, q with d(p, q) < eps.
/// When `on_segment` is set, p and q are c_u + s (c_v - c_u) and
/// c_u + t (c_v - c_u) for member balls u of a and v of b.
struct ProperWitness {
  std::size_t cell_a = 0, cell_b = 0;  // flat indices
  std::size_t ball_u = 0, ball_v = 0;  // member positions
  bool on_segment = false;
  Rational s, t;
  Point p, q;
};

struct ProperResult {
  Verdict verdict;
  std::vector<ProperWitness> witnesses;
};

/// Every pair of view cells at sup-distance <= 1 is eps-close. Pairs (a, a)
/// hold trivially because cells are nonempty open sets and are skipped.
/// In Euclidean space the exact route answers at fuel 1: Yes, or a
/// refutation when some adjacent pair has no eps-close member balls.
ProperResult is_proper(const Space& space, const ChainView& view, const Rational& eps, unsigned fuel,
                       Route route = Route::exact_when_available, kernels::Exec exec = kernels::default_exec());

/// Adjacent (sup-distance exactly 1) pairs of view cells, a < b.
std::vector<std::pair<std::size_t, std::size_t>> adjacent_pairs(const ChainView& view);

/// Re-checks a recorded witness exactly (space needs interpolate for
/// segment witnesses).
bool check_witness(const Space& space, const Chain& chain, const ProperWitness& w, const Rational& eps,
                   unsigned fuel);

/// Sorted, deduplicated ball codes of all cells of the view: [zeta(l)],
/// [zeta'(l)] or [zeta''(l)] for the full, boundary or face view.
std::vector<Natural> zeta_codes(const Space& space, const ChainView& view);
/// The balls of zeta_codes in the same order.
BallUnion zeta_balls(const Space& space, const ChainView& view);
/// Union code of the merged family. May throw std::length_error.
Natural zeta_code(const Space& space, const ChainView& view);

/// Grid code of the chain with union-code entries. May throw std::length_error.
Natural chain_code(const Space& space, const Chain& chain);
Chain chain_from_code(const Space& space, const Natural& code, std::size_t n);

}  // namespace cochain
