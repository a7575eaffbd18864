#pragma once

// Data-parallel kernels behind the chain and covering checks. Each kernel has
// a serial reference implementation and an OpenMP one; both return identical
// results (the parallel versions resolve races by taking the first failure
// in the serial visiting order).

#include "cochain/geometry.hpp"

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace cochain::kernels {

enum class Exec { serial, parallel };

Exec default_exec();
void set_default_exec(Exec exec);

// ---------------------------------------------------------------------------
// Dyadic box subdivision.

enum class BoxOutcome { accept, split, refute };

struct BoxNode {
  Box box;
  unsigned depth = 0;
  /// Candidate lists, narrowed by the classifier and inherited by children.
  std::vector<std::uint32_t> first;
  std::vector<std::uint32_t> second;
};

/// Must be safe to call concurrently on distinct nodes.
using Classifier = std::function<BoxOutcome(BoxNode&)>;

enum class SubdivisionStatus { covered, undecided, refuted };

struct SubdivisionResult {
  SubdivisionStatus status = SubdivisionStatus::covered;
  std::size_t boxes = 0;
  /// Box where the search stopped (undecided or refuted).
  std::optional<Box> stopped_at;
};

/// Every box reachable from `root` must be accepted within `depth_cap`
/// levels. Stops at the first refuted box or the first box that would need
/// splitting beyond the cap, in depth-first order.
SubdivisionResult subdivide_serial(BoxNode root, unsigned depth_cap, const Classifier& classify);
SubdivisionResult subdivide_parallel(BoxNode root, unsigned depth_cap, const Classifier& classify);
SubdivisionResult subdivide(BoxNode root, unsigned depth_cap, const Classifier& classify, Exec exec);

// ---------------------------------------------------------------------------
// Ball pair sweep.

/// Calls `conflict(u, v)` (u < v, positions in `balls`) for every pair whose
/// outward-rounded bounding boxes overlap, and returns the first pair for
/// which it is true, in sweep order. Pairs with disjoint boxes are certainly
/// disjoint as closed balls and are never reported.
using PairPredicate = std::function<bool(std::uint32_t, std::uint32_t)>;

std::optional<std::pair<std::uint32_t, std::uint32_t>> find_overlap_conflict_serial(
    const std::vector<const Ball*>& balls, const PairPredicate& conflict);
std::optional<std::pair<std::uint32_t, std::uint32_t>> find_overlap_conflict_parallel(
    const std::vector<const Ball*>& balls, const PairPredicate& conflict);
std::optional<std::pair<std::uint32_t, std::uint32_t>> find_overlap_conflict(
    const std::vector<const Ball*>& balls, const PairPredicate& conflict, Exec exec);

// ---------------------------------------------------------------------------
// Independent checks.

/// Smallest i in [0, count) with ok(i) false, or nullopt. ok may write to
/// per-index output slots.
std::optional<std::size_t> first_failure_serial(std::size_t count, const std::function<bool(std::size_t)>& ok);
std::optional<std::size_t> first_failure_parallel(std::size_t count, const std::function<bool(std::size_t)>& ok);
std::optional<std::size_t> first_failure(std::size_t count, const std::function<bool(std::size_t)>& ok, Exec exec);

}  // namespace cochain::kernels
