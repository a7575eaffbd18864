#include "kernels_internal.hpp"

#include <algorithm>
#include <atomic>
#include <numeric>

namespace cochain::kernels {

namespace {
std::atomic<Exec> g_default_exec{Exec::parallel};
}

Exec default_exec() { return g_default_exec.load(std::memory_order_relaxed); }
void set_default_exec(Exec exec) { g_default_exec.store(exec, std::memory_order_relaxed); }

SubdivisionResult subdivide_serial(BoxNode root, unsigned depth_cap, const Classifier& classify) {
  SubdivisionResult result;
  std::vector<BoxNode> stack;
  stack.push_back(std::move(root));
  while (!stack.empty()) {
    BoxNode node = std::move(stack.back());
    stack.pop_back();
    ++result.boxes;
    BoxOutcome outcome = classify(node);
    if (outcome == BoxOutcome::accept) continue;
    if (outcome == BoxOutcome::refute) {
      result.status = SubdivisionStatus::refuted;
      result.stopped_at = std::move(node.box);
      return result;
    }
    if (node.depth >= depth_cap) {
      result.status = SubdivisionStatus::undecided;
      result.stopped_at = std::move(node.box);
      return result;
    }
    unsigned children = 1U << node.box.dim();
    for (unsigned c = children; c-- > 0;) {
      BoxNode child;
      child.box = node.box.child(c);
      child.depth = node.depth + 1;
      child.first = node.first;
      child.second = node.second;
      stack.push_back(std::move(child));
    }
  }
  return result;
}

SubdivisionResult subdivide(BoxNode root, unsigned depth_cap, const Classifier& classify, Exec exec) {
  return exec == Exec::parallel ? subdivide_parallel(std::move(root), depth_cap, classify)
                                : subdivide_serial(std::move(root), depth_cap, classify);
}

namespace detail {

SweepData prepare_sweep(const std::vector<const Ball*>& balls) {
  SweepData s;
  if (balls.empty()) return s;
  s.n = balls.front()->dim();
  s.lo.resize(balls.size() * s.n);
  s.hi.resize(balls.size() * s.n);
  for (std::size_t i = 0; i < balls.size(); ++i)
    for (std::size_t d = 0; d < s.n; ++d) {
      s.lo[i * s.n + d] = ball_lower(*balls[i], d);
      s.hi[i * s.n + d] = ball_upper(*balls[i], d);
    }
  s.order.resize(balls.size());
  std::iota(s.order.begin(), s.order.end(), 0U);
  std::stable_sort(s.order.begin(), s.order.end(),
                   [&](std::uint32_t a, std::uint32_t b) { return s.lo[a * s.n] < s.lo[b * s.n]; });
  return s;
}

namespace {

bool boxes_overlap(const SweepData& s, std::uint32_t a, std::uint32_t b) {
  for (std::size_t d = 1; d < s.n; ++d)
    if (s.lo[a * s.n + d] > s.hi[b * s.n + d] || s.lo[b * s.n + d] > s.hi[a * s.n + d]) return false;
  return true;
}

}  // namespace

std::optional<std::size_t> sweep_row(const SweepData& s, std::size_t p, const PairPredicate& conflict) {
  std::uint32_t a = s.order[p];
  double limit = s.hi[a * s.n];
  for (std::size_t q = p + 1; q < s.order.size(); ++q) {
    std::uint32_t b = s.order[q];
    if (s.lo[b * s.n] > limit) break;
    if (!boxes_overlap(s, a, b)) continue;
    if (conflict(std::min(a, b), std::max(a, b))) return q;
  }
  return std::nullopt;
}

}  // namespace detail

std::optional<std::pair<std::uint32_t, std::uint32_t>> find_overlap_conflict_serial(
    const std::vector<const Ball*>& balls, const PairPredicate& conflict) {
  detail::SweepData s = detail::prepare_sweep(balls);
  for (std::size_t p = 0; p < s.order.size(); ++p) {
    if (auto q = detail::sweep_row(s, p, conflict)) {
      std::uint32_t a = s.order[p], b = s.order[*q];
      return std::make_pair(std::min(a, b), std::max(a, b));
    }
  }
  return std::nullopt;
}

std::optional<std::pair<std::uint32_t, std::uint32_t>> find_overlap_conflict(
    const std::vector<const Ball*>& balls, const PairPredicate& conflict, Exec exec) {
  return exec == Exec::parallel ? find_overlap_conflict_parallel(balls, conflict)
                                : find_overlap_conflict_serial(balls, conflict);
}

std::optional<std::size_t> first_failure_serial(std::size_t count, const std::function<bool(std::size_t)>& ok) {
  for (std::size_t i = 0; i < count; ++i)
    if (!ok(i)) return i;
  return std::nullopt;
}

std::optional<std::size_t> first_failure(std::size_t count, const std::function<bool(std::size_t)>& ok, Exec exec) {
  return exec == Exec::parallel ? first_failure_parallel(count, ok) : first_failure_serial(count, ok);
}

}  // namespace cochain::kernels
