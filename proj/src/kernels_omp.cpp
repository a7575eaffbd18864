#include "kernels_internal.hpp"

#include <omp.h>

#include <atomic>
#include <exception>
#include <mutex>

namespace cochain::kernels {

namespace {

void atomic_min(std::atomic<std::size_t>& target, std::size_t value) {
  std::size_t cur = target.load(std::memory_order_relaxed);
  while (value < cur && !target.compare_exchange_weak(cur, value, std::memory_order_relaxed)) {
  }
}

// Collects the first exception thrown inside a parallel region.
class ErrorSlot {
 public:
  void capture() {
    std::lock_guard<std::mutex> lock(mu_);
    if (!error_) error_ = std::current_exception();
  }
  void rethrow() const {
    if (error_) std::rethrow_exception(error_);
  }

 private:
  std::mutex mu_;
  std::exception_ptr error_;
};

struct FrontierItem {
  BoxNode node;
  bool terminal = false;
  SubdivisionStatus status = SubdivisionStatus::covered;
};

}  // namespace

SubdivisionResult subdivide_parallel(BoxNode root, unsigned depth_cap, const Classifier& classify) {
  int threads = omp_get_max_threads();
  if (threads <= 1) return subdivide_serial(std::move(root), depth_cap, classify);

  // Breadth-first expansion keeps the frontier in depth-first visiting order.
  const std::size_t target = 16 * static_cast<std::size_t>(threads);
  SubdivisionResult result;
  std::vector<FrontierItem> frontier;
  frontier.push_back({std::move(root)});
  for (;;) {
    std::size_t pending = 0;
    for (const auto& item : frontier) {
      if (item.terminal) break;
      ++pending;
    }
    if (pending == 0 || pending >= target) break;
    std::vector<FrontierItem> next;
    for (auto& item : frontier) {
      if (item.terminal) {
        next.push_back(std::move(item));
        break;
      }
      ++result.boxes;
      BoxOutcome outcome = classify(item.node);
      if (outcome == BoxOutcome::accept) continue;
      if (outcome == BoxOutcome::refute || item.node.depth >= depth_cap) {
        item.terminal = true;
        item.status = outcome == BoxOutcome::refute ? SubdivisionStatus::refuted : SubdivisionStatus::undecided;
        next.push_back(std::move(item));
        break;
      }
      unsigned children = 1U << item.node.box.dim();
      for (unsigned c = 0; c < children; ++c) {
        FrontierItem child;
        child.node.box = item.node.box.child(c);
        child.node.depth = item.node.depth + 1;
        child.node.first = item.node.first;
        child.node.second = item.node.second;
        next.push_back(std::move(child));
      }
    }
    frontier = std::move(next);
  }

  std::atomic<std::size_t> first_bad{frontier.size()};
  for (std::size_t i = 0; i < frontier.size(); ++i)
    if (frontier[i].terminal) {
      first_bad = i;
      break;
    }

  std::vector<SubdivisionResult> partial(frontier.size());
  std::size_t boxes = 0;
  ErrorSlot errors;
  const long count = static_cast<long>(frontier.size());
#pragma omp parallel for schedule(dynamic, 1) reduction(+ : boxes)
  for (long i = 0; i < count; ++i) {
    auto idx = static_cast<std::size_t>(i);
    if (frontier[idx].terminal || idx > first_bad.load(std::memory_order_relaxed)) continue;
    try {
      partial[idx] = subdivide_serial(frontier[idx].node, depth_cap, classify);
      boxes += partial[idx].boxes;
      if (partial[idx].status != SubdivisionStatus::covered) atomic_min(first_bad, idx);
    } catch (...) {
      errors.capture();
    }
  }
  errors.rethrow();

  result.boxes += boxes;
  std::size_t bad = first_bad.load();
  if (bad < frontier.size()) {
    if (frontier[bad].terminal) {
      result.status = frontier[bad].status;
      result.stopped_at = frontier[bad].node.box;
      ++result.boxes;
    } else {
      result.status = partial[bad].status;
      result.stopped_at = partial[bad].stopped_at;
    }
  }
  return result;
}

std::optional<std::pair<std::uint32_t, std::uint32_t>> find_overlap_conflict_parallel(
    const std::vector<const Ball*>& balls, const PairPredicate& conflict) {
  detail::SweepData s = detail::prepare_sweep(balls);
  const std::size_t total = s.order.size();
  std::atomic<std::size_t> first_bad{total};
  std::vector<std::size_t> partner(total, 0);
  ErrorSlot errors;
  const long count = static_cast<long>(total);
#pragma omp parallel for schedule(dynamic, 64)
  for (long i = 0; i < count; ++i) {
    auto p = static_cast<std::size_t>(i);
    if (p > first_bad.load(std::memory_order_relaxed)) continue;
    try {
      if (auto q = detail::sweep_row(s, p, conflict)) {
        partner[p] = *q;
        atomic_min(first_bad, p);
      }
    } catch (...) {
      errors.capture();
    }
  }
  errors.rethrow();
  std::size_t p = first_bad.load();
  if (p == total) return std::nullopt;
  std::uint32_t a = s.order[p], b = s.order[partner[p]];
  return std::make_pair(std::min(a, b), std::max(a, b));
}

std::optional<std::size_t> first_failure_parallel(std::size_t count, const std::function<bool(std::size_t)>& ok) {
  std::atomic<std::size_t> first_bad{count};
  ErrorSlot errors;
  const long n = static_cast<long>(count);
#pragma omp parallel for schedule(dynamic, 16)
  for (long i = 0; i < n; ++i) {
    auto idx = static_cast<std::size_t>(i);
    if (idx > first_bad.load(std::memory_order_relaxed)) continue;
    try {
      if (!ok(idx)) atomic_min(first_bad, idx);
    } catch (...) {
      errors.capture();
    }
  }
  errors.rethrow();
  std::size_t bad = first_bad.load();
  if (bad == count) return std::nullopt;
  return bad;
}

}  // namespace cochain::kernels
