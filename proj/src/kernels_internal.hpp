#pragma once

#include "cochain/kernels.hpp"

namespace cochain::kernels::detail {

struct SweepData {
  std::size_t n = 0;
  std::vector<double> lo, hi;  // n entries per ball
  std::vector<std::uint32_t> order;  // balls sorted by lower bound on axis 0
};

SweepData prepare_sweep(const std::vector<const Ball*>& balls);

/// Scans sweep position p against later positions and returns the first
/// conflicting partner position.
std::optional<std::size_t> sweep_row(const SweepData& s, std::size_t p, const PairPredicate& conflict);

}  // namespace cochain::kernels::detail
