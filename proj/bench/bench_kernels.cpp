// Serial reference kernels against their OpenMP counterparts.

#include "cochain/approx.hpp"
#include "cochain/geometry.hpp"
#include "cochain/kernels.hpp"

#include <benchmark/benchmark.h>

#include <random>

using namespace cochain;
using kernels::BoxOutcome;
using kernels::Exec;

namespace {

Exec exec_of(const benchmark::State& state) { return state.range(0) == 0 ? Exec::serial : Exec::parallel; }

void label(benchmark::State& state) { state.SetLabel(state.range(0) == 0 ? "serial" : "parallel"); }

BallUnion grid_balls(std::size_t side, const Rational& radius) {
  BallUnion out;
  for (std::size_t i = 0; i < side; ++i)
    for (std::size_t j = 0; j < side; ++j)
      out.emplace_back(Point{Rational(static_cast<long>(i), static_cast<long>(side)), Rational(static_cast<long>(j), static_cast<long>(side))},
                       radius);
  return out;
}

void BM_Subdivide(benchmark::State& state) {
  // Cover of [0,1]^2 by a 32x32 grid of balls; every leaf box must be accepted.
  BallUnion j = grid_balls(33, Rational(1, 40));
  kernels::Classifier classify = [&j](kernels::BoxNode& node) {
    for (const auto& b : j)
      if (exact::box_in_open_ball(node.box, b)) return BoxOutcome::accept;
    return BoxOutcome::split;
  };
  kernels::BoxNode root;
  root.box = Box{{0.0, 0.0}, {1.0, 1.0}};
  for (auto _ : state) benchmark::DoNotOptimize(kernels::subdivide(root, 10, classify, exec_of(state)));
  label(state);
}
BENCHMARK(BM_Subdivide)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_OverlapSweep(benchmark::State& state) {
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<long> coord(0, 4096);
  BallUnion balls;
  for (int i = 0; i < 4000; ++i)
    balls.emplace_back(Point{Rational(coord(rng), 64), Rational(coord(rng), 64)}, Rational(1, 16));
  std::vector<const Ball*> ptrs;
  for (const auto& b : balls) ptrs.push_back(&b);
  // Only near-coincident centers conflict, so the sweep visits every candidate pair.
  auto conflict = [&](std::uint32_t u, std::uint32_t v) {
    return u != v && balls[u].center() == balls[v].center();
  };
  for (auto _ : state) benchmark::DoNotOptimize(kernels::find_overlap_conflict(ptrs, conflict, exec_of(state)));
  label(state);
}
BENCHMARK(BM_OverlapSweep)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_FirstFailure(benchmark::State& state) {
  BallUnion balls = grid_balls(200, Rational(1, 100));
  Ball host(Point{Rational(1, 2), Rational(1, 2)}, Rational(2));
  auto ok = [&](std::size_t i) { return exact::closed_ball_in_open_ball(balls[i], host); };
  for (auto _ : state) benchmark::DoNotOptimize(kernels::first_failure(balls.size(), ok, exec_of(state)));
  label(state);
}
BENCHMARK(BM_FirstFailure)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_CheckConditions(benchmark::State& state) {
  Problem problem = builtin_problem({{"shape", "circle"}});
  auto candidate = seed_candidate(problem, 32, Rational(1, 66), 16);
  CheckOptions options;
  options.exec = exec_of(state);
  options.stop_at_first_failure = false;
  for (auto _ : state) benchmark::DoNotOptimize(check_conditions(problem, candidate.chain, 4, 12, options));
  label(state);
}
BENCHMARK(BM_CheckConditions)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
