#include <benchmark/benchmark.h>

#include "typeproj/bayes.hpp"
#include "typeproj/estimators.hpp"
#include "typeproj/projections.hpp"
#include "typeproj/typespace.hpp"

using namespace typeproj;

namespace {

Alphabet abc(int m) {
  std::vector<double> pts(m);
  for (int i = 0; i < m; ++i) pts[i] = i;
  return Alphabet(pts);
}

void BM_EnumerateTypes(benchmark::State& state) {
  const int m = static_cast<int>(state.range(0));
  const std::int64_t n = state.range(1);
  const Alphabet a = abc(m);
  std::int64_t visited = 0;
  for (auto _ : state) {
    visited = 0;
    for_each_type(a, n, [&](const EmpiricalType& t) {
      benchmark::DoNotOptimize(t[0]);
      ++visited;
    });
  }
  state.SetItemsProcessed(state.iterations() * visited);
}
BENCHMARK(BM_EnumerateTypes)->Args({3, 400})->Args({4, 120})->Args({5, 60});

void BM_LogTypeProb(benchmark::State& state) {
  const Pmf q(abc(3), {0.2, 0.3, 0.5});
  const EmpiricalType t(abc(3), {63, 114, 223});
  for (auto _ : state) benchmark::DoNotOptimize(log_type_prob(t, q));
}
BENCHMARK(BM_LogTypeProb);

void BM_ProbOfSet(benchmark::State& state) {
  const std::int64_t n = state.range(0);
  const int threads = static_cast<int>(state.range(1));
  const Pmf q(abc(3), {0.2, 0.3, 0.5});
  auto pred = [](const EmpiricalType& t) {
    return t[1] + 2 * t[2] >= 1.4 * static_cast<double>(t.n()) - 1e-9;
  };
  EnumerationOptions opts;
  opts.threads = threads;
  for (auto _ : state)
    benchmark::DoNotOptimize(prob_of_set(n, q, pred, opts));
}
BENCHMARK(BM_ProbOfSet)->Args({400, 1})->Args({400, 4})->Args({400, 8});

void BM_IProjection(benchmark::State& state) {
  const int m = static_cast<int>(state.range(0));
  const Pmf q = Pmf::uniform(abc(m));
  Eigen::MatrixXd u(2, m);
  for (int i = 0; i < m; ++i) {
    u(0, i) = i;
    u(1, i) = (i % 2 == 0) ? 1.0 : -1.0;
  }
  Eigen::VectorXd lo(2), hi(2);
  lo << 0.55 * (m - 1), -0.2;
  hi << kInf, 0.2;
  const ConstraintRegion reg(abc(m), u, lo, hi);
  for (auto _ : state) benchmark::DoNotOptimize(i_projection(q, reg).divergence);
}
BENCHMARK(BM_IProjection)->Arg(5)->Arg(20)->Arg(100);

void BM_ElEstimate(benchmark::State& state) {
  const Pmf r(abc(4), {0.1, 0.2, 0.3, 0.4});
  const Sample s = draw_iid(r, state.range(0), 42);
  EEModel model;
  model.num_functions = 2;
  model.num_params = 1;
  model.u = [](double x, std::span<const double> th, std::span<double> out) {
    out[0] = x - th[0];
    out[1] = x * x - th[0] * th[0] - 1.0;
  };
  for (double t = 0.5; t <= 2.9 + 0.025; t += 0.05) model.theta_grid.push_back({t});
  for (auto _ : state)
    benchmark::DoNotOptimize(el_estimate(s, model).theta_hat[0]);
}
BENCHMARK(BM_ElEstimate)->Arg(50)->Arg(500);

}  // namespace

BENCHMARK_MAIN();
