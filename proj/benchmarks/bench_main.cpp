#include <vector>

#include <benchmark/benchmark.h>

#include "defeig/halley.hpp"
#include "defeig/oracle.hpp"
#include "defeig/pencil.hpp"
#include "defeig/randomize.hpp"
#include "defeig/rrf.hpp"
#include "defeig/solver.hpp"

namespace {

using namespace defeig;

std::vector<double> spread(Index n) {
  std::vector<double> e;
  for (Index i = 0; i < n; ++i) e.push_back(-0.9 + 1.8 * static_cast<double>(i) / static_cast<double>(n - 1));
  return e;
}

HermitianPencil scaled_pencil(Index n) {
  const auto eigs = spread(n);
  const GeneratedPencil g = generate_test_pencil(n, eigs, 5.0, 7);
  const double s = std::max(g.pencil.norm_a(), g.pencil.norm_b());
  return HermitianPencil(g.pencil.a() / s, g.pencil.b() / s);
}

void BM_Crawford(benchmark::State& st) {
  const HermitianPencil p = scaled_pencil(st.range(0));
  for (auto _ : st) benchmark::DoNotOptimize(crawford_lower_bound(p).gamma_lb);
}
BENCHMARK(BM_Crawford)->Arg(16)->Arg(64);

void BM_IfdwhStep(benchmark::State& st) {
  const Index n = st.range(0);
  const HermitianPencil p = scaled_pencil(n);
  HalleyState s{p.a(), p.b(), 0.01, 0};
  for (auto _ : st) benchmark::DoNotOptimize(ifdwh_step(s).l);
}
BENCHMARK(BM_IfdwhStep)->Arg(16)->Arg(64)->Arg(128);

void BM_Grurv(benchmark::State& st) {
  const HermitianPencil p = scaled_pencil(st.range(0));
  std::uint64_t seed = 0;
  for (auto _ : st) {
    benchmark::DoNotOptimize(grurv({2.0 * p.b(), p.a() + p.b()}, {-1, 1}, ++seed).u);
  }
}
BENCHMARK(BM_Grurv)->Arg(16)->Arg(64);

void BM_Oracle(benchmark::State& st) {
  const HermitianPencil p = scaled_pencil(st.range(0));
  for (auto _ : st) benchmark::DoNotOptimize(reference_solve(p).kappa_x);
}
BENCHMARK(BM_Oracle)->Arg(16)->Arg(64);

void BM_Diagonalize(benchmark::State& st) {
  const HermitianPencil p = scaled_pencil(st.range(0));
  const double g = crawford_lower_bound(p).gamma_lb;
  for (auto _ : st) {
    benchmark::DoNotOptimize(
        diagonalize_definite(p, 1e-6, g, PerturbationKind::kGue, 1).result.residual_a);
  }
}
BENCHMARK(BM_Diagonalize)->Arg(8)->Arg(16)->Arg(32)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
