#include <benchmark/benchmark.h>

#include "sherk/exp_operators.hpp"
#include "sherk/schemes.hpp"
#include "sherk/verification.hpp"

using namespace sherk;

static void BM_ForwardInverse(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const Grid g = make_grid(100.0, n);
  const RealField u = random_field(g, 1, 0, FieldKind::Smooth);
  for (auto _ : state) {
    RealField back = inverse(forward(u));
    benchmark::DoNotOptimize(back.values().data());
  }
  state.SetItemsProcessed(state.iterations() * g->points());
}
BENCHMARK(BM_ForwardInverse)->Arg(64)->Arg(128)->Arg(256)->Arg(512);

static void BM_Step(benchmark::State& state) {
  const auto scheme = static_cast<Scheme>(state.range(0));
  const int n = static_cast<int>(state.range(1));
  const Grid g = make_grid(100.0, n);
  SchemeConfig cfg;
  cfg.scheme = scheme;
  cfg.tau = 0.1;
  const Integrator integ(g, cfg);
  SimState s(0.1 * random_field(g, 2, 0, FieldKind::Smooth));
  for (auto _ : state) {
    integ.step(s);
    benchmark::DoNotOptimize(s.u.values().data());
  }
  state.SetLabel(std::string(to_string(scheme)));
}
BENCHMARK(BM_Step)->ArgsProduct({{static_cast<long>(Scheme::ERK22), static_cast<long>(Scheme::ERKGeneral),
                                  static_cast<long>(Scheme::ETD1), static_cast<long>(Scheme::ETDRK2),
                                  static_cast<long>(Scheme::IMEX1), static_cast<long>(Scheme::IMEXRK22)},
                                 {128, 256}});

static void BM_Phi(benchmark::State& state) {
  const int k = static_cast<int>(state.range(0));
  double z = 1e-6, acc = 0.0;
  for (auto _ : state) {
    acc += phi(k, z);
    z = z < 1e3 ? z * 1.01 : 1e-6;
  }
  benchmark::DoNotOptimize(acc);
}
BENCHMARK(BM_Phi)->DenseRange(0, 2);

static void BM_Integrator(benchmark::State& state) {
  const Grid g = make_grid(100.0, static_cast<int>(state.range(0)));
  SchemeConfig cfg;
  for (auto _ : state) {
    Integrator integ(g, cfg);
    benchmark::DoNotOptimize(&integ);
  }
}
BENCHMARK(BM_Integrator)->Arg(256);
BENCHMARK_MAIN();
