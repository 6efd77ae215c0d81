// Hot-path microbenchmarks: transforms, the right-hand side, one full
// step with and without companions, and a diagnostics record.

#include <benchmark/benchmark.h>

#include "wkg/diagnostics.hpp"
#include "wkg/fields.hpp"
#include "wkg/nullforms.hpp"
#include "wkg/propagate.hpp"
#include "wkg/runconfig.hpp"
#include "wkg/vectorfields.hpp"

using namespace wkg;

namespace {

FieldState make_state(int n) {
  RunConfig cfg = preset("default-eps");
  return build_initial_state(Grid::make(n, cfg.box), cfg.init,
                             cfg.couplings);
}

void bm_spectral_derivative(benchmark::State& state) {
  const FieldState s = make_state(static_cast<int>(state.range(0)));
  for (auto _ : state)
    benchmark::DoNotOptimize(spectral_derivative(s.w, 1));
}

void bm_dealiased_product(benchmark::State& state) {
  const FieldState s = make_state(static_cast<int>(state.range(0)));
  for (auto _ : state)
    benchmark::DoNotOptimize(dealiased_product(s.w, s.v));
}

void bm_rhs(benchmark::State& state) {
  const FieldState s = make_state(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(rhs(s));
}

void bm_step(benchmark::State& state) {
  FieldState s = make_state(static_cast<int>(state.range(0)));
  const Propagator prop(s.grid_ptr());
  const double dt = 0.5 * s.grid().h();
  for (auto _ : state) prop.step(s, dt);
}

void bm_step_with_aux(benchmark::State& state) {
  FieldState s = make_state(static_cast<int>(state.range(0)));
  AuxiliaryStates aux = make_aux(s);
  const Propagator prop(s.grid_ptr());
  const double dt = 0.5 * s.grid().h();
  for (auto _ : state) prop.step_with_aux(s, aux, dt);
}

void bm_build_tables(benchmark::State& state) {
  const FieldState s = make_state(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(build_tables(s, 4));
}

void bm_record(benchmark::State& state) {
  const FieldState s = make_state(static_cast<int>(state.range(0)));
  DiagnosticsConfig dc;
  for (auto _ : state) {
    DiagnosticsSuite suite(dc);
    suite.record(s, nullptr, 1e9);
    benchmark::DoNotOptimize(suite);
  }
}

BENCHMARK(bm_spectral_derivative)->Arg(256)->Arg(512);
BENCHMARK(bm_dealiased_product)->Arg(256)->Arg(512);
BENCHMARK(bm_rhs)->Arg(256)->Arg(512);
BENCHMARK(bm_step)->Arg(256)->Arg(512);
BENCHMARK(bm_step_with_aux)->Arg(256);
BENCHMARK(bm_build_tables)->Arg(256);
BENCHMARK(bm_record)->Arg(256);

}  // namespace

BENCHMARK_MAIN();
