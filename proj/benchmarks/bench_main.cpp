#include <benchmark/benchmark.h>

#include <vector>

#include "carnot/group.hpp"
#include "carnot/measure.hpp"
#include "carnot/operators.hpp"
#include "carnot/random.hpp"
#include "carnot/special.hpp"

namespace {

carnot::GroupSpec group_for(int which) {
  switch (which) {
    case 0: return carnot::groups::heisenberg(1);
    case 1: return carnot::groups::free_step2(3);
    default: return carnot::GroupSpec(3, {2, 1, 1}, {{0, 1, 2, 1.0}, {0, 2, 3, 1.0}}, "engel");
  }
}

void BM_Multiply(benchmark::State& state) {
  const auto spec = group_for(static_cast<int>(state.range(0)));
  const auto n = static_cast<std::size_t>(spec.dimension());
  carnot::StreamRng rng(1, 0);
  std::vector<double> u(n), v(n), w(n);
  for (auto& x : u) x = rng.uniform();
  for (auto& x : v) x = rng.uniform();
  for (auto _ : state) {
    carnot::multiply_into(spec, u, v, w);
    benchmark::DoNotOptimize(w.data());
  }
}
BENCHMARK(BM_Multiply)->Arg(0)->Arg(1)->Arg(2);

void BM_Norm(benchmark::State& state) {
  const auto spec = group_for(static_cast<int>(state.range(0)));
  std::vector<double> u(static_cast<std::size_t>(spec.dimension()), 0.3);
  for (auto _ : state) benchmark::DoNotOptimize(carnot::homogeneous_norm(spec, u));
}
BENCHMARK(BM_Norm)->Arg(0)->Arg(1)->Arg(2);

void BM_LayerOracle(benchmark::State& state) {
  const auto spec = carnot::groups::heisenberg(1);
  carnot::SamplerConfig cfg;
  cfg.n_samples = static_cast<std::uint64_t>(state.range(0));
  cfg.workers = 1;
  for (auto _ : state) benchmark::DoNotOptimize(carnot::layer_weight_integral_oracle(spec, 1, 1.0, cfg));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_LayerOracle)->Arg(1 << 16);

void BM_Bilinear(benchmark::State& state) {
  const auto spec = carnot::groups::heisenberg(1);
  carnot::SamplerConfig cfg;
  cfg.n_samples = static_cast<std::uint64_t>(state.range(0));
  cfg.workers = 1;
  carnot::KernelParams kp{2.0, 1.0, 1.0};
  const auto f = carnot::TrialFunction::aniso_bump(spec, {1.0, 1.0});
  const auto domain = carnot::BallSpec::centered(spec, 8.0);
  for (auto _ : state) benchmark::DoNotOptimize(carnot::bilinear_form(spec, f, f, kp, domain, cfg));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_Bilinear)->Arg(1 << 14);

}  // namespace
BENCHMARK_MAIN();
