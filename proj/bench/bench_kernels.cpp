// Parallel kernels against their serial reference implementations.
//   ./rabi_bench --benchmark_filter=Lindblad
// Set OMP_NUM_THREADS to control the parallel side.

#include <benchmark/benchmark.h>
#include <spdlog/spdlog.h>

#include "rabi/dynamics.hpp"
#include "rabi/observables.hpp"
#include "rabi/phase_diagram.hpp"

namespace {

struct QuenchFixture {
  rabi::LindbladGenerator gen;
  rabi::Matrix rho;

  static QuenchFixture make(int n_max) {
    const rabi::ModelParams p{0.1, 10.0, 0.65};
    const rabi::FockCutoff cutoff(n_max);
    const auto es = rabi::solve_model(p, cutoff);
    auto bath = rabi::BathSpec::defaults_for(p);
    bath.temperature = 1.0;
    auto gen = rabi::make_generator(es, cutoff, bath);
    const auto d = es.energies.size();
    rabi::Matrix rho = rabi::Matrix::Random(d, d);
    rho = rho * rho.adjoint();
    rho /= rho.trace();
    return {std::move(gen), std::move(rho)};
  }
};

void BM_LindbladParallel(benchmark::State& state) {
  const auto fx = QuenchFixture::make(static_cast<int>(state.range(0)));
  rabi::Matrix drho(fx.rho.rows(), fx.rho.cols());
  for (auto _ : state) {
    fx.gen.apply(fx.rho, drho);
    benchmark::DoNotOptimize(drho.data());
  }
}

void BM_LindbladSerialDense(benchmark::State& state) {
  const auto fx = QuenchFixture::make(static_cast<int>(state.range(0)));
  const auto jumps = fx.gen.jumps();
  for (auto _ : state) {
    auto drho = rabi::reference::lindblad_rhs_dense(fx.rho, fx.gen.energies(), jumps);
    benchmark::DoNotOptimize(drho.data());
  }
}

rabi::SweepSpec small_sweep() {
  rabi::SweepSpec s = rabi::SweepSpec::defaults();
  s.g_values = {0.2, 0.4, 0.6, 0.8};
  s.omega_c_values = {0.05, 0.1, 0.2, 0.4};
  s.cutoff = rabi::FockCutoff(30);
  return s;
}

void BM_SweepParallel(benchmark::State& state) {
  const auto spec = small_sweep();
  for (auto _ : state) benchmark::DoNotOptimize(rabi::run_sweep(spec).points.size());
}

void BM_SweepSerial(benchmark::State& state) {
  const auto spec = small_sweep();
  for (auto _ : state) benchmark::DoNotOptimize(rabi::reference::run_sweep_serial(spec).points.size());
}

void BM_Wigner(benchmark::State& state) {
  const rabi::ModelParams p{0.1, 10.0, 0.7};
  const rabi::FockCutoff cutoff(50);
  const auto es = rabi::solve_model(p, cutoff);
  const rabi::SubsystemDims dims{rabi::kQubitDim, cutoff.cavity_dim()};
  const auto rho_c = rabi::partial_trace(
      rabi::DensityMatrix::pure(es.ground_state(), rabi::Basis::bare, dims), rabi::Subsystem::cavity);
  const auto n = static_cast<Eigen::Index>(state.range(0));
  const rabi::RealVector axis = rabi::linspace(-8.0, 8.0, n);
  for (auto _ : state) benchmark::DoNotOptimize(rabi::wigner_function(rho_c, axis, axis).values.sum());
}

}  // namespace

// the dense reference is O(d^5) (one full product per jump), so keep the comparison small
BENCHMARK(BM_LindbladParallel)->Arg(10)->Arg(20)->Arg(50)->Arg(100)->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_LindbladSerialDense)->Arg(10)->Arg(20)->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_SweepParallel)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_SweepSerial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Wigner)->Arg(41)->Arg(81)->Unit(benchmark::kMillisecond);

int main(int argc, char** argv) {
  spdlog::set_level(spdlog::level::err);  // grid-edge warnings are expected here
  benchmark::Initialize(&argc, argv);
  if (benchmark::ReportUnrecognizedArguments(argc, argv)) return 1;
  benchmark::RunSpecifiedBenchmarks();
  benchmark::Shutdown();
  return 0;
}
