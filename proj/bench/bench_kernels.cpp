// Serial reference kernels against their OpenMP counterparts.

#include <complex>
#include <vector>

#include <benchmark/benchmark.h>

#include "madic/ctrw.hpp"
#include "madic/fractional.hpp"
#include "madic/kernels.hpp"

namespace {

using madic::kernels::cplx;
using madic::kernels::Sign;

std::vector<cplx> ramp(std::size_t n) {
  std::vector<cplx> v(n);
  for (std::size_t i = 0; i < n; ++i) v[i] = cplx(double(i % 7) - 3.0, double(i % 5) * 0.5);
  return v;
}

std::size_t power(int m, int d) {
  std::size_t M = 1;
  for (int i = 0; i < d; ++i) M *= static_cast<std::size_t>(m);
  return M;
}

template <auto Kernel>
void naive_dft(benchmark::State& state) {
  const auto in = ramp(power(3, static_cast<int>(state.range(0))));
  std::vector<cplx> out(in.size());
  for (auto _ : state) {
    Kernel(in, out, Sign::plus);
    benchmark::DoNotOptimize(out.data());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(in.size()));
}

template <auto Kernel>
void radix_dft(benchmark::State& state) {
  const auto in = ramp(power(3, static_cast<int>(state.range(0))));
  std::vector<cplx> out(in.size());
  for (auto _ : state) {
    Kernel(3, in, out, Sign::plus);
    benchmark::DoNotOptimize(out.data());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(in.size()));
}

template <auto Kernel>
void convolution(benchmark::State& state) {
  const auto f = ramp(power(3, static_cast<int>(state.range(0))));
  const auto g = ramp(f.size());
  std::vector<cplx> out(f.size());
  for (auto _ : state) {
    Kernel(f, g, 1.0, out);
    benchmark::DoNotOptimize(out.data());
  }
}

template <bool Parallel>
void ctrw_sampling(benchmark::State& state) {
  const madic::CtrwModel model{madic::WaitingTimeModel::exponential(1.0),
                               madic::JumpModel::stable(3, 1.0)};
  const auto n = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) {
    auto s = Parallel ? madic::sample_endpoints(model, 5.0, n, 42)
                      : madic::sample_endpoints_serial(model, 5.0, n, 42);
    benchmark::DoNotOptimize(s.data());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(n));
}

template <bool Parallel>
void fractional_tabulation(benchmark::State& state) {
  const madic::FractionalParams p{3, 1.0, 0.5};
  const auto times = madic::graded_times(1.0, static_cast<int>(state.range(0)));
  for (auto _ : state) {
    auto sol = Parallel ? madic::tabulate(p, madic::InitialCondition::unit_ball, times, {-40, 40})
                        : madic::tabulate_serial(p, madic::InitialCondition::unit_ball, times,
                                                 {-40, 40});
    benchmark::DoNotOptimize(sol.values.data());
  }
}

}  // namespace

BENCHMARK(naive_dft<madic::kernels::dft_naive_serial>)->Name("dft_naive/serial")->Arg(6)->Arg(7);
BENCHMARK(naive_dft<madic::kernels::dft_naive_parallel>)->Name("dft_naive/parallel")->Arg(6)->Arg(7);
BENCHMARK(radix_dft<madic::kernels::dft_radix_serial>)->Name("dft_radix/serial")->Arg(8)->Arg(11);
BENCHMARK(radix_dft<madic::kernels::dft_radix_parallel>)->Name("dft_radix/parallel")->Arg(8)->Arg(11);
BENCHMARK(convolution<madic::kernels::cyclic_convolve_serial>)->Name("convolve/serial")->Arg(6);
BENCHMARK(convolution<madic::kernels::cyclic_convolve_parallel>)->Name("convolve/parallel")->Arg(6);
BENCHMARK(ctrw_sampling<false>)->Name("ctrw_sampling/serial")->Arg(20000);
BENCHMARK(ctrw_sampling<true>)->Name("ctrw_sampling/parallel")->Arg(20000);
BENCHMARK(fractional_tabulation<false>)->Name("tabulate/serial")->Arg(32);
BENCHMARK(fractional_tabulation<true>)->Name("tabulate/parallel")->Arg(32);

BENCHMARK_MAIN();
