// Serial reference kernels against their OpenMP counterparts.

#include <benchmark/benchmark.h>

#include <cmath>
#include <vector>

#include "slepian/kernels.hpp"
#include "slepian/numkit.hpp"

using namespace slepian;

namespace {

template <typename Fn>
void toeplitz(benchmark::State& st, Fn fn) {
  const auto n = static_cast<std::size_t>(st.range(0));
  for (auto _ : st) benchmark::DoNotOptimize(fn(n, 0.3));
  st.SetComplexityN(st.range(0));
}

template <typename Fn>
void nystrom(benchmark::State& st, Fn fn) {
  const auto rule = numkit::gauss_legendre(static_cast<int>(st.range(0)));
  for (auto _ : st) benchmark::DoNotOptimize(fn(rule.nodes, rule.weights, 56.5));
}

template <typename Fn>
void symv(benchmark::State& st, Fn fn) {
  const auto n = static_cast<std::size_t>(st.range(0));
  const Matrix a = kernels::serial::toeplitz_sinc(n, 0.3);
  std::vector<double> x(n, 1.0), y(n);
  for (auto _ : st) {
    fn(a, 0, x, y);
    benchmark::DoNotOptimize(y.data());
  }
}

template <typename Fn>
void syr2(benchmark::State& st, Fn fn) {
  const auto n = static_cast<std::size_t>(st.range(0));
  Matrix a = kernels::serial::toeplitz_sinc(n, 0.3);
  std::vector<double> v(n, 1e-3), w(n, 2e-3);
  for (auto _ : st) {
    fn(a, 0, v, w);
    benchmark::ClobberMemory();
  }
}

template <typename Fn>
void exp_series(benchmark::State& st, Fn fn) {
  const auto m = static_cast<std::size_t>(st.range(0));
  std::vector<double> x(m);
  for (std::size_t i = 0; i < m; ++i) x[i] = -1.0 + 2.0 * static_cast<double>(i) / (m - 1.0);
  const Matrix c = kernels::serial::toeplitz_sinc(60, 0.3);
  for (auto _ : st) benchmark::DoNotOptimize(fn(x, 0.3, c));
}

void tensor(benchmark::State& st, bool parallel) {
  const auto rule = numkit::gauss_legendre(static_cast<int>(st.range(0)));
  auto f = [](double x, double y) { return std::cos(30.0 * (x - y)); };
  for (auto _ : st) {
    const double v =
        parallel ? kernels::omp::tensor_quadrature(rule.nodes, rule.weights, rule.nodes,
                                                   rule.weights, f)
                 : kernels::serial::tensor_quadrature(rule.nodes, rule.weights, rule.nodes,
                                                      rule.weights, f);
    benchmark::DoNotOptimize(v);
  }
}

void eig(benchmark::State& st) {
  const numkit::SymMatrix a(kernels::serial::toeplitz_sinc(static_cast<std::size_t>(st.range(0)), 0.3));
  for (auto _ : st) benchmark::DoNotOptimize(numkit::eig_sym(a));
}

}  // namespace

BENCHMARK_CAPTURE(toeplitz, serial, kernels::serial::toeplitz_sinc)->Arg(256)->Arg(1024);
BENCHMARK_CAPTURE(toeplitz, omp, kernels::omp::toeplitz_sinc)->Arg(256)->Arg(1024);
BENCHMARK_CAPTURE(nystrom, serial, kernels::serial::nystrom_sinc)->Arg(256)->Arg(1024);
BENCHMARK_CAPTURE(nystrom, omp, kernels::omp::nystrom_sinc)->Arg(256)->Arg(1024);
BENCHMARK_CAPTURE(symv, serial, kernels::serial::symv)->Arg(512)->Arg(2048);
BENCHMARK_CAPTURE(symv, omp, kernels::omp::symv)->Arg(512)->Arg(2048);
BENCHMARK_CAPTURE(syr2, serial, kernels::serial::syr2)->Arg(512)->Arg(2048);
BENCHMARK_CAPTURE(syr2, omp, kernels::omp::syr2)->Arg(512)->Arg(2048);
BENCHMARK_CAPTURE(exp_series, serial, kernels::serial::exp_series)->Arg(4096);
BENCHMARK_CAPTURE(exp_series, omp, kernels::omp::exp_series)->Arg(4096);
BENCHMARK_CAPTURE(tensor, serial, false)->Arg(512);
BENCHMARK_CAPTURE(tensor, omp, true)->Arg(512);
BENCHMARK(eig)->Arg(128)->Arg(512);

BENCHMARK_MAIN();
