#pragma once

// Data-parallel inner loops. `serial` is the reference implementation kept for
// testing and benchmarking; `omp` distributes independent rows over OpenMP
// threads. Each output element is produced by the same sequential arithmetic in
// both variants, so results are bitwise identical regardless of thread count.

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

#include "slepian/matrix.hpp"

namespace slepian::kernels {

namespace detail {

template <typename F>
double tensor_row(double x, std::span<const double> ys, std::span<const double> ws, F&& f) {
  double acc = 0.0;
  for (std::size_t j = 0; j < ys.size(); ++j) acc += ws[j] * f(x, ys[j]);
  return acc;
}

}  // namespace detail

#define SLEPIAN_KERNEL_DECLS                                                                   \
  /* A(i,j) = table[|i-j|], table[d] = sin(2 pi W d)/(pi d), table[0] = 2W */                  \
  Matrix toeplitz_sinc(std::size_t n, double bandwidth);                                       \
  /* S(i,j) = sqrt(w_i w_j) sin(c(x_i-x_j))/(pi(x_i-x_j)), S(i,i) = c w_i / pi */              \
  Matrix nystrom_sinc(std::span<const double> nodes, std::span<const double> weights,          \
                      double c);                                                               \
  /* y = A x for the trailing block A[from.., from..] */                                       \
  void symv(const Matrix& a, std::size_t from, std::span<const double> x, std::span<double> y); \
  /* A[from.., from..] -= v w^T + w v^T */                                                     \
  void syr2(Matrix& a, std::size_t from, std::span<const double> v, std::span<const double> w); \
  /* rows(r, from..) -= beta (rows(r, from..) . v) v^T for every row r */                      \
  void reflect_rows(Matrix& rows, std::size_t from, std::span<const double> v, double beta);   \
  /* out(i,k) = sum_n coeffs(n,k) exp(-i pi (N-1-2n) scale x_i), N = coeffs.rows() */          \
  CMatrix exp_series(std::span<const double> points, double scale, const Matrix& coeffs);

namespace serial {
SLEPIAN_KERNEL_DECLS

/// sum_i wx_i sum_j wy_j f(x_i, y_j)
template <typename F>
double tensor_quadrature(std::span<const double> xs, std::span<const double> wx,
                         std::span<const double> ys, std::span<const double> wy, F&& f) {
  std::vector<double> rows(xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i) rows[i] = detail::tensor_row(xs[i], ys, wy, f);
  double acc = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) acc += wx[i] * rows[i];
  return acc;
}
}  // namespace serial

namespace omp {
SLEPIAN_KERNEL_DECLS

template <typename F>
double tensor_quadrature(std::span<const double> xs, std::span<const double> wx,
                         std::span<const double> ys, std::span<const double> wy, F&& f) {
  std::vector<double> rows(xs.size());
  const auto n = static_cast<std::ptrdiff_t>(xs.size());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    const auto u = static_cast<std::size_t>(i);
    rows[u] = detail::tensor_row(xs[u], ys, wy, f);
  }
  double acc = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) acc += wx[i] * rows[i];
  return acc;
}
}  // namespace omp

#undef SLEPIAN_KERNEL_DECLS

namespace active = omp;

}  // namespace slepian::kernels
