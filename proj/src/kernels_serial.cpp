#include <cmath>
#include <vector>

#include "kernel_rows.hpp"
#include "slepian/kernels.hpp"

namespace slepian::kernels::serial {

namespace {
using Index = std::ptrdiff_t;
Index as_index(std::size_t n) { return static_cast<Index>(n); }
}  // namespace

Matrix toeplitz_sinc(std::size_t n, double bandwidth) {
  const auto table = rows::sinc_table(n, bandwidth);
  Matrix a(n, n);
  for (Index i = 0; i < as_index(n); ++i)
    rows::toeplitz_row(a, static_cast<std::size_t>(i), table);
  return a;
}

Matrix nystrom_sinc(std::span<const double> nodes, std::span<const double> weights, double c) {
  const std::size_t m = nodes.size();
  std::vector<double> sqw(m);
  for (std::size_t i = 0; i < m; ++i) sqw[i] = std::sqrt(weights[i]);
  Matrix s(m, m);
  for (Index i = 0; i < as_index(m); ++i)
    rows::nystrom_row(s, static_cast<std::size_t>(i), nodes, sqw, c);
  for (Index i = 0; i < as_index(m); ++i) rows::mirror_row(s, static_cast<std::size_t>(i));
  return s;
}

void symv(const Matrix& a, std::size_t from, std::span<const double> x, std::span<double> y) {
  const std::size_t n = a.rows();
  for (Index i = as_index(from); i < as_index(n); ++i) {
    const auto u = static_cast<std::size_t>(i);
    y[u - from] = rows::symv_row(a, u, from, x);
  }
}

void syr2(Matrix& a, std::size_t from, std::span<const double> v, std::span<const double> w) {
  const std::size_t n = a.rows();
  for (Index i = as_index(from); i < as_index(n); ++i)
    rows::syr2_row(a, static_cast<std::size_t>(i), from, v, w);
}

void reflect_rows(Matrix& m, std::size_t from, std::span<const double> v, double beta) {
  for (Index r = 0; r < as_index(m.rows()); ++r)
    rows::reflect_row(m, static_cast<std::size_t>(r), from, v, beta);
}

CMatrix exp_series(std::span<const double> points, double scale, const Matrix& coeffs) {
  CMatrix out(points.size(), coeffs.cols());
  for (Index i = 0; i < as_index(points.size()); ++i) {
    const auto u = static_cast<std::size_t>(i);
    rows::exp_series_row(out, u, points[u], scale, coeffs);
  }
  return out;
}

}  // namespace slepian::kernels::serial
