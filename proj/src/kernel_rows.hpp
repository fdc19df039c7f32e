#pragma once

// Per-row loop bodies shared by the serial and OpenMP kernels.

#include <cmath>
#include <complex>
#include <numbers>
#include <span>
#include <vector>

#include "slepian/matrix.hpp"

namespace slepian::kernels::rows {

inline std::vector<double> sinc_table(std::size_t n, double bandwidth) {
  std::vector<double> t(n);
  if (n == 0) return t;
  t[0] = 2.0 * bandwidth;
  for (std::size_t d = 1; d < n; ++d) {
    const double dd = static_cast<double>(d);
    t[d] = std::sin(2.0 * std::numbers::pi * bandwidth * dd) / (std::numbers::pi * dd);
  }
  return t;
}

inline void toeplitz_row(Matrix& a, std::size_t i, std::span<const double> table) {
  const std::size_t n = a.cols();
  for (std::size_t j = 0; j < n; ++j) a(i, j) = table[i > j ? i - j : j - i];
}

// lower triangle only; mirrored afterwards
inline void nystrom_row(Matrix& s, std::size_t i, std::span<const double> x,
                        std::span<const double> sqw, double c) {
  for (std::size_t j = 0; j < i; ++j) {
    const double d = x[i] - x[j];
    s(i, j) = sqw[i] * sqw[j] * std::sin(c * d) / (std::numbers::pi * d);
  }
  s(i, i) = sqw[i] * sqw[i] * c / std::numbers::pi;
}

inline void mirror_row(Matrix& s, std::size_t i) {
  for (std::size_t j = i + 1; j < s.cols(); ++j) s(i, j) = s(j, i);
}

inline double symv_row(const Matrix& a, std::size_t i, std::size_t from,
                       std::span<const double> x) {
  const auto r = a.row(i);
  double acc = 0.0;
  for (std::size_t j = from; j < a.cols(); ++j) acc += r[j] * x[j - from];
  return acc;
}

inline void syr2_row(Matrix& a, std::size_t i, std::size_t from, std::span<const double> v,
                     std::span<const double> w) {
  auto r = a.row(i);
  const double vi = v[i - from];
  const double wi = w[i - from];
  for (std::size_t j = from; j < a.cols(); ++j) r[j] -= vi * w[j - from] + wi * v[j - from];
}

inline void reflect_row(Matrix& m, std::size_t r, std::size_t from, std::span<const double> v,
                        double beta) {
  auto row = m.row(r);
  double dot = 0.0;
  for (std::size_t j = 0; j < v.size(); ++j) dot += row[from + j] * v[j];
  const double s = beta * dot;
  for (std::size_t j = 0; j < v.size(); ++j) row[from + j] -= s * v[j];
}

inline void exp_series_row(CMatrix& out, std::size_t i, double x, double scale,
                           const Matrix& coeffs) {
  const std::size_t n = coeffs.rows();
  const std::size_t k = coeffs.cols();
  auto row = out.row(i);
  for (std::size_t c = 0; c < k; ++c) row[c] = 0.0;
  for (std::size_t m = 0; m < n; ++m) {
    const double freq =
        static_cast<double>(static_cast<long>(n) - 1 - 2 * static_cast<long>(m));
    const double phase = -std::numbers::pi * freq * scale * x;
    const std::complex<double> e(std::cos(phase), std::sin(phase));
    const auto cr = coeffs.row(m);
    for (std::size_t c = 0; c < k; ++c) row[c] += cr[c] * e;
  }
}

}  // namespace slepian::kernels::rows
