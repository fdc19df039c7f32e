#include "slepian/numkit.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <stdexcept>

#include "slepian/errors.hpp"
#include "slepian/kernels.hpp"

namespace slepian::numkit {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();
constexpr int kQlSweepsPerRow = 30;  // total budget, as in LAPACK

// P_n(x) and P_n'(x) by the three-term recurrence.
std::pair<double, double> legendre(int n, double x) {
  double p0 = 1.0;
  double p1 = x;
  for (int k = 2; k <= n; ++k) {
    const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
    p0 = p1;
    p1 = p2;
  }
  const double dp = n * (x * p1 - p0) / (x * x - 1.0);
  return {p1, dp};
}

// Symmetric tridiagonal QL with implicit Wilkinson shifts. `zt`, when non-null,
// holds eigenvector rows that receive every rotation (row i <-> diagonal i).
void tridiagonal_ql(std::vector<double>& d, std::vector<double> e, Matrix* zt) {
  const std::size_t n = d.size();
  if (n <= 1) return;
  e.resize(n, 0.0);
  e[n - 1] = 0.0;

  const std::size_t budget = kQlSweepsPerRow * n;
  std::size_t sweeps = 0;
  for (std::size_t l = 0; l < n; ++l) {
    std::size_t m = l;
    do {
      for (m = l; m + 1 < n; ++m) {
        const double dd = std::abs(d[m]) + std::abs(d[m + 1]);
        if (std::abs(e[m]) <= kEps * dd) break;
      }
      if (m == l) break;
      if (++sweeps > budget)
        throw NumericalFailure("tridiagonal QL did not converge", static_cast<std::ptrdiff_t>(l));

      double g = (d[l + 1] - d[l]) / (2.0 * e[l]);
      double r = std::hypot(g, 1.0);
      g = d[m] - d[l] + e[l] / (g + std::copysign(r, g));
      double s = 1.0;
      double c = 1.0;
      double p = 0.0;
      bool deflated = false;
      for (std::size_t ii = m; ii-- > l;) {
        const double f = s * e[ii];
        const double b = c * e[ii];
        r = std::hypot(f, g);
        e[ii + 1] = r;
        if (r == 0.0) {
          d[ii + 1] -= p;
          e[m] = 0.0;
          deflated = true;
          break;
        }
        s = f / r;
        c = g / r;
        g = d[ii + 1] - p;
        r = (d[ii] - g) * s + 2.0 * c * b;
        p = s * r;
        d[ii + 1] = g + p;
        g = c * r - b;
        if (zt != nullptr) {
          auto lo = zt->row(ii);
          auto hi = zt->row(ii + 1);
          for (std::size_t k = 0; k < lo.size(); ++k) {
            const double t = hi[k];
            hi[k] = s * lo[k] + c * t;
            lo[k] = c * lo[k] - s * t;
          }
        }
      }
      if (deflated) continue;
      d[l] -= p;
      e[l] = g;
      e[m] = 0.0;
    } while (m != l);
  }
}

struct Tridiagonalization {
  std::vector<double> diagonal;
  std::vector<double> off;
  std::vector<std::vector<double>> reflectors;  // reflector k acts on indices k+1..
  std::vector<double> betas;
};

Tridiagonalization householder_tridiagonalize(Matrix a) {
  const std::size_t n = a.rows();
  Tridiagonalization out;
  out.diagonal.resize(n);
  out.off.resize(n > 0 ? n - 1 : 0);
  for (std::size_t k = 0; k + 2 < n; ++k) {
    const std::size_t len = n - k - 1;
    std::vector<double> v(len);
    double scale = 0.0;
    for (std::size_t i = 0; i < len; ++i) {
      v[i] = a(k + 1 + i, k);
      scale = std::max(scale, std::abs(v[i]));
    }
    double beta = 0.0;
    double alpha = v[0];
    if (scale > 0.0) {
      double ss = 0.0;
      for (double x : v) ss += (x / scale) * (x / scale);
      const double norm = scale * std::sqrt(ss);
      alpha = -std::copysign(norm, v[0]);
      v[0] -= alpha;
      double vv = 0.0;
      for (double x : v) vv += x * x;
      if (vv > 0.0) beta = 2.0 / vv;
    }
    if (beta != 0.0) {
      std::vector<double> p(len);
      kernels::active::symv(a, k + 1, v, p);
      double pv = 0.0;
      for (std::size_t i = 0; i < len; ++i) {
        p[i] *= beta;
        pv += p[i] * v[i];
      }
      const double kk = 0.5 * beta * pv;
      std::vector<double> w(len);
      for (std::size_t i = 0; i < len; ++i) w[i] = p[i] - kk * v[i];
      kernels::active::syr2(a, k + 1, v, w);
    }
    out.diagonal[k] = a(k, k);
    out.off[k] = alpha;
    out.reflectors.push_back(std::move(v));
    out.betas.push_back(beta);
  }
  if (n >= 2) {
    out.diagonal[n - 2] = a(n - 2, n - 2);
    out.off[n - 2] = a(n - 1, n - 2);
  }
  if (n >= 1) out.diagonal[n - 1] = a(n - 1, n - 1);
  return out;
}

std::vector<std::size_t> descending_order(const std::vector<double>& values) {
  std::vector<std::size_t> idx(values.size());
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  std::stable_sort(idx.begin(), idx.end(),
                   [&](std::size_t a, std::size_t b) { return values[a] > values[b]; });
  return idx;
}

Matrix identity(std::size_t n) {
  Matrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

EigenSystem assemble(const std::vector<double>& d, const Matrix& zt, std::string method) {
  const std::size_t n = d.size();
  const auto order = descending_order(d);
  EigenSystem es;
  es.method = std::move(method);
  es.values.resize(n);
  es.vectors = Matrix(n, n);
  for (std::size_t j = 0; j < n; ++j) {
    es.values[j] = d[order[j]];
    const auto src = zt.row(order[j]);
    for (std::size_t i = 0; i < n; ++i) es.vectors(i, j) = src[i];
  }
  return es;
}

double max_residual(const Matrix& a, const EigenSystem& es) {
  const std::size_t n = es.order();
  double worst = 0.0;
  std::vector<double> v(n);
  std::vector<double> av(n);
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t i = 0; i < n; ++i) v[i] = es.vectors(i, j);
    kernels::active::symv(a, 0, v, av);
    double ss = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double r = av[i] - es.values[j] * v[i];
      ss += r * r;
    }
    worst = std::max(worst, std::sqrt(ss));
  }
  return worst;
}

}  // namespace

QuadratureRule QuadratureRule::mapped(double a, double b) const {
  QuadratureRule out;
  const double half = 0.5 * (b - a);
  const double mid = 0.5 * (a + b);
  out.nodes.resize(size());
  out.weights.resize(size());
  for (std::size_t i = 0; i < size(); ++i) {
    out.nodes[i] = mid + half * nodes[i];
    out.weights[i] = half * weights[i];
  }
  return out;
}

SymMatrix::SymMatrix(Matrix m) : m_(std::move(m)) {
  if (m_.rows() != m_.cols()) throw std::invalid_argument("SymMatrix: matrix is not square");
  for (std::size_t i = 0; i < m_.rows(); ++i)
    for (std::size_t j = 0; j < i; ++j)
      if (m_(i, j) != m_(j, i)) throw std::invalid_argument("SymMatrix: matrix is not symmetric");
}

std::vector<double> SymMatrix::apply(std::span<const double> x) const {
  std::vector<double> y(order());
  kernels::active::symv(m_, 0, x, y);
  return y;
}

double SymMatrix::frobenius_norm() const {
  double ss = 0.0;
  for (double v : m_.data()) ss += v * v;
  return std::sqrt(ss);
}

SymMatrix SymTridiag::densify() const {
  validate();
  const std::size_t n = order();
  SymMatrix m(n);
  for (std::size_t i = 0; i < n; ++i) m.set(i, i, diagonal[i]);
  for (std::size_t i = 0; i + 1 < n; ++i) m.set(i + 1, i, off_diagonal[i]);
  return m;
}

void SymTridiag::validate() const {
  if (diagonal.empty()) throw std::invalid_argument("SymTridiag: empty diagonal");
  if (off_diagonal.size() + 1 != diagonal.size())
    throw std::invalid_argument("SymTridiag: off-diagonal must have length n-1");
}

QuadratureRule gauss_legendre(int order) {
  if (order < 1) throw std::invalid_argument("gauss_legendre: order must be >= 1");
  const auto n = static_cast<std::size_t>(order);
  QuadratureRule rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  const std::size_t half = (n + 1) / 2;
  for (std::size_t i = 0; i < half; ++i) {
    // i-th largest root
    double x = std::cos(std::numbers::pi * (static_cast<double>(i) + 0.75) / (order + 0.5));
    double dp = 0.0;
    bool converged = false;
    for (int it = 0; it < 100; ++it) {
      const auto [p, d] = legendre(order, x);
      dp = d;
      const double dx = p / d;
      x -= dx;
      if (std::abs(dx) <= 4.0 * kEps) {
        const auto [p2, d2] = legendre(order, x);
        x -= p2 / d2;
        dp = d2;
        converged = true;
        break;
      }
    }
    if (!converged)
      throw NumericalFailure("gauss_legendre: Newton iteration did not converge",
                             static_cast<std::ptrdiff_t>(i));
    if (n % 2 == 1 && i == half - 1) x = 0.0;
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    rule.nodes[n - 1 - i] = x;
    rule.nodes[i] = -x;
    rule.weights[n - 1 - i] = w;
    rule.weights[i] = w;
  }
  if (n % 2 == 1) {
    // recompute the central weight at exactly x = 0
    const auto [p, d] = legendre(order, 0.0);
    (void)p;
    rule.weights[n / 2] = 2.0 / (d * d);
  }
  return rule;
}

EigenSystem eig_sym(const SymMatrix& a) {
  const std::size_t n = a.order();
  if (n == 0) throw std::invalid_argument("eig_sym: empty matrix");
  auto tri = householder_tridiagonalize(a.dense());
  Matrix zt = identity(n);
  tridiagonal_ql(tri.diagonal, tri.off, &zt);
  for (std::size_t k = tri.reflectors.size(); k-- > 0;)
    kernels::active::reflect_rows(zt, k + 1, tri.reflectors[k], tri.betas[k]);
  EigenSystem es = assemble(tri.diagonal, zt, "householder-ql");
  es.residual = max_residual(a.dense(), es);
  return es;
}

std::vector<double> eigvals_sym(const SymMatrix& a) {
  if (a.order() == 0) throw std::invalid_argument("eigvals_sym: empty matrix");
  auto tri = householder_tridiagonalize(a.dense());
  tridiagonal_ql(tri.diagonal, tri.off, nullptr);
  std::vector<double> d = std::move(tri.diagonal);
  std::sort(d.begin(), d.end(), std::greater<>());
  return d;
}

EigenSystem eig_symtridiag(const SymTridiag& t) {
  t.validate();
  std::vector<double> d = t.diagonal;
  Matrix zt = identity(t.order());
  tridiagonal_ql(d, t.off_diagonal, &zt);
  EigenSystem es = assemble(d, zt, "tridiag-ql");
  es.residual = max_residual(t.densify().dense(), es);
  return es;
}

std::vector<double> eigvals_symtridiag(const SymTridiag& t) {
  t.validate();
  std::vector<double> d = t.diagonal;
  tridiagonal_ql(d, t.off_diagonal, nullptr);
  std::sort(d.begin(), d.end(), std::greater<>());
  return d;
}

double spectral_norm_sym(const SymMatrix& a) {
  const auto v = eigvals_sym(a);
  return std::max(std::abs(v.front()), std::abs(v.back()));
}

EigenDefects eigen_defects(const SymMatrix& a, const EigenSystem& es) {
  EigenDefects out;
  const std::size_t n = es.order();
  for (std::size_t i = 0; i < n; ++i) {
    out.norm_estimate = std::max(out.norm_estimate, std::abs(es.values[i]));
    if (i + 1 < n && es.values[i] < es.values[i + 1]) out.descending = false;
    for (std::size_t j = 0; j <= i; ++j) {
      double dot = 0.0;
      for (std::size_t k = 0; k < n; ++k) dot += es.vectors(k, i) * es.vectors(k, j);
      out.orthonormality = std::max(out.orthonormality, std::abs(dot - (i == j ? 1.0 : 0.0)));
    }
  }
  out.residual = max_residual(a.dense(), es);
  return out;
}

}  // namespace slepian::numkit
