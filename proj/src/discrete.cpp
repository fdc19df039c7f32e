#include "slepian/discrete.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <stdexcept>

#include "slepian/errors.hpp"
#include "slepian/kernels.hpp"

namespace slepian::discrete {

namespace {

constexpr std::complex<double> kI{0.0, 1.0};

std::vector<double> column_of(const Matrix& m, std::size_t j) { return m.column(j); }

void check_mode(const DiscreteSpectrum& s, std::size_t k) {
  if (k >= s.size()) throw RangeError("mode index out of range");
}

}  // namespace

void DiscreteParams::validate() const {
  if (N < 1) throw RangeError("N must be >= 1");
  if (!(W > 0.0 && W < 0.5)) throw RangeError("W must lie in (0, 1/2)");
}

std::string to_string(Method m) { return m == Method::toeplitz ? "toeplitz" : "tridiag"; }

Method parse_method(const std::string& name) {
  if (name == "toeplitz") return Method::toeplitz;
  if (name == "tridiag") return Method::tridiag;
  throw std::invalid_argument("unknown method '" + name + "' (expected toeplitz or tridiag)");
}

std::size_t DiscreteSpectrum::trusted_count() const {
  std::size_t k = 0;
  while (k < values.size() && values[k] >= untrusted_floor) ++k;
  return k;
}

numkit::SymMatrix build_toeplitz(const DiscreteParams& p) {
  p.validate();
  return numkit::SymMatrix(kernels::active::toeplitz_sinc(static_cast<std::size_t>(p.N), p.W));
}

numkit::SymTridiag build_tridiag(const DiscreteParams& p) {
  p.validate();
  const auto n = static_cast<std::size_t>(p.N);
  numkit::SymTridiag t;
  t.diagonal.resize(n);
  t.off_diagonal.resize(n - 1);
  const double cw = std::cos(2.0 * std::numbers::pi * p.W);
  const double mid = 0.5 * (p.N - 1.0);
  for (std::size_t i = 0; i < n; ++i) {
    const double d = mid - static_cast<double>(i);
    t.diagonal[i] = cw * d * d;
  }
  for (std::size_t i = 0; i + 1 < n; ++i)
    t.off_diagonal[i] = 0.5 * (i + 1.0) * (p.N - static_cast<double>(i) - 1.0);
  return t;
}

void apply_sign_convention(Matrix& vectors, double tie_rel) {
  for (std::size_t j = 0; j < vectors.cols(); ++j) {
    double big = 0.0;
    for (std::size_t i = 0; i < vectors.rows(); ++i) big = std::max(big, std::abs(vectors(i, j)));
    if (big == 0.0) continue;
    std::size_t lead = 0;
    while (std::abs(vectors(lead, j)) < big * (1.0 - tie_rel)) ++lead;
    if (vectors(lead, j) < 0.0)
      for (std::size_t i = 0; i < vectors.rows(); ++i) vectors(i, j) = -vectors(i, j);
  }
}

// rho commutes with the reversal J, so it splits into even and odd blocks of
// half size. Solving them separately keeps every eigenvector exactly
// palindromic or antipalindromic, even inside near-degenerate clusters.
static void toeplitz_route(const numkit::SymMatrix& rho, double floor, DiscreteSpectrum& s) {
  const std::size_t n = rho.order();
  const std::size_t h = n / 2;
  const bool odd = n % 2 == 1;
  const std::size_t ne = h + (odd ? 1 : 0);
  const double r2 = std::sqrt(2.0);
  numkit::SymMatrix even(ne);
  numkit::SymMatrix oddb(h);
  for (std::size_t i = 0; i < h; ++i)
    for (std::size_t j = 0; j <= i; ++j) {
      even.set(i, j, rho(i, j) + rho(i, n - 1 - j));
      oddb.set(i, j, rho(i, j) - rho(i, n - 1 - j));
    }
  if (odd) {
    for (std::size_t i = 0; i < h; ++i) even.set(h, i, r2 * rho(i, h));
    even.set(h, h, rho(h, h));
  }
  const auto ee = numkit::eig_sym(even);
  numkit::EigenSystem eo;
  if (h > 0) eo = numkit::eig_sym(oddb);

  s.values.assign(n, 0.0);
  s.dpss = Matrix(n, n);
  std::size_t a = 0;
  std::size_t b = 0;
  for (std::size_t k = 0; k < n; ++k) {
    // within the floor the modes are a rounding tie; mode k has parity (-1)^k
    const bool take_even =
        b >= h || (a < ne && (ee.values[a] > eo.values[b] + floor ||
                              (ee.values[a] >= eo.values[b] - floor && k % 2 == 0)));
    if (take_even) {
      s.values[k] = ee.values[a];
      for (std::size_t i = 0; i < h; ++i) {
        s.dpss(i, k) = ee.vectors(i, a) / r2;
        s.dpss(n - 1 - i, k) = ee.vectors(i, a) / r2;
      }
      if (odd) s.dpss(h, k) = ee.vectors(h, a);
      ++a;
    } else {
      s.values[k] = eo.values[b];
      for (std::size_t i = 0; i < h; ++i) {
        s.dpss(i, k) = eo.vectors(i, b) / r2;
        s.dpss(n - 1 - i, k) = -eo.vectors(i, b) / r2;
      }
      ++b;
    }
  }
}

DiscreteSpectrum spectrum(const DiscreteParams& p, Method method, const Tolerances& tol) {
  p.validate();
  const auto n = static_cast<std::size_t>(p.N);
  DiscreteSpectrum s;
  s.params = p;
  s.method = method;
  s.untrusted_floor = tol.untrusted_floor;
  const auto rho = build_toeplitz(p);

  if (method == Method::toeplitz) {
    toeplitz_route(rho, tol.untrusted_floor, s);
  } else {
    const auto es = numkit::eig_symtridiag(build_tridiag(p));
    std::vector<double> rq(n);
    for (std::size_t k = 0; k < n; ++k) {
      const auto v = column_of(es.vectors, k);
      const auto rv = rho.apply(v);
      rq[k] = std::inner_product(v.begin(), v.end(), rv.begin(), 0.0);
    }
    // Start from the commuting-matrix order, oriented so the most concentrated
    // mode comes first, then let the Rayleigh quotients reorder adjacent modes
    // only where they disagree by more than the floor. Quotients closer than
    // that (near 1 and in the tail) are rounding noise.
    std::vector<std::size_t> head(n);
    std::iota(head.begin(), head.end(), std::size_t{0});
    if (n > 1 && rq[head.front()] < rq[head.back()]) std::reverse(head.begin(), head.end());
    for (std::size_t end = n; end > 1; --end) {
      bool swapped = false;
      for (std::size_t j = 0; j + 1 < end; ++j)
        if (rq[head[j + 1]] > rq[head[j]] + tol.untrusted_floor) {
          std::swap(head[j], head[j + 1]);
          swapped = true;
        }
      if (!swapped) break;
    }
    s.values.resize(n);
    s.dpss = Matrix(n, n);
    for (std::size_t j = 0; j < n; ++j) {
      s.values[j] = rq[head[j]];
      for (std::size_t i = 0; i < n; ++i) s.dpss(i, j) = es.vectors(i, head[j]);
    }
  }
  apply_sign_convention(s.dpss, tol.sign_tie_rel);

  const std::size_t trusted = s.trusted_count();
  for (std::size_t k = 0; k + 1 < trusted; ++k)
    if (s.values[k + 1] > s.values[k] + tol.untrusted_floor) {
      s.warnings.push_back("non-strict ordering at mode " + std::to_string(k));
      break;
    }
  if (trusted < n)
    s.warnings.push_back(std::to_string(n - trusted) + " eigenvalues below the untrusted floor");
  return s;
}

std::complex<double> eval_dpswf(const DiscreteSpectrum& s, std::size_t k, double x) {
  check_mode(s, k);
  const int N = s.params.N;
  std::complex<double> acc = 0.0;
  for (int m = 0; m < N; ++m) {
    const double phase = -std::numbers::pi * (N - 1 - 2 * m) * x;
    acc += s.dpss(static_cast<std::size_t>(m), k) * std::complex<double>(std::cos(phase), std::sin(phase));
  }
  return k % 2 == 0 ? acc : kI * acc;
}

CMatrix eval_dpswf_grid(const DiscreteSpectrum& s, std::size_t K, std::span<const double> points,
                        double scale) {
  if (K > s.size()) throw RangeError("mode count exceeds N");
  const std::size_t n = s.dpss.rows();
  Matrix coeffs(n, K);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t k = 0; k < K; ++k) coeffs(i, k) = s.dpss(i, k);
  CMatrix out = kernels::active::exp_series(points, scale, coeffs);
  for (std::size_t i = 0; i < out.rows(); ++i)
    for (std::size_t k = 1; k < K; k += 2) out(i, k) *= kI;
  return out;
}

double concentration(const DiscreteSpectrum& s, std::size_t j, std::size_t k) {
  check_mode(s, j);
  check_mode(s, k);
  const auto rho = build_toeplitz(s.params);
  const auto vj = column_of(s.dpss, j);
  const auto rk = rho.apply(column_of(s.dpss, k));
  return std::inner_product(vj.begin(), vj.end(), rk.begin(), 0.0);
}

Matrix concentration_matrix(const DiscreteSpectrum& s, std::size_t K) {
  if (K > s.size()) throw RangeError("mode count exceeds N");
  const auto rho = build_toeplitz(s.params);
  std::vector<std::vector<double>> rv(K);
  for (std::size_t k = 0; k < K; ++k) rv[k] = rho.apply(column_of(s.dpss, k));
  Matrix g(K, K);
  for (std::size_t j = 0; j < K; ++j) {
    const auto vj = column_of(s.dpss, j);
    for (std::size_t k = 0; k < K; ++k)
      g(j, k) = std::inner_product(vj.begin(), vj.end(), rv[k].begin(), 0.0);
  }
  return g;
}

double symmetry_check(int N, double W, Method method) {
  const auto lo = spectrum({N, W}, method);
  const auto hi = spectrum({N, 0.5 - W}, method);
  const auto n = static_cast<std::size_t>(N);
  double worst = 0.0;
  for (std::size_t k = 0; k < n; ++k)
    worst = std::max(worst, std::abs(hi.values[k] - (1.0 - lo.values[n - 1 - k])));
  return worst;
}

double extend_dpss(const DiscreteSpectrum& s, std::size_t k, long n, double tail_floor) {
  check_mode(s, k);
  const double lambda = s.values[k];
  if (!(lambda >= tail_floor))
    throw IllConditioned("extension needs lambda_k >= " + std::to_string(tail_floor));
  const double W = s.params.W;
  double acc = 0.0;
  for (long m = 0; m < s.params.N; ++m) {
    const long d = n - m;
    const double kern = d == 0 ? 2.0 * W
                               : std::sin(2.0 * std::numbers::pi * W * static_cast<double>(d)) /
                                     (std::numbers::pi * static_cast<double>(d));
    acc += kern * s.dpss(static_cast<std::size_t>(m), k);
  }
  return acc / lambda;
}

double commutation_defect(const DiscreteParams& p) {
  const auto rho = build_toeplitz(p);
  const auto sig = build_tridiag(p);
  const auto n = static_cast<std::size_t>(p.N);
  // (rho sigma)(i,j) = rho(i,j-1) s(j-1) + rho(i,j) d(j) + rho(i,j+1) s(j)
  auto rs = [&](std::size_t i, std::size_t j) {
    double acc = rho(i, j) * sig.diagonal[j];
    if (j > 0) acc += rho(i, j - 1) * sig.off_diagonal[j - 1];
    if (j + 1 < n) acc += rho(i, j + 1) * sig.off_diagonal[j];
    return acc;
  };
  double ss = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      // sigma rho = (rho sigma)^T
      const double d = rs(i, j) - rs(j, i);
      ss += d * d;
    }
  const double sig_f = sig.densify().frobenius_norm();
  return std::sqrt(ss) / (1.0 + rho.frobenius_norm() * sig_f);
}

}  // namespace slepian::discrete
