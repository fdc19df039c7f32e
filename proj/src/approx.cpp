#include "slepian/approx.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "slepian/errors.hpp"
#include "slepian/kernels.hpp"
#include "slepian/numkit.hpp"

namespace slepian::approx {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr Complex kI{0.0, 1.0};

double sinc(double t) {
  if (std::abs(t) < 1e-4) return 1.0 - t * t / 6.0;
  return std::sin(t) / t;
}

// int_a^b e^{i mu x} dx
Complex exp_integral(double mu, double a, double b) {
  const double p = b - a;
  const double mid = 0.5 * (a + b);
  return p * sinc(0.5 * mu * p) * Complex(std::cos(mu * mid), std::sin(mu * mid));
}

Complex mode_phase(std::size_t k) { return k % 2 == 0 ? Complex(1.0) : kI; }

// Basis vectors sampled on a weighted grid together with their expansion in
// the raw modes, so that they can be evaluated anywhere.
struct Basis {
  CMatrix grid;    // grid(i, j) = sqrt(w_i) q_j(x_i)
  CMatrix coeffs;  // q_j = prefactor * sum_k coeffs(k, j) U_k(scale x)
  std::vector<int> modes;
  std::vector<int> excluded;
  int direct = 0;
};

struct Setup {
  numkit::QuadratureRule coef_rule;   // where coefficients are computed
  numkit::QuadratureRule resid_rule;  // where the residual is measured
  double scale = 1.0;                 // U_k evaluated at scale * x
  double prefactor = 1.0;
  double lo = -0.5;  // residual interval
  double hi = 0.5;
};

int default_quadrature(int N, const ProjectionOptions& opt) {
  return opt.quadrature_order > 0 ? opt.quadrature_order : std::max(4 * N, 256);
}

void check_K(const discrete::DiscreteSpectrum& s, int K) {
  if (K < 1 || K > static_cast<int>(s.size())) throw RangeError("K must lie in [1, N]");
}

Setup native_setup(const discrete::DiscreteSpectrum& s, const ProjectionOptions& opt) {
  const int M = default_quadrature(s.params.N, opt);
  const auto base = numkit::gauss_legendre(M);
  const double W = s.params.W;
  return {base.mapped(-0.5, 0.5), base.mapped(-W, W), 1.0, 1.0, -W, W};
}

Setup dilated_setup(const discrete::DiscreteSpectrum& s, const ProjectionOptions& opt) {
  const int M = default_quadrature(s.params.N, opt);
  const auto rule = numkit::gauss_legendre(M);
  const double W = s.params.W;
  return {rule, rule, W, std::sqrt(W), -1.0, 1.0};
}

Basis native_basis(const discrete::DiscreteSpectrum& s, const Setup& st, int K) {
  const auto k = static_cast<std::size_t>(K);
  const CMatrix u = discrete::eval_dpswf_grid(s, k, st.coef_rule.nodes);
  Basis b;
  b.grid = CMatrix(u.rows(), k);
  b.coeffs = CMatrix(s.size(), k);
  for (std::size_t i = 0; i < u.rows(); ++i) {
    const double sw = std::sqrt(st.coef_rule.weights[i]);
    for (std::size_t j = 0; j < k; ++j) b.grid(i, j) = sw * u(i, j);
  }
  for (std::size_t j = 0; j < k; ++j) {
    b.coeffs(j, j) = 1.0;
    b.modes.push_back(static_cast<int>(j));
  }
  b.direct = K;
  return b;
}

Basis dilated_basis(const discrete::DiscreteSpectrum& s, const Setup& st, int K,
                    const ProjectionOptions& opt) {
  const auto k = static_cast<std::size_t>(K);
  const auto& rule = st.coef_rule;
  const std::size_t M = rule.size();
  const CMatrix u = discrete::eval_dpswf_grid(s, k, rule.nodes, st.scale);
  Basis b;
  std::vector<std::vector<Complex>> qs;
  std::vector<std::vector<Complex>> gs;
  for (std::size_t m = 0; m < k; ++m) {
    const double lambda = s.values[m];
    if (lambda >= opt.lambda_floor) ++b.direct;
    std::vector<Complex> c(M);
    for (std::size_t i = 0; i < M; ++i)
      c[i] = std::sqrt(rule.weights[i]) * st.prefactor * u(i, m);
    std::vector<Complex> g(k, 0.0);
    g[m] = 1.0;

    if (!opt.stabilized) {
      if (lambda < opt.lambda_floor) {
        b.excluded.push_back(static_cast<int>(m));
        continue;
      }
      const double inv = 1.0 / std::sqrt(lambda);
      for (auto& v : c) v *= inv;
      g[m] = inv;
    } else {
      for (int pass = 0; pass < 2; ++pass)
        for (std::size_t q = 0; q < qs.size(); ++q) {
          Complex h = 0.0;
          for (std::size_t i = 0; i < M; ++i) h += std::conj(qs[q][i]) * c[i];
          for (std::size_t i = 0; i < M; ++i) c[i] -= h * qs[q][i];
          for (std::size_t r = 0; r < k; ++r) g[r] -= h * gs[q][r];
        }
      double nn = 0.0;
      for (const auto& v : c) nn += std::norm(v);
      if (nn <= opt.drop_floor) {
        b.excluded.push_back(static_cast<int>(m));
        continue;
      }
      const double inv = 1.0 / std::sqrt(nn);
      for (auto& v : c) v *= inv;
      for (auto& v : g) v *= inv;
    }
    qs.push_back(std::move(c));
    gs.push_back(std::move(g));
    b.modes.push_back(static_cast<int>(m));
  }
  if (qs.empty()) throw IllConditioned("every requested mode is below the floor");
  b.grid = CMatrix(M, qs.size());
  b.coeffs = CMatrix(s.size(), qs.size());
  for (std::size_t j = 0; j < qs.size(); ++j) {
    for (std::size_t i = 0; i < M; ++i) b.grid(i, j) = qs[j][i];
    for (std::size_t r = 0; r < k; ++r) b.coeffs(r, j) = gs[j][r];
  }
  return b;
}

// sum_n d_n e^{-i pi (N-1-2n) scale x}
std::vector<Complex> trig_eval(const std::vector<Complex>& d, std::span<const double> x,
                               double scale) {
  Matrix parts(d.size(), 2);
  for (std::size_t n = 0; n < d.size(); ++n) {
    parts(n, 0) = d[n].real();
    parts(n, 1) = d[n].imag();
  }
  const CMatrix e = kernels::active::exp_series(x, scale, parts);
  std::vector<Complex> out(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) out[i] = e(i, 0) + kI * e(i, 1);
  return out;
}

// Trigonometric coefficients of sum_{j < J} beta_j q_j.
std::vector<Complex> combined(const discrete::DiscreteSpectrum& s, const Basis& b,
                              const std::vector<Complex>& beta, std::size_t J, double prefactor) {
  const std::size_t N = s.size();
  std::vector<Complex> a(N, 0.0);
  for (std::size_t j = 0; j < J; ++j)
    for (std::size_t r = 0; r < N; ++r) a[r] += b.coeffs(r, j) * beta[j];
  std::vector<Complex> d(N, 0.0);
  for (std::size_t r = 0; r < N; ++r) {
    if (a[r] == 0.0) continue;
    const Complex ar = prefactor * mode_phase(r) * a[r];
    for (std::size_t n = 0; n < N; ++n) d[n] += ar * s.dpss(n, r);
  }
  return d;
}

std::vector<double> sup_grid(const Setup& st, int points) {
  std::vector<double> x = st.resid_rule.nodes;
  const int p = std::max(points, 2);
  for (int i = 0; i < p; ++i) x.push_back(st.lo + (st.hi - st.lo) * i / (p - 1.0));
  return x;
}

std::vector<ProjectionResult> run(const TestFunction& f, const discrete::DiscreteSpectrum& s,
                                  Domain domain, int K_max, bool curve,
                                  const ProjectionOptions& opt) {
  check_K(s, K_max);
  const Setup st = domain == Domain::native ? native_setup(s, opt) : dilated_setup(s, opt);
  const Basis b =
      domain == Domain::native ? native_basis(s, st, K_max) : dilated_basis(s, st, K_max, opt);

  const std::size_t M = st.coef_rule.size();
  const std::size_t J = b.modes.size();
  std::vector<Complex> fw(M);
  for (std::size_t i = 0; i < M; ++i)
    fw[i] = std::sqrt(st.coef_rule.weights[i]) * f(st.coef_rule.nodes[i]);
  std::vector<Complex> beta(J, 0.0);
  for (std::size_t j = 0; j < J; ++j)
    for (std::size_t i = 0; i < M; ++i) beta[j] += std::conj(b.grid(i, j)) * fw[i];

  const auto xs = sup_grid(st, opt.sup_points);
  std::vector<Complex> fx(xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i) fx[i] = f(xs[i]);
  const std::size_t R = st.resid_rule.size();

  // When the residual is measured on the coefficient grid it is taken against
  // the grid basis directly, which is orthonormal there; the off-grid
  // evaluation below amplifies rounding through the expansion coefficients.
  const bool on_grid = domain == Domain::dilated;
  std::vector<Complex> rgrid = fw;
  std::size_t removed = 0;

  std::vector<ProjectionResult> out;
  const int K_first = curve ? 1 : K_max;
  for (int K = K_first; K <= K_max; ++K) {
    std::size_t used = 0;
    while (used < J && b.modes[used] < K) ++used;
    ProjectionResult r;
    r.K = K;
    r.domain = domain;
    r.quadrature_order = static_cast<int>(M);
    r.coefficients.assign(beta.begin(), beta.begin() + static_cast<std::ptrdiff_t>(used));
    r.modes.assign(b.modes.begin(), b.modes.begin() + static_cast<std::ptrdiff_t>(used));
    for (int m : b.excluded)
      if (m < K) r.excluded.push_back(m);
    r.direct_modes = 0;
    for (int m = 0; m < K; ++m)
      if (s.values[static_cast<std::size_t>(m)] >= opt.lambda_floor) ++r.direct_modes;

    const auto d = combined(s, b, beta, used, st.prefactor);
    const auto approx = trig_eval(d, xs, st.scale);
    double ss = 0.0;
    double sup = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
      const double e = std::abs(fx[i] - approx[i]);
      sup = std::max(sup, e);
      if (i < R) ss += st.resid_rule.weights[i] * e * e;
    }
    if (on_grid) {
      for (; removed < used; ++removed)
        for (std::size_t i = 0; i < M; ++i) rgrid[i] -= beta[removed] * b.grid(i, removed);
      ss = 0.0;
      for (const auto& v : rgrid) ss += std::norm(v);
    }
    r.residual_l2 = std::sqrt(ss);
    r.residual_sup = sup;
    out.push_back(std::move(r));
  }
  return out;
}

double cos_pair_integral(double wj, double wk, double a, double b) {
  return 0.5 * (exp_integral(wj - wk, a, b).real() + exp_integral(wj + wk, a, b).real());
}

}  // namespace

int weierstrass_terms(double s, double tol) {
  if (!(s > 0.0)) throw RangeError("Weierstrass exponent must be positive");
  int K = 0;
  while (std::pow(2.0, -K * s) > tol) ++K;
  return K;
}

double weierstrass(double s, double x, double tol) {
  const int K = weierstrass_terms(s, tol);
  double acc = 0.0;
  for (int k = 0; k <= K; ++k) acc += std::cos(std::ldexp(x, k)) * std::pow(2.0, -k * s);
  return acc;
}

TestFunction TestFunction::sinc(double alpha) {
  if (!(alpha != 0.0) || !std::isfinite(alpha)) throw RangeError("alpha must be nonzero");
  TestFunction t;
  t.kind_ = Kind::sinc;
  t.label_ = "sinc";
  t.eval_ = [alpha](double x) { return Complex(approx::sinc(alpha * x)); };
  return t;
}

TestFunction TestFunction::weierstrass(double s, double tol) {
  const int K = weierstrass_terms(s, tol);
  TestFunction t;
  t.kind_ = Kind::weierstrass;
  t.label_ = "weierstrass";
  for (int k = 0; k <= K; ++k) t.cos_.emplace_back(std::ldexp(1.0, k), std::pow(2.0, -k * s));
  t.eval_ = [s, tol](double x) { return Complex(approx::weierstrass(s, x, tol)); };
  return t;
}

TestFunction TestFunction::samples(std::vector<double> x, std::vector<double> y) {
  if (x.size() != y.size()) throw std::invalid_argument("samples: x and y differ in length");
  if (x.size() < 2) throw std::invalid_argument("samples: need at least two rows");
  for (std::size_t i = 0; i + 1 < x.size(); ++i)
    if (!(x[i] < x[i + 1])) throw std::invalid_argument("samples: x must be strictly increasing");
  TestFunction t;
  t.kind_ = Kind::samples;
  t.label_ = "samples";
  t.eval_ = [x = std::move(x), y = std::move(y)](double v) {
    if (v <= x.front()) return Complex(y.front());
    if (v >= x.back()) return Complex(y.back());
    const auto it = std::upper_bound(x.begin(), x.end(), v);
    const auto i = static_cast<std::size_t>(it - x.begin()) - 1;
    const double t = (v - x[i]) / (x[i + 1] - x[i]);
    return Complex(y[i] + t * (y[i + 1] - y[i]));
  };
  return t;
}

TestFunction TestFunction::custom(std::function<Complex(double)> f, std::string label) {
  TestFunction t;
  t.kind_ = Kind::custom;
  t.label_ = std::move(label);
  t.eval_ = std::move(f);
  return t;
}

ProjectionResult project_native(const TestFunction& f, const discrete::DiscreteSpectrum& s, int K,
                                const ProjectionOptions& opt) {
  return run(f, s, Domain::native, K, false, opt).front();
}

ProjectionResult project_dilated(const TestFunction& f, const discrete::DiscreteSpectrum& s, int K,
                                 const ProjectionOptions& opt) {
  return run(f, s, Domain::dilated, K, false, opt).front();
}

std::vector<ProjectionResult> residual_curve(const TestFunction& f,
                                             const discrete::DiscreteSpectrum& s, Domain domain,
                                             int K_max, const ProjectionOptions& opt) {
  return run(f, s, domain, K_max, true, opt);
}

double l2_norm(const TestFunction& f, double a, double b, int order) {
  if (!(b > a)) throw RangeError("empty interval");
  const auto& cs = f.cosine_series();
  if (!cs.empty()) {
    double ss = 0.0;
    for (const auto& [wj, aj] : cs)
      for (const auto& [wk, ak] : cs) ss += aj * ak * cos_pair_integral(wj, wk, a, b);
    return std::sqrt(std::max(ss, 0.0));
  }
  const auto rule = numkit::gauss_legendre(order).mapped(a, b);
  double ss = 0.0;
  for (std::size_t i = 0; i < rule.size(); ++i) ss += rule.weights[i] * std::norm(f(rule.nodes[i]));
  return std::sqrt(ss);
}

SobolevSpec sobolev_norm(const TestFunction& f, double s, double a, double b,
                         const Tolerances& tol) {
  if (!(s >= 0.0)) throw RangeError("Sobolev order must be >= 0");
  if (!(b > a)) throw RangeError("empty period interval");
  const double P = b - a;
  const double rp = 1.0 / std::sqrt(P);
  SobolevSpec out;
  out.s = s;
  out.a = a;
  out.b = b;
  auto weight = [s](long n) { return std::pow(1.0 + static_cast<double>(n) * n, s); };

  const auto& cs = f.cosine_series();
  if (!cs.empty()) {
    out.analytic = true;
    auto coef = [&](long n) {
      const double kappa = 2.0 * kPi * static_cast<double>(n) / P;
      Complex acc = 0.0;
      for (const auto& [w, amp] : cs)
        acc += amp * 0.5 * (exp_integral(w - kappa, a, b) + exp_integral(-w - kappa, a, b));
      return rp * Complex(std::cos(kappa * a), std::sin(kappa * a)) * acc;
    };
    std::vector<Complex> pos{coef(0)};  // n >= 0
    std::vector<Complex> neg{pos[0]};   // n <= 0
    double sum = std::norm(pos[0]);
    constexpr long kCap = 1L << 22;
    long n_max = 0;
    for (long target = 64;; target *= 2) {
      if (target > kCap) throw NumericalFailure("Sobolev coefficient series did not converge");
      double add = 0.0;
      for (long n = n_max + 1; n <= target; ++n) {
        pos.push_back(coef(n));
        neg.push_back(coef(-n));
        add += weight(n) * (std::norm(pos.back()) + std::norm(neg.back()));
      }
      n_max = target;
      const double prev = std::sqrt(sum);
      sum += add;
      if (std::sqrt(sum) - prev <= tol.sobolev_rel * std::sqrt(sum)) break;
    }
    out.n_max = static_cast<int>(n_max);
    out.coefficients.resize(static_cast<std::size_t>(2 * n_max + 1));
    for (long n = 0; n <= n_max; ++n) {
      out.coefficients[static_cast<std::size_t>(n_max + n)] = pos[static_cast<std::size_t>(n)];
      out.coefficients[static_cast<std::size_t>(n_max - n)] = neg[static_cast<std::size_t>(n)];
    }
    out.norm = std::sqrt(sum);
    return out;
  }

  // trapezoid rule through the FFT, doubling the grid until the norm settles
  double prev = -1.0;
  for (int m = 6; m <= 22; ++m) {
    const int L = 1 << m;
    auto* buf = fftw_alloc_complex(static_cast<std::size_t>(L));
    for (int j = 0; j < L; ++j) {
      const Complex v = j == 0 ? 0.5 * (f(a) + f(b)) : f(a + P * j / static_cast<double>(L));
      buf[j][0] = v.real();
      buf[j][1] = v.imag();
    }
    fftw_plan plan = fftw_plan_dft_1d(L, buf, buf, FFTW_FORWARD, FFTW_ESTIMATE);
    fftw_execute(plan);
    fftw_destroy_plan(plan);
    const int n_max = L / 2 - 1;
    std::vector<Complex> c(static_cast<std::size_t>(2 * n_max + 1));
    double sum = 0.0;
    const double scale = std::sqrt(P) / L;
    for (int n = -n_max; n <= n_max; ++n) {
      const int idx = n >= 0 ? n : L + n;
      const Complex v = scale * Complex(buf[idx][0], buf[idx][1]);
      c[static_cast<std::size_t>(n + n_max)] = v;
      sum += weight(n) * std::norm(v);
    }
    fftw_free(buf);
    const double norm = std::sqrt(sum);
    out.n_max = n_max;
    out.coefficients = std::move(c);
    out.norm = norm;
    if (prev >= 0.0 && std::abs(norm - prev) <= tol.sobolev_rel * norm) return out;
    prev = norm;
  }
  throw NumericalFailure("Sobolev norm did not converge under grid doubling");
}

std::pair<int, int> native_bound_range(int N, double W) {
  discrete::DiscreteParams{N, W}.validate();
  const double lo = 2.0 * N * W + std::log(kPi * N * W) + 6.0;
  return {static_cast<int>(std::ceil(lo)), N - 1};
}

std::vector<NativeBoundCheck> native_bound_sweep(const TestFunction& f,
                                                 const discrete::DiscreteSpectrum& s, double sob_s,
                                                 const Tolerances& tol) {
  const int N = s.params.N;
  const auto [k_lo, k_hi] = native_bound_range(N, s.params.W);
  std::vector<NativeBoundCheck> out;
  if (k_lo > k_hi) return out;
  const double hs = sobolev_norm(f, sob_s, -0.5, 0.5, tol).norm;
  const double l2 = l2_norm(f, -0.5, 0.5);
  const double sob_term = 4.0 / std::pow(4.0 + static_cast<double>(N) * N, sob_s / 2.0) * hs;
  const auto curve = residual_curve(f, s, Domain::native, k_hi);
  for (int K = k_lo; K <= k_hi; ++K) {
    NativeBoundCheck c;
    c.K = K;
    c.residual = curve[static_cast<std::size_t>(K - 1)].residual_l2;
    c.sobolev_term = sob_term;
    c.lambda_term = std::sqrt(std::max(s.values[static_cast<std::size_t>(K)], 0.0)) * l2;
    c.bound = c.sobolev_term + c.lambda_term;
    c.satisfied = c.residual <= c.bound + tol.check_floor;
    out.push_back(c);
  }
  return out;
}

}  // namespace slepian::approx
