#include "slepian/continuous.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "slepian/discrete.hpp"
#include "slepian/errors.hpp"
#include "slepian/kernels.hpp"

namespace slepian::continuous {

namespace {

constexpr double kPi = std::numbers::pi;

double sinc_kernel(double c, double d) {
  return d == 0.0 ? c / kPi : std::sin(c * d) / (kPi * d);
}

// 1/sin(u) - 1/u, with a series where the difference cancels
double csc_minus_inv(double u) {
  if (std::abs(u) < 0.05) {
    const double u2 = u * u;
    return u * (1.0 / 6.0 + u2 * (7.0 / 360.0 + u2 * (31.0 / 15120.0 + u2 * (127.0 / 604800.0))));
  }
  return 1.0 / std::sin(u) - 1.0 / u;
}

// Modified Gram-Schmidt, two passes. Columns whose remaining norm falls to
// `drop` or below are reported through the return value.
std::size_t orthonormalize_columns(Matrix& a, double drop) {
  const std::size_t m = a.rows();
  const std::size_t k = a.cols();
  std::size_t dropped = 0;
  for (std::size_t j = 0; j < k; ++j) {
    double orig = 0.0;
    for (std::size_t i = 0; i < m; ++i) orig += a(i, j) * a(i, j);
    orig = std::sqrt(orig);
    for (int pass = 0; pass < 2; ++pass)
      for (std::size_t q = 0; q < j; ++q) {
        double dot = 0.0;
        for (std::size_t i = 0; i < m; ++i) dot += a(i, q) * a(i, j);
        for (std::size_t i = 0; i < m; ++i) a(i, j) -= dot * a(i, q);
      }
    double nrm = 0.0;
    for (std::size_t i = 0; i < m; ++i) nrm += a(i, j) * a(i, j);
    nrm = std::sqrt(nrm);
    if (nrm <= drop * orig) {
      ++dropped;
      for (std::size_t i = 0; i < m; ++i) a(i, j) = 0.0;
      continue;
    }
    for (std::size_t i = 0; i < m; ++i) a(i, j) /= nrm;
  }
  return dropped;
}

}  // namespace

int default_order(double c) {
  return std::max(64, static_cast<int>(std::ceil(2.0 * c)) + 60);
}

ContinuousSpectrum nystrom_spectrum(double c, const NystromOptions& opt, const Tolerances& tol) {
  if (!(c > 0.0) || !std::isfinite(c)) throw RangeError("c must be positive");
  if (!(opt.half_width > 0.0)) throw RangeError("half_width must be positive");
  const int min_order = default_order(c * opt.half_width);
  const int M = opt.order == 0 ? min_order : opt.order;
  if (M < min_order)
    throw RangeError("quadrature order " + std::to_string(M) + " below the minimum " +
                     std::to_string(min_order));

  ContinuousSpectrum out;
  out.c = c;
  out.half_width = opt.half_width;
  out.order = M;
  out.rule = numkit::gauss_legendre(M).mapped(-opt.half_width, opt.half_width);
  const numkit::SymMatrix s(kernels::active::nystrom_sinc(out.rule.nodes, out.rule.weights, c));
  if (opt.vectors) {
    auto es = numkit::eig_sym(s);
    out.values = std::move(es.values);
    out.grid_vectors = std::move(es.vectors);
    discrete::apply_sign_convention(out.grid_vectors, tol.sign_tie_rel);
  } else {
    out.values = numkit::eigvals_sym(s);
  }

  if (opt.verify_refinement) {
    const auto fine = numkit::gauss_legendre(2 * M).mapped(-opt.half_width, opt.half_width);
    const auto vf = numkit::eigvals_sym(
        numkit::SymMatrix(kernels::active::nystrom_sinc(fine.nodes, fine.weights, c)));
    for (std::size_t n = 0; n < out.values.size(); ++n) {
      if (out.values[n] < tol.eigen_floor && vf[n] < tol.eigen_floor) break;
      const double change = std::abs(out.values[n] - vf[n]);
      out.refinement_change = std::max(out.refinement_change, change);
      if (change > tol.mesh_refinement)
        throw NumericalFailure("Nystrom eigenvalue not converged under mesh doubling",
                               static_cast<std::ptrdiff_t>(n));
    }
  }
  return out;
}

ContinuousSpectrum nystrom_spectrum(double c, int order) {
  NystromOptions opt;
  opt.order = order;
  return nystrom_spectrum(c, opt);
}

double hs_lower_bound(double c) {
  const double t = 2.0 * c / kPi;
  return t - std::log(t) / (kPi * kPi) - 0.45;
}

HsNorm hs_norm_qc(double c, const Tolerances& tol) {
  NystromOptions opt;
  opt.vectors = false;
  const auto cs = nystrom_spectrum(c, opt, tol);
  HsNorm h;
  h.order = cs.order;
  for (double v : cs.values) h.spectral += v * v;
  h.lower_bound = hs_lower_bound(c);

  // The Nystrom sum equals the order-M tensor rule, so the check uses another order.
  h.check_order = cs.order + 37;
  const auto rule = numkit::gauss_legendre(h.check_order);
  h.quadrature = kernels::active::tensor_quadrature(
      rule.nodes, rule.weights, rule.nodes, rule.weights, [c](double x, double y) {
        const double k = sinc_kernel(c, x - y);
        return k * k;
      });
  if (std::abs(h.spectral - h.quadrature) > tol.hs_quadrature_rel * std::abs(h.quadrature))
    throw NumericalFailure("Hilbert-Schmidt norm: spectral sum and quadrature disagree");
  return h;
}

double hs_norm_difference(int N, double W, int order) {
  discrete::DiscreteParams{N, W}.validate();
  const int M = order > 0 ? order : std::max(4 * N, 256);
  const auto rule = numkit::gauss_legendre(M).mapped(-W, W);
  const double nn = N;
  // sin(N pi u)/sin(pi u) - sin(N pi u)/(pi u)
  const double ss = kernels::active::tensor_quadrature(
      rule.nodes, rule.weights, rule.nodes, rule.weights, [nn](double x, double y) {
        const double u = kPi * (x - y);
        const double d = std::sin(nn * u) * csc_minus_inv(u);
        return d * d;
      });
  return std::sqrt(ss);
}

double hs_difference_bound(double W) {
  return 4.0 * kPi * kPi * W * W * W / (3.0 * std::sin(2.0 * kPi * W));
}

PlungeIndex plunge_index(double c, double b) {
  if (!(c > 1.0)) throw RangeError("plunge index needs c > 1");
  if (!(b >= 0.0)) throw RangeError("plunge index needs b >= 0");
  const double v = 2.0 * c / kPi + (2.0 * b / kPi) * std::log(2.0) + (b / kPi) * std::log(c);
  // products such as pi*N*W land a few ulps below an integer
  const double guarded = v + 1e-12 * std::max(1.0, std::abs(v));
  return {c, b, static_cast<long>(std::floor(guarded))};
}

double projector_condition_limit(double W, double b) {
  if (!(b > std::log(3.0) / kPi)) throw RangeError("b must exceed log(3)/pi");
  const double q = 1.0 - 3.0 / (1.0 + std::exp(kPi * b));
  const double alpha = 3.0 / (32.0 * b * kPi) * q;
  return std::exp(alpha * std::sin(2.0 * kPi * W) / (W * W * W) - 2.0 * std::log(2.0) - kPi / b);
}

double projector_bound(int N, double W, double b) {
  if (!(b > std::log(3.0) / kPi)) throw RangeError("b must exceed log(3)/pi");
  const double q = 1.0 - 3.0 / (1.0 + std::exp(kPi * b));
  const double c = kPi * N * W;
  return W * W * W * (4.0 * b * kPi / (3.0 * std::sin(2.0 * kPi * W))) *
         (std::log(c) + 2.0 * std::log(2.0) + kPi / b) / q;
}

ProjectorDistance projector_distance(int N, double W, int K, std::optional<double> b,
                                     const Tolerances& tol) {
  discrete::DiscreteParams{N, W}.validate();
  if (K < 0 || K > N) throw RangeError("K must lie in [0, N]");
  ProjectorDistance out;
  out.N = N;
  out.W = W;
  out.K = K;
  out.c = kPi * N * W;
  out.b = b;
  if (b) {
    out.condition_holds = out.c <= projector_condition_limit(W, *b);
    if (out.condition_holds) out.bound = projector_bound(N, W, *b);
  }
  if (K == 0) return out;

  const auto ds = discrete::spectrum({N, W}, discrete::Method::tridiag, tol);
  if (ds.values[static_cast<std::size_t>(K - 1)] < tol.untrusted_floor)
    throw IllConditioned("projector needs lambda~_{K-1} above the untrusted floor");

  NystromOptions opt;
  opt.verify_refinement = false;
  const auto cs = nystrom_spectrum(out.c, opt, tol);
  out.order = cs.order;
  const std::size_t M = cs.rule.size();
  const auto k = static_cast<std::size_t>(K);

  // sqrt(w_i) sqrt(W) U_k(W x_i) / sqrt(lambda~_k); U_k is real by parity.
  const CMatrix u = discrete::eval_dpswf_grid(ds, k, cs.rule.nodes, W);
  Matrix a(M, k);
  for (std::size_t i = 0; i < M; ++i)
    for (std::size_t j = 0; j < k; ++j)
      a(i, j) = std::sqrt(cs.rule.weights[i] * W / ds.values[j]) * u(i, j).real();
  if (orthonormalize_columns(a, 1e-14) != 0)
    throw IllConditioned("dilated DPSWFs are numerically dependent on the grid");

  numkit::SymMatrix diff(M);
  for (std::size_t i = 0; i < M; ++i)
    for (std::size_t j = 0; j <= i; ++j) {
      double acc = 0.0;
      for (std::size_t q = 0; q < k; ++q)
        acc += cs.grid_vectors(i, q) * cs.grid_vectors(j, q) - a(i, q) * a(j, q);
      diff.set(i, j, acc);
    }
  out.distance = numkit::spectral_norm_sym(diff);
  return out;
}

}  // namespace slepian::continuous
