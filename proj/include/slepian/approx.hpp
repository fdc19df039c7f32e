#pragma once

// Projections onto DPSWF bases, periodic Sobolev norms and the test functions
// used with them.

#include <complex>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "slepian/config.hpp"
#include "slepian/discrete.hpp"

namespace slepian::approx {

using Complex = std::complex<double>;

/// Number of terms minus one: smallest K with 2^{-K s} <= tol.
int weierstrass_terms(double s, double tol = 1e-12);
/// sum_{k=0}^{K_s} cos(2^k x) / 2^{k s}
double weierstrass(double s, double x, double tol = 1e-12);

class TestFunction {
 public:
  enum class Kind { sinc, weierstrass, samples, custom };

  /// sin(alpha x) / (alpha x)
  static TestFunction sinc(double alpha);
  static TestFunction weierstrass(double s, double tol = 1e-12);
  /// Piecewise-linear through (x, y); x strictly increasing, at least two rows.
  /// Values beyond the sampled range are held at the end values.
  static TestFunction samples(std::vector<double> x, std::vector<double> y);
  static TestFunction custom(std::function<Complex(double)> f, std::string label);

  Complex operator()(double x) const { return eval_(x); }
  Kind kind() const noexcept { return kind_; }
  const std::string& label() const noexcept { return label_; }
  /// (frequency, amplitude) pairs when f(x) = sum a cos(omega x); empty otherwise.
  const std::vector<std::pair<double, double>>& cosine_series() const noexcept { return cos_; }

 private:
  Kind kind_ = Kind::custom;
  std::string label_;
  std::function<Complex(double)> eval_;
  std::vector<std::pair<double, double>> cos_;
};

enum class Domain { native, dilated };

struct ProjectionResult {
  int K = 0;
  Domain domain = Domain::native;
  std::vector<Complex> coefficients;  // one per basis vector actually used
  std::vector<int> modes;             // mode index behind each coefficient
  std::vector<int> excluded;          // requested modes not in the basis
  int direct_modes = 0;               // modes with lambda~ >= lambda_floor
  double residual_l2 = 0.0;
  double residual_sup = 0.0;  // max over quadrature nodes and a uniform grid
  int quadrature_order = 0;
};

struct ProjectionOptions {
  int quadrature_order = 0;  // 0 selects max(4N, 256)
  int sup_points = 4001;
  double lambda_floor = kDefaultTolerances.untrusted_floor;
  /// Dilated basis: orthonormalize every mode on the grid instead of dividing
  /// by sqrt(lambda~) and discarding modes below lambda_floor.
  bool stabilized = true;
  double drop_floor = kDefaultTolerances.projection_floor;  // squared norm
};

/// Coefficients against U_k on [-1/2,1/2]; residual on [-W,W].
ProjectionResult project_native(const TestFunction& f, const discrete::DiscreteSpectrum& s, int K,
                                const ProjectionOptions& opt = {});
/// Coefficients against sqrt(W) U_k(W x) / sqrt(lambda~_k) on [-1,1].
ProjectionResult project_dilated(const TestFunction& f, const discrete::DiscreteSpectrum& s, int K,
                                 const ProjectionOptions& opt = {});
/// Residuals for K = 1..K_max on one nested basis.
std::vector<ProjectionResult> residual_curve(const TestFunction& f,
                                             const discrete::DiscreteSpectrum& s, Domain domain,
                                             int K_max, const ProjectionOptions& opt = {});

struct SobolevSpec {
  double s = 0.0;
  double a = -0.5;
  double b = 0.5;
  int n_max = 0;  // coefficients kept for |n| <= n_max
  std::vector<Complex> coefficients;  // index n + n_max, n = -n_max..n_max
  double norm = 0.0;
  bool analytic = false;
};

/// Periodic H^s norm on [a, b] with f^_n = P^{-1/2} int_a^b f e^{-2 pi i n (x-a)/P}.
/// Throws NumericalFailure when grid doubling does not converge.
SobolevSpec sobolev_norm(const TestFunction& f, double s, double a = -0.5, double b = 0.5,
                         const Tolerances& tol = kDefaultTolerances);

double l2_norm(const TestFunction& f, double a, double b, int order = 512);

/// K range [ceil(2NW + log(pi N W) + 6), N-1] on which the native projection bound applies.
std::pair<int, int> native_bound_range(int N, double W);

struct NativeBoundCheck {
  int K = 0;
  double residual = 0.0;
  double sobolev_term = 0.0;  // 4 (4 + N^2)^{-s/2} |f|_{H^s}
  double lambda_term = 0.0;   // sqrt(lambda~_K) |f|_{L^2(-1/2,1/2)}
  double bound = 0.0;
  bool satisfied = false;
};

/// Native projection residual against its Sobolev bound for every K in range.
std::vector<NativeBoundCheck> native_bound_sweep(const TestFunction& f,
                                                 const discrete::DiscreteSpectrum& s, double sob_s,
                                                 const Tolerances& tol = kDefaultTolerances);

}  // namespace slepian::approx
