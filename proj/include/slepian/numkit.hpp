#pragma once

// Dependency-free numerical kernels: Gauss-Legendre rules and symmetric
// eigensolvers (Householder tridiagonalization + implicit QL).

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "slepian/matrix.hpp"

namespace slepian::numkit {

struct QuadratureRule {
  std::vector<double> nodes;    // strictly increasing, in (-1, 1)
  std::vector<double> weights;  // positive

  std::size_t size() const noexcept { return nodes.size(); }

  /// Affine image of the rule on [a, b].
  QuadratureRule mapped(double a, double b) const;
};

/// Real symmetric matrix. Both triangles are stored and kept bitwise equal.
class SymMatrix {
 public:
  SymMatrix() = default;
  explicit SymMatrix(std::size_t n) : m_(n, n) {}
  /// Throws std::invalid_argument unless `m` is square and exactly symmetric.
  explicit SymMatrix(Matrix m);

  std::size_t order() const noexcept { return m_.rows(); }
  double operator()(std::size_t i, std::size_t j) const { return m_(i, j); }
  void set(std::size_t i, std::size_t j, double v) {
    m_(i, j) = v;
    m_(j, i) = v;
  }
  const Matrix& dense() const noexcept { return m_; }

  /// y = A x
  std::vector<double> apply(std::span<const double> x) const;
  double frobenius_norm() const;

 private:
  Matrix m_;
};

struct SymTridiag {
  std::vector<double> diagonal;
  std::vector<double> off_diagonal;  // length n-1

  std::size_t order() const noexcept { return diagonal.size(); }
  SymMatrix densify() const;
  void validate() const;
};

struct EigenSystem {
  std::vector<double> values;  // descending
  Matrix vectors;              // column j pairs with values[j]
  std::string method;
  double residual = 0.0;       // max_j |A v_j - values[j] v_j|_2

  std::size_t order() const noexcept { return values.size(); }
};

/// Order-`order` Gauss-Legendre rule on [-1, 1]. Throws NumericalFailure if
/// Newton iteration on a root does not converge.
QuadratureRule gauss_legendre(int order);

EigenSystem eig_sym(const SymMatrix& a);
/// Eigenvalues only, descending.
std::vector<double> eigvals_sym(const SymMatrix& a);

EigenSystem eig_symtridiag(const SymTridiag& t);
std::vector<double> eigvals_symtridiag(const SymTridiag& t);

/// max |eigenvalue|
double spectral_norm_sym(const SymMatrix& a);

struct EigenDefects {
  double orthonormality = 0.0;  // max |<v_i, v_j> - delta_ij|
  double residual = 0.0;        // max_i |A v_i - lambda_i v_i|_2
  double norm_estimate = 0.0;   // max |lambda_i|
  bool descending = true;
};

EigenDefects eigen_defects(const SymMatrix& a, const EigenSystem& es);

}  // namespace slepian::numkit
