#pragma once

// DPSS vectors, their concentration eigenvalues and the DPSWFs built from them.

#include <complex>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "slepian/config.hpp"
#include "slepian/matrix.hpp"
#include "slepian/numkit.hpp"

namespace slepian::discrete {

struct DiscreteParams {
  int N = 1;
  double W = 0.25;

  /// Throws RangeError unless N >= 1 and 0 < W < 1/2.
  void validate() const;
};

enum class Method { toeplitz, tridiag };

std::string to_string(Method m);
/// Throws std::invalid_argument on an unknown name.
Method parse_method(const std::string& name);

struct DiscreteSpectrum {
  DiscreteParams params;
  std::vector<double> values;  // descending above the untrusted floor
  Matrix dpss;                 // column k is v^(k), unit 2-norm
  Method method = Method::tridiag;
  double untrusted_floor = kDefaultTolerances.untrusted_floor;
  std::vector<std::string> warnings;

  std::size_t size() const noexcept { return values.size(); }
  bool trusted(std::size_t k) const { return values.at(k) >= untrusted_floor; }
  /// Number of leading modes above the untrusted floor.
  std::size_t trusted_count() const;
};

/// rho(n,m) = sin(2 pi W (n-m)) / (pi (n-m)), diagonal 2W.
numkit::SymMatrix build_toeplitz(const DiscreteParams& p);
/// Commuting tridiagonal matrix.
numkit::SymTridiag build_tridiag(const DiscreteParams& p);

/// Eigenpairs of rho. The tridiag route takes eigenvectors of the commuting
/// tridiagonal matrix and Rayleigh quotients against rho.
DiscreteSpectrum spectrum(const DiscreteParams& p, Method method = Method::tridiag,
                          const Tolerances& tol = kDefaultTolerances);

/// Flip columns so the largest-magnitude entry is positive. Entries within
/// `tie_rel` (relative) of the maximum count as ties; the lowest index wins.
void apply_sign_convention(Matrix& vectors, double tie_rel = kDefaultTolerances.sign_tie_rel);

/// U_k(x) = eps_k sum_n v_n e^{-i pi (N-1-2n) x}, eps_k = 1 (k even), i (k odd).
std::complex<double> eval_dpswf(const DiscreteSpectrum& s, std::size_t k, double x);
/// out(i,k) = U_k(scale * points[i]) for k < K.
CMatrix eval_dpswf_grid(const DiscreteSpectrum& s, std::size_t K, std::span<const double> points,
                        double scale = 1.0);

/// (v^(j))^T rho v^(k)
double concentration(const DiscreteSpectrum& s, std::size_t j, std::size_t k);
/// V_K^T rho V_K for the leading K modes.
Matrix concentration_matrix(const DiscreteSpectrum& s, std::size_t K);

/// max_k |lambda_k(1/2 - W) - (1 - lambda_{N-1-k}(W))|
double symmetry_check(int N, double W, Method method = Method::tridiag);

/// Finite-sum extension of v^(k) to an arbitrary index n. Throws IllConditioned
/// when lambda_k < tail_floor.
double extend_dpss(const DiscreteSpectrum& s, std::size_t k, long n,
                   double tail_floor = kDefaultTolerances.tail_floor);

/// |rho sigma - sigma rho|_F / (1 + |rho|_F |sigma|_F)
double commutation_defect(const DiscreteParams& p);

}  // namespace slepian::discrete
