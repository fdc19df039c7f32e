#pragma once

// Sinc-kernel operator on [-1,1]: Nystrom eigenvalues, Hilbert-Schmidt norms,
// plunge index, and distance between its eigenprojectors and the dilated DPSWFs'.

#include <cstddef>
#include <optional>
#include <vector>

#include "slepian/config.hpp"
#include "slepian/matrix.hpp"
#include "slepian/numkit.hpp"

namespace slepian::continuous {

/// max(64, ceil(2c) + 60)
int default_order(double c);

struct ContinuousSpectrum {
  double c = 0.0;
  double half_width = 1.0;    // kernel acts on [-half_width, half_width]
  std::vector<double> values;  // descending
  Matrix grid_vectors;         // column n ~ sqrt(w_i) psi_n(x_i)
  numkit::QuadratureRule rule;
  int order = 0;
  double refinement_change = 0.0;  // max change of values >= floor when M doubles
};

struct NystromOptions {
  int order = 0;  // 0 selects default_order(c * half_width)
  double half_width = 1.0;
  bool verify_refinement = true;
  bool vectors = true;
};

/// Throws RangeError on c <= 0 or an order below the default, NumericalFailure
/// when the refinement self-check fails.
ContinuousSpectrum nystrom_spectrum(double c, const NystromOptions& opt = {},
                                    const Tolerances& tol = kDefaultTolerances);
ContinuousSpectrum nystrom_spectrum(double c, int order);

struct HsNorm {
  double spectral = 0.0;    // sum lambda_n^2
  double quadrature = 0.0;  // 2-D quadrature of the squared kernel
  double lower_bound = 0.0;
  int order = 0;
  int check_order = 0;
};

/// 2c/pi - log(2c/pi)/pi^2 - 0.45
double hs_lower_bound(double c);
/// Throws NumericalFailure when the two evaluations disagree beyond tolerance.
HsNorm hs_norm_qc(double c, const Tolerances& tol = kDefaultTolerances);

/// |Q~_{W,N} - Q_{W,pi N}|_HS on [-W,W]^2.
double hs_norm_difference(int N, double W, int order = 0);
/// 4 pi^2 W^3 / (3 sin 2 pi W)
double hs_difference_bound(double W);

struct PlungeIndex {
  double c = 0.0;
  double b = 0.0;
  long index = 0;
};

/// floor(2c/pi + (2b/pi) log 2 + (b/pi) log c). Requires c > 1, b >= 0.
PlungeIndex plunge_index(double c, double b);

struct ProjectorDistance {
  int N = 0;
  double W = 0.0;
  int K = 0;
  double c = 0.0;
  double distance = 0.0;
  int order = 0;
  std::optional<double> b;
  bool condition_holds = false;  // upper half of the admissible-(N,W) condition for b
  std::optional<double> bound;   // reported only when condition_holds
};

/// Spectral norm of the difference of the rank-K projectors onto the leading
/// sinc-kernel eigenvectors and the leading dilated DPSWFs, both on one
/// quadrature grid over [-1,1]. Throws IllConditioned when lambda~_{K-1} is
/// below the untrusted floor.
ProjectorDistance projector_distance(int N, double W, int K, std::optional<double> b = {},
                                     const Tolerances& tol = kDefaultTolerances);

/// Upper limit of pi N W in the admissibility condition, and the distance bound.
double projector_condition_limit(double W, double b);
double projector_bound(int N, double W, double b);

}  // namespace slepian::continuous
