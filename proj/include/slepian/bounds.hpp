#pragma once

// Closed-form eigenvalue bounds and identities, and their verification against
// computed spectra.

#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

#include "slepian/config.hpp"
#include "slepian/discrete.hpp"

namespace slepian::bounds {

using Params = std::vector<std::pair<std::string, double>>;

struct BoundCheck {
  std::string name;
  std::string paper_ref;
  Params params;
  double bound = 0.0;
  double measured = 0.0;
  bool satisfied = true;
  double margin = 0.0;  // bound - measured
  bool mandatory = true;
  std::string note;

  friend bool operator==(const BoundCheck&, const BoundCheck&) = default;
};

/// satisfied = measured <= bound + floor
BoundCheck make_check(std::string name, std::string ref, Params params, double bound,
                      double measured, double floor, bool mandatory = true);

struct BoundReport {
  std::string version;
  Tolerances tolerances;
  std::vector<BoundCheck> checks;
  bool pass = true;

  std::size_t failures() const;
  /// Recompute `pass` and put checks in canonical order.
  void finalize();

  friend bool operator==(const BoundReport&, const BoundReport&) = default;
};

nlohmann::ordered_json tolerances_to_json(const Tolerances& t);
/// Keys absent from `j` keep their defaults; unknown keys throw std::invalid_argument.
Tolerances tolerances_from_json(const nlohmann::ordered_json& j);
/// Assign one tolerance by name. Returns false for unknown names.
bool set_tolerance(Tolerances& t, const std::string& key, double value);

nlohmann::ordered_json to_json(const BoundCheck& c);
nlohmann::ordered_json to_json(const BoundReport& r);
BoundCheck check_from_json(const nlohmann::ordered_json& j);
BoundReport report_from_json(const nlohmann::ordered_json& j);

// eigenvalue decay for small W
double lemma1_constant(double W);
double lemma1_bound(int n, int N, double W);

// plunge-region counts
double thm1_count_bound(int N, double W, double eps);
double zhu_count_bound(int N, double eps);
double karnik_count_estimate(int N, double eps);
/// #{k : eps <= lambda_k <= 1 - eps}
int measured_count(const discrete::DiscreteSpectrum& s, double eps);

// discrete vs continuous comparison
double thm2_constant(double W);
std::vector<BoundCheck> thm2_verify(int N, double W, const Tolerances& tol = kDefaultTolerances);

double decay_bound(int k, int N, double W);

struct DecayFit {
  double eta = 0.0;
  int n_first = 0;
  int n_last = -1;
  int used = 0;  // in-range indices above the floor
};
/// Throws RangeError when the index range is empty or has nothing above the floor.
DecayFit plunge_decay_fit(int N, double W, const Tolerances& tol = kDefaultTolerances);

struct SlepianConstants {
  double c1_upper = 2.0;
  double c2_lower = 0.0;
};
SlepianConstants slepian_constants(double W, double eps, int N);

BoundCheck eta_sum(int N, double W, const Tolerances& tol = kDefaultTolerances);

struct TuranResult {
  double W = 0.0;
  double formula_value = 0.0;
  double empirical_A = 0.0;
  double empirical_A_squared = 0.0;  // squared-ratio convention, A / 2
  std::vector<int> used_N;
  std::vector<double> last_eigenvalue;  // lambda~_{N-1} for each used N
  bool self_consistent = false;
};
double turan_formula(double W);
/// Throws RangeError when every lambda~_{N-1} is below the floor.
TuranResult turan_constant(double W, const std::vector<int>& N_list,
                           const Tolerances& tol = kDefaultTolerances);
inline const std::vector<int> kDefaultTuranN{6, 8, 10};

struct SpectrumComparison {
  int N = 0;
  double W = 0.0;
  double c = 0.0;
  int tail = 30;
  int order = 0;
  double l2 = 0.0;
  double bound = 0.0;
};
SpectrumComparison compare_spectra(int N, double W, int tail = 30,
                                   discrete::Method method = discrete::Method::tridiag);

struct Grids {
  std::vector<int> N{30, 60};
  std::vector<double> W{0.1, 0.2, 0.3, 0.4};
  std::vector<double> eps{0.01, 0.05, 0.2};
};
/// Throws std::invalid_argument on an empty grid.
BoundReport verify_all(const Grids& grids, const Tolerances& tol = kDefaultTolerances);

}  // namespace slepian::bounds
