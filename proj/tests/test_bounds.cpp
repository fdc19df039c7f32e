#include <cmath>
#include <numbers>

#include "doctest.h"
#include "slepian/bounds.hpp"
#include "slepian/continuous.hpp"
#include "slepian/errors.hpp"

using namespace slepian;
using namespace slepian::bounds;
using nlohmann::ordered_json;

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kE = std::numbers::e;
const Tolerances tol = kDefaultTolerances;

// independent restatement of the count-bound numerator
double eta_formula(int N, double W) {
  const double c = kPi * N * W;
  const double s = std::sin(2.0 * c);
  return std::log(2.0 * N * W) / (kPi * kPi) + 0.45 - 2.0 * W * W / 3.0 + W * W / (6.0 * c * c) * s * s;
}

}  // namespace

TEST_CASE("make_check semantics") {
  const auto a = make_check("x", "ref", {{"N", 3}}, 1.0, 1.0 + 5e-13, 1e-12);
  CHECK(a.satisfied);
  CHECK(a.margin == doctest::Approx(-5e-13));
  const auto b = make_check("x", "ref", {}, 1.0, 1.0 + 2e-12, 1e-12);
  CHECK_FALSE(b.satisfied);
  BoundReport r;
  r.checks = {b};
  r.checks.back().mandatory = false;
  r.finalize();
  CHECK(r.pass);
  r.checks.back().mandatory = true;
  r.finalize();
  CHECK_FALSE(r.pass);
  CHECK(r.failures() == 1);
}

TEST_CASE("small-bandwidth decay constant and bound") {
  CHECK(lemma1_constant(0.1) == doctest::Approx(1.9418).epsilon(1e-4));
  CHECK(lemma1_constant(0.1) == doctest::Approx(std::sqrt(0.2) * (2.0 + 2.0 / (kE * kPi * 0.1))));
  CHECK_THROWS_AS(lemma1_bound(20, 21, 0.3), RangeError);
  CHECK_THROWS_AS(lemma1_bound(1, 21, 0.1), RangeError);
  CHECK_THROWS_AS(lemma1_bound(21, 21, 0.1), RangeError);
  CHECK_THROWS_AS(lemma1_bound(1, 1, 0.1), RangeError);

  for (auto [N, W] : {std::pair{21, 0.1}, std::pair{41, 0.1}, std::pair{60, 0.2}}) {
    CAPTURE(N);
    const auto s = discrete::spectrum({N, W});
    const double edge = kE * kPi * W * (N - 1) / 2.0;
    const int first = static_cast<int>(std::floor(edge)) + 1;
    int checked = 0;
    double prev = INFINITY;
    for (int n = first; n <= N - 1; ++n) {
      const double b = lemma1_bound(n, N, W);
      CHECK(b > 0.0);
      if (n > first + 1) CHECK(b < prev);
      prev = b;
      const double lam = s.values[static_cast<std::size_t>(n)];
      if (lam < tol.eigen_floor) continue;
      CHECK(lam <= b + tol.check_floor);
      ++checked;
    }
    // the range starts past 2NW; above the floor only the shortest case has indices
    if (N == 21) CHECK(checked > 0);
  }
}

TEST_CASE("plunge-region count bounds") {
  CHECK(thm1_count_bound(60, 0.3, 0.05) == doctest::Approx(15.86).epsilon(1e-3));
  CHECK(thm1_count_bound(60, 0.3, 0.05) == doctest::Approx(eta_formula(60, 0.3) / 0.0475).epsilon(1e-14));
  CHECK(zhu_count_bound(60, 0.05) == doctest::Approx(26.0).epsilon(2e-3));
  CHECK(std::isfinite(zhu_count_bound(2, 0.25)));
  CHECK(zhu_count_bound(2, 0.25) > 0.0);
  CHECK(karnik_count_estimate(60, 0.05) == doctest::Approx(28.66).epsilon(1e-3));
  CHECK(karnik_count_estimate(60, 15.0) == 0.0);
  CHECK_THROWS_AS(thm1_count_bound(60, 0.3, 0.5), RangeError);
  CHECK_THROWS_AS(thm1_count_bound(60, 0.3, 0.0), RangeError);
  CHECK_THROWS_AS(zhu_count_bound(1, 0.1), RangeError);

  for (int N : {30, 60, 120})
    for (double W : {0.1, 0.2, 0.3, 0.4}) {
      const auto s = discrete::spectrum({N, W});
      double prev = INFINITY;
      for (int i = 1; i < 50; ++i) {
        const double eps = i / 100.0;
        const double b = thm1_count_bound(N, W, eps);
        CHECK(b < prev);
        prev = b;
        if (kPi * N * W >= 1.0) CHECK(b < zhu_count_bound(N, eps));
        CHECK(measured_count(s, eps) <= b);
      }
    }
}

TEST_CASE("measured_count counts the closed interval") {
  discrete::DiscreteSpectrum s;
  s.values = {0.99, 0.95, 0.5, 0.05, 0.01};
  CHECK(measured_count(s, 0.05) == 3);
  CHECK(measured_count(s, 0.01) == 5);
  CHECK(measured_count(s, 0.2) == 1);
}

TEST_CASE("comparison constant") {
  CHECK(thm2_constant(1e-6) == doctest::Approx(kPi * kPi / 8.0).epsilon(1e-9));
  CHECK(thm2_constant(0.3) == doctest::Approx(1.4626).epsilon(1e-4));
  for (int i = 1; i < 5000; ++i) {
    const double W = i / 10000.0;
    const double a = thm2_constant(W);
    CHECK(a <= 2.0);
    CHECK(a >= kPi * kPi / 8.0 - 1e-15);
  }
  CHECK_THROWS_AS(thm2_constant(0.5), RangeError);
  CHECK_THROWS_AS(thm2_constant(0.0), RangeError);
}

TEST_CASE("discrete eigenvalues are dominated by the continuous ones") {
  for (double W : {0.1, 0.2, 0.3, 0.4}) {
    const auto checks = thm2_verify(60, W);
    CHECK(!checks.empty());
    for (const auto& c : checks) CHECK(c.satisfied);
  }
  const auto one = thm2_verify(1, 0.2);
  REQUIRE(one.size() == 1);
  CHECK(one[0].measured == doctest::Approx(0.4));
  const double lam0 = continuous::nystrom_spectrum(0.2 * kPi).values[0];
  CHECK(one[0].bound == doctest::Approx(thm2_constant(0.2) * lam0 + tol.check_floor).epsilon(1e-10));
  CHECK(one[0].satisfied);
}

TEST_CASE("superexponential decay bound") {
  const double b = decay_bound(59, 60, 0.1);
  CHECK(std::log(b / 2.0) == doctest::Approx(-119.0 * std::log(120.0 / (kE * kPi * 6.0))).epsilon(1e-12));
  CHECK(std::log(b / 2.0) == doctest::Approx(-101.3).epsilon(1e-3));
  const int edge = static_cast<int>(std::ceil(kE * kPi * 60 * 0.1 / 2.0));
  CHECK(std::isfinite(decay_bound(edge, 60, 0.1)));
  CHECK(decay_bound(edge, 60, 0.1) > 0.0);
  CHECK_THROWS_AS(decay_bound(edge - 1, 60, 0.1), RangeError);
  CHECK_THROWS_AS(decay_bound(5, 2, 0.1), RangeError);
  CHECK_THROWS_AS(decay_bound(50, 60, 0.3), RangeError);
  for (int N : {30, 60, 120})
    for (double W : {0.05, 0.1, 0.2}) {
      const auto s = discrete::spectrum({N, W});
      const int lo = std::max(2, static_cast<int>(std::ceil(kE * kPi * N * W / 2.0)));
      if (W >= 2.0 / (kE * kPi) * (N - 1.0) / N) continue;
      for (int k = lo; k <= N - 1; ++k) {
        const double lam = s.values[static_cast<std::size_t>(k)];
        if (lam >= tol.eigen_floor) CHECK(lam <= decay_bound(k, N, W) + tol.check_floor);
      }
    }
}

TEST_CASE("plunge decay rate") {
  CHECK_THROWS_AS(plunge_decay_fit(10, 0.1), RangeError);
  const auto fit = plunge_decay_fit(200, 0.2);
  CHECK(fit.eta > 0.0);
  CHECK(fit.used > 0);
  // the fit is the largest admissible rate: the bound is tight at some index
  const auto s = discrete::spectrum({200, 0.2});
  const double scale = std::log(kPi * 200 * 0.2) + 5.0;
  double worst = INFINITY;
  for (int n = fit.n_first; n <= fit.n_last; ++n) {
    const double lam = s.values[static_cast<std::size_t>(n)];
    if (lam < tol.eigen_floor) continue;
    const double bound = 2.0 * std::exp(-fit.eta * (n - 80.0) / scale);
    CHECK(lam <= bound * (1.0 + 1e-9));
    worst = std::min(worst, bound / lam);
  }
  CHECK(worst == doctest::Approx(1.0).epsilon(1e-9));
  for (int N : {150, 300}) MESSAGE("eta(", N, ", 0.2) = ", plunge_decay_fit(N, 0.2).eta);
}

TEST_CASE("decay constants") {
  const auto k = slepian_constants(0.1, 1.0, 60);
  CHECK(k.c1_upper == 2.0);
  CHECK(k.c2_lower == doctest::Approx(0.8 * std::log(10.0 / (kE * kPi))).epsilon(1e-14));
  CHECK(k.c2_lower == doctest::Approx(0.12628).epsilon(1e-4));
  CHECK_THROWS_AS(slepian_constants(0.1, (kE * kPi - 6.0) / 4.0, 60), RangeError);
  CHECK_THROWS_AS(slepian_constants(0.3, 1.0, 60), RangeError);
  // exponential and superexponential forms are consistent where both apply
  const int N = 8;
  const double W = 0.1;
  const double eps = 1.5;
  const auto c = slepian_constants(W, eps, N);
  const int kk = static_cast<int>(std::ceil(2.0 * N * W * (1.0 + eps)));
  CHECK(2.0 * std::exp(-c.c2_lower * N) >= decay_bound(kk, N, W));
}

TEST_CASE("plunge energy sum") {
  const auto one = eta_sum(1, 0.2);
  CHECK(one.measured == doctest::Approx(0.24).epsilon(1e-14));
  const auto c = eta_sum(60, 0.3);
  CHECK(c.bound == doctest::Approx(0.7531).epsilon(1e-3));
  CHECK(c.bound == doctest::Approx(eta_formula(60, 0.3)));
  CHECK(c.satisfied);
  for (int N : {5, 30, 60})
    for (double W : {0.1, 0.3}) CHECK(eta_sum(N, W).measured >= 0.0);
}

TEST_CASE("Turan constant") {
  CHECK(turan_formula(1.0 / 6.0) == doctest::Approx(3.0 * std::log(12.0 / (kE * kPi))).epsilon(1e-14));
  CHECK(std::abs(turan_formula(1.0 / 6.0) - 1.0206) <= tol.turan_formula_abs);
  CHECK_THROWS_AS(turan_formula(0.1), RangeError);
  const auto t = turan_constant(1.0 / 6.0, kDefaultTuranN);
  CHECK(t.self_consistent);
  CHECK(t.empirical_A > 0.0);
  CHECK(std::isfinite(t.empirical_A));
  CHECK(t.empirical_A_squared == doctest::Approx(t.empirical_A / 2.0));
  for (std::size_t i = 0; i < t.used_N.size(); ++i) {
    const int N = t.used_N[i];
    CHECK(t.last_eigenvalue[i] >=
          std::exp(-t.empirical_A * (1.0 - 2.0 / 6.0) * (N - 1)) * (1.0 - 1e-9));
  }
  // the last eigenvalue collapses below the floor quickly at this bandwidth
  CHECK_THROWS_AS(turan_constant(1.0 / 6.0, {15, 20, 25}), RangeError);
}

TEST_CASE("spectrum comparison") {
  const double ref[] = {4.15e-3, 1.65e-2, 3.98e-2, 8.51e-2};
  const double Ws[] = {0.1, 0.2, 0.3, 0.4};
  for (int i = 0; i < 4; ++i) {
    const auto sc = compare_spectra(60, Ws[i]);
    CHECK(std::abs(sc.l2 - ref[i]) <= tol.table1_rel * ref[i]);
    CHECK(sc.l2 <= sc.bound);
    CHECK(sc.bound == doctest::Approx(continuous::hs_difference_bound(Ws[i])));
    CHECK(std::abs(compare_spectra(60, Ws[i], 60).l2 - sc.l2) <= 1e-12);
  }
  CHECK(compare_spectra(60, 0.1).bound == doctest::Approx(0.02239).epsilon(1e-3));
}

TEST_CASE("tolerance serialization") {
  const auto j = tolerances_to_json(kDefaultTolerances);
  CHECK(j.size() == kToleranceFields.size());
  CHECK(tolerances_from_json(j) == kDefaultTolerances);
  ordered_json partial = {{"trace_rel", 1e-9}};
  const auto t = tolerances_from_json(partial);
  CHECK(t.trace_rel == 1e-9);
  CHECK(t.cross_route == kDefaultTolerances.cross_route);
  CHECK_THROWS_AS(tolerances_from_json(ordered_json{{"nope", 1.0}}), std::invalid_argument);
  Tolerances u;
  CHECK(set_tolerance(u, "eigen_floor", 1e-11));
  CHECK(u.eigen_floor == 1e-11);
  CHECK_FALSE(set_tolerance(u, "nope", 1.0));
}

TEST_CASE("verify_all on the default grid") {
  CHECK_THROWS_AS(verify_all({{}, {0.1}, {0.05}}), std::invalid_argument);
  CHECK_THROWS_AS(verify_all({{30}, {}, {0.05}}), std::invalid_argument);
  CHECK_THROWS_AS(verify_all({{30}, {0.1}, {}}), std::invalid_argument);

  const auto r = verify_all(Grids{});
  CHECK(r.pass);
  CHECK(r.version == std::string(kVersion));
  for (const auto& c : r.checks)
    if (c.mandatory) {
      CAPTURE(c.name);
      CHECK(c.satisfied);
    }
  // canonical order
  for (std::size_t i = 0; i + 1 < r.checks.size(); ++i) CHECK(r.checks[i].name <= r.checks[i + 1].name);

  // each family appears
  for (const char* name : {"trace_identity", "cross_route_agreement", "eigenvalue_comparison", "plunge_count",
                           "plunge_count_vs_reference", "plunge_energy_sum", "superexponential_decay",
                           "spectrum_l2_distance", "hs_difference", "hs_lower_bound", "turan_formula",
                           "comparison_constant_upper", "comparison_constant_lower", "plunge_count_asymptotic"}) {
    CAPTURE(name);
    CHECK(std::any_of(r.checks.begin(), r.checks.end(), [&](const BoundCheck& c) { return c.name == name; }));
  }

  // JSON round trip
  const auto j = to_json(r);
  CHECK(j.contains("version"));
  CHECK(j.contains("tolerances"));
  CHECK(j.contains("pass"));
  const auto& first = j["checks"][0];
  for (const char* key : {"name", "paper_ref", "params", "bound", "measured", "satisfied", "margin"})
    CHECK(first.contains(key));
  const auto back = report_from_json(ordered_json::parse(j.dump()));
  CHECK(back == r);

  // deterministic
  CHECK(to_json(verify_all(Grids{})).dump() == j.dump());
}
