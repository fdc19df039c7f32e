#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"
#include "slepian/discrete.hpp"
#include "slepian/errors.hpp"

using namespace slepian;
using namespace slepian::discrete;

namespace {

constexpr double kPi = std::numbers::pi;
const Tolerances tol = kDefaultTolerances;

// Independent Toeplitz build and dense solve
Eigen::VectorXd oracle_values(int N, double W) {
  Eigen::MatrixXd a(N, N);
  for (int i = 0; i < N; ++i)
    for (int j = 0; j < N; ++j)
      a(i, j) = i == j ? 2.0 * W : std::sin(2.0 * kPi * W * (i - j)) / (kPi * (i - j));
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(a, Eigen::EigenvaluesOnly);
  return es.eigenvalues().reverse();
}

const std::vector<int> kNs{1, 2, 5, 16, 30, 60, 120};
const std::vector<double> kWs{0.05, 0.1, 0.2, 0.25, 0.3, 0.4, 0.45};

}  // namespace

TEST_CASE("parameter validation") {
  CHECK_THROWS_AS(spectrum({0, 0.2}), RangeError);
  CHECK_THROWS_AS(spectrum({4, 0.0}), RangeError);
  CHECK_THROWS_AS(spectrum({4, 0.5}), RangeError);
  CHECK_THROWS_AS(spectrum({4, -0.1}), RangeError);
  CHECK_THROWS_AS(build_tridiag({4, 0.7}), RangeError);
  CHECK_NOTHROW(spectrum({4, 0.49}));
  CHECK(parse_method("toeplitz") == Method::toeplitz);
  CHECK(parse_method("tridiag") == Method::tridiag);
  CHECK_THROWS_AS(parse_method("lanczos"), std::invalid_argument);
}

TEST_CASE("build_toeplitz entries") {
  CHECK(build_toeplitz({1, 0.37})(0, 0) == 0.74);
  const auto a = build_toeplitz({2, 0.25});
  CHECK(a(0, 0) == 0.5);
  CHECK(a(1, 1) == 0.5);
  CHECK(std::abs(a(0, 1) - 1.0 / kPi) <= 1e-16);
  CHECK(std::abs(build_toeplitz({3, 0.25})(0, 2)) <= 1e-16);
}

TEST_CASE("build_tridiag entries") {
  const auto t1 = build_tridiag({1, 0.3});
  CHECK(t1.diagonal == std::vector<double>{0.0});
  CHECK(t1.off_diagonal.empty());

  const auto t2 = build_tridiag({2, 0.25});
  CHECK(std::abs(t2.diagonal[0]) <= 1e-16);
  CHECK(std::abs(t2.diagonal[1]) <= 1e-16);
  CHECK(t2.off_diagonal == std::vector<double>{0.5});

  const auto t3 = build_tridiag({3, 0.1});
  CHECK(std::abs(t3.diagonal[0] - 0.8090169943749475) <= 1e-15);
  CHECK(t3.diagonal[1] == 0.0);
  CHECK(std::abs(t3.diagonal[2] - 0.8090169943749475) <= 1e-15);
  CHECK(t3.off_diagonal == std::vector<double>{1.0, 1.0});
}

TEST_CASE("spectrum closed forms") {
  for (Method m : {Method::toeplitz, Method::tridiag}) {
    CAPTURE(to_string(m));
    const auto s1 = spectrum({1, 0.2}, m);
    REQUIRE(s1.size() == 1);
    CHECK(s1.values[0] == doctest::Approx(0.4).epsilon(1e-15));
    CHECK(s1.dpss(0, 0) == 1.0);

    const auto s2 = spectrum({2, 0.25}, m);
    CHECK(std::abs(s2.values[0] - (0.5 + 1.0 / kPi)) <= 1e-14);
    CHECK(std::abs(s2.values[1] - (0.5 - 1.0 / kPi)) <= 1e-14);
    CHECK(std::abs(s2.dpss(0, 0) - std::sqrt(0.5)) <= 1e-14);
    CHECK(std::abs(s2.dpss(1, 0) - std::sqrt(0.5)) <= 1e-14);

    const auto s60 = spectrum({60, 0.3}, m);
    double sum = 0.0;
    for (double v : s60.values) sum += v;
    CHECK(std::abs(sum - 36.0) <= 1e-9);
  }
}

TEST_CASE("spectrum matches an independent dense solver") {
  for (int N : {5, 30, 60, 120})
    for (double W : {0.1, 0.3, 0.45}) {
      CAPTURE(N);
      CAPTURE(W);
      const auto ref = oracle_values(N, W);
      for (Method m : {Method::toeplitz, Method::tridiag}) {
        const auto s = spectrum({N, W}, m);
        for (int k = 0; k < N; ++k)
          if (ref(k) >= tol.eigen_floor)
            CHECK(std::abs(s.values[static_cast<std::size_t>(k)] - ref(k)) <= tol.cross_route);
      }
    }
}

TEST_CASE("spectrum invariants across the parameter grid") {
  for (int N : kNs)
    for (double W : kWs) {
      CAPTURE(N);
      CAPTURE(W);
      const auto t = spectrum({N, W}, Method::toeplitz);
      const auto r = spectrum({N, W}, Method::tridiag);
      for (const auto* s : {&t, &r}) {
        double sum = 0.0;
        for (double v : s->values) sum += v;
        CHECK(std::abs(sum - 2.0 * N * W) <= tol.trace_rel * 2.0 * N * W);
        for (std::size_t k = 0; k < s->size(); ++k) {
          // (0,1) up to the floor: 1 - lambda below it is not representable
          if (s->values[k] >= tol.untrusted_floor) {
            CHECK(s->values[k] > 0.0);
            CHECK(s->values[k] < 1.0 + tol.untrusted_floor);
          }
          // strictly descending, ties allowed within the floor
          if (k + 1 < s->size() && s->values[k + 1] >= tol.untrusted_floor) {
            CHECK(s->values[k] > s->values[k + 1] - tol.untrusted_floor);
            if (s->values[k] < 1.0 - tol.untrusted_floor) CHECK(s->values[k] > s->values[k + 1]);
          }
          // mode k has parity (-1)^k
          const double par = k % 2 == 0 ? 1.0 : -1.0;
          for (std::size_t n = 0; n < s->size(); ++n)
            CHECK(std::abs(s->dpss(n, k) - par * s->dpss(s->size() - 1 - n, k)) <= tol.symmetry);
          // norm, sign convention and palindromic magnitudes
          double norm = 0.0;
          double big = 0.0;
          std::size_t arg = 0;
          for (std::size_t n = 0; n < s->size(); ++n) {
            const double v = s->dpss(n, k);
            norm += v * v;
            if (std::abs(v) > big * (1.0 + tol.sign_tie_rel)) {
              big = std::abs(v);
              arg = n;
            }
            CHECK(std::abs(std::abs(v) - std::abs(s->dpss(s->size() - 1 - n, k))) <= tol.symmetry);
          }
          CHECK(std::abs(std::sqrt(norm) - 1.0) <= 1e-13);
          CHECK(s->dpss(arg, k) > 0.0);
        }
      }
      // cross-route agreement and eigenvector alignment
      for (std::size_t k = 0; k < t.size(); ++k) {
        if (t.values[k] < tol.eigen_floor) continue;
        CHECK(std::abs(t.values[k] - r.values[k]) <= tol.cross_route);
        const double gap_lo = k > 0 ? t.values[k - 1] - t.values[k] : 1.0;
        const double gap_hi = k + 1 < t.size() ? t.values[k] - t.values[k + 1] : 1.0;
        if (std::min(gap_lo, gap_hi) < tol.eigvec_gap) continue;
        double dot = 0.0;
        for (std::size_t n = 0; n < t.size(); ++n) dot += t.dpss(n, k) * r.dpss(n, k);
        CHECK(std::abs(dot) >= 1.0 - tol.eigvec_alignment);
      }
    }
}

TEST_CASE("sign convention") {
  Matrix v(3, 2);
  v(0, 0) = -0.2;
  v(1, 0) = -0.9;
  v(2, 0) = 0.3;
  v(0, 1) = -0.5;
  v(1, 1) = 0.1;
  v(2, 1) = 0.5;
  apply_sign_convention(v);
  CHECK(v(1, 0) == 0.9);
  CHECK(v(0, 0) == 0.2);
  // tie between index 0 and 2: lowest index is made positive
  CHECK(v(0, 1) == 0.5);
  CHECK(v(2, 1) == -0.5);
}

TEST_CASE("eval_dpswf closed forms and periodicity") {
  const auto s1 = spectrum({1, 0.3});
  for (double x : {-0.7, 0.0, 0.33, 5.1}) {
    CHECK(eval_dpswf(s1, 0, x).real() == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(eval_dpswf(s1, 0, x).imag() == 0.0);
  }
  const auto s2 = spectrum({2, 0.25});
  CHECK(std::norm(eval_dpswf(s2, 0, 0.0)) == doctest::Approx(2.0).epsilon(1e-14));
  CHECK_THROWS_AS(eval_dpswf(s2, 2, 0.0), RangeError);

  std::mt19937 gen(17);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  for (int N : {5, 8, 30, 61}) {
    const auto s = spectrum({N, 0.2});
    const double sign = (N - 1) % 2 == 0 ? 1.0 : -1.0;
    for (int i = 0; i < 100; ++i) {
      const double x = u(gen);
      for (std::size_t k : {std::size_t{0}, std::size_t{1}, std::size_t{3}}) {
        const auto a = eval_dpswf(s, k, x + 1.0);
        const auto b = sign * eval_dpswf(s, k, x);
        CHECK(std::abs(a - b) <= tol.periodicity);
        // real by parity of the coefficients
        CHECK(std::abs(eval_dpswf(s, k, x).imag()) <= 1e-12);
      }
    }
  }
}

TEST_CASE("eval_dpswf_grid matches pointwise evaluation") {
  const auto s = spectrum({30, 0.2});
  const std::vector<double> pts{-1.0, -0.3, 0.0, 0.41, 0.9};
  const auto g = eval_dpswf_grid(s, 7, pts, 0.2);
  for (std::size_t i = 0; i < pts.size(); ++i)
    for (std::size_t k = 0; k < 7; ++k) CHECK(std::abs(g(i, k) - eval_dpswf(s, k, 0.2 * pts[i])) <= 1e-13);
}

TEST_CASE("double orthogonality") {
  CHECK(concentration(spectrum({1, 0.15}), 0, 0) == doctest::Approx(0.3).epsilon(1e-15));
  for (int N : {16, 60, 120})
    for (double W : {0.1, 0.3}) {
      const auto s = spectrum({N, W});
      const std::size_t K = s.size();
      const Matrix c = concentration_matrix(s, K);
      for (std::size_t j = 0; j < K; ++j)
        for (std::size_t k = 0; k < K; ++k) {
          CHECK(std::abs(c(j, k) - (j == k ? s.values[j] : 0.0)) <= tol.double_orthogonality);
          double dot = 0.0;
          for (std::size_t n = 0; n < K; ++n) dot += s.dpss(n, j) * s.dpss(n, k);
          CHECK(std::abs(dot - (j == k ? 1.0 : 0.0)) <= tol.orthonormality);
        }
      CHECK(concentration(s, 2, 2) == doctest::Approx(s.values[2]).epsilon(1e-10));
    }
}

TEST_CASE("concentration equals the band integral of U_j conj(U_k)") {
  const auto s = spectrum({12, 0.2});
  // composite Simpson on [-W, W]; U is a trigonometric polynomial so this converges fast
  const int m = 4000;
  const double W = 0.2;
  const double h = 2.0 * W / m;
  for (std::size_t j : {0u, 1u, 4u})
    for (std::size_t k : {0u, 2u, 4u}) {
      std::complex<double> acc = 0.0;
      for (int i = 0; i <= m; ++i) {
        const double x = -W + i * h;
        const double w = i == 0 || i == m ? 1.0 : (i % 2 == 1 ? 4.0 : 2.0);
        acc += w * eval_dpswf(s, j, x) * std::conj(eval_dpswf(s, k, x));
      }
      acc *= h / 3.0;
      CHECK(std::abs(acc.real() - concentration(s, j, k)) <= 1e-10);
    }
}

TEST_CASE("spectral symmetry under W -> 1/2 - W") {
  CHECK(symmetry_check(1, 0.2) <= 1e-15);
  for (Method m : {Method::toeplitz, Method::tridiag}) {
    CHECK(symmetry_check(60, 0.1, m) <= tol.symmetry);
    CHECK(symmetry_check(31, 0.37, m) <= tol.symmetry);
    const auto s = spectrum({40, 0.25}, m);
    for (std::size_t k = 0; k < 40; ++k) CHECK(std::abs(s.values[k] + s.values[39 - k] - 1.0) <= tol.symmetry);
  }
}

TEST_CASE("extend_dpss") {
  const auto s1 = spectrum({1, 0.25});
  CHECK(std::abs(extend_dpss(s1, 0, 1) - 2.0 / kPi) <= 1e-15);

  const auto s = spectrum({40, 0.2});
  for (std::size_t k = 0; k < 10; ++k)
    for (long n = 0; n < 40; ++n)
      CHECK(std::abs(extend_dpss(s, k, n) - s.dpss(static_cast<std::size_t>(n), k)) <= 1e-9);
  // |sum_m sinc * v_m| <= sum_m |v_m| / (pi |n - m|) <= sqrt(N) / (pi (|n| - N))
  for (std::size_t k = 0; k < 12; ++k)
    for (long n : {80L, 400L, 4000L, -400L, -4000L}) {
      const double env = std::sqrt(40.0) / (M_PI * (std::abs(n) - 40.0) * s.values[k]);
      CHECK(std::abs(extend_dpss(s, k, n)) <= env);
    }
  // modes in the plunge region have resolved edge values and decay from there
  for (std::size_t k : {7u, 8u, 9u}) {
    CHECK(std::abs(extend_dpss(s, k, 400)) <= std::abs(extend_dpss(s, k, 40)));
    CHECK(std::abs(extend_dpss(s, k, -400)) <= std::abs(extend_dpss(s, k, -40)));
  }
  const std::size_t last = s.size() - 1;
  REQUIRE(s.values[last] < tol.tail_floor);
  CHECK_THROWS_AS(extend_dpss(s, last, 50), IllConditioned);
}

TEST_CASE("commutation defect") {
  CHECK(commutation_defect({1, 0.3}) == 0.0);
  CHECK(commutation_defect({2, 0.25}) <= 1e-14);
  CHECK(commutation_defect({60, 0.3}) <= tol.commutation);
  CHECK(commutation_defect({120, 0.1}) <= tol.commutation);
}

TEST_CASE("spectrum is deterministic") {
  const auto a = spectrum({60, 0.3});
  const auto b = spectrum({60, 0.3});
  CHECK(a.values == b.values);
  CHECK(a.dpss == b.dpss);
}
