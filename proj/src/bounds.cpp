#include "slepian/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "slepian/continuous.hpp"
#include "slepian/errors.hpp"

namespace slepian::bounds {

namespace {

constexpr double kPi = std::numbers::pi;
const double kE = std::numbers::e;

void require(bool ok, const char* what) {
  if (!ok) throw RangeError(what);
}

void require_eps_half(double eps) { require(eps > 0.0 && eps < 0.5, "eps must lie in (0, 1/2)"); }

double sq(double x) { return x * x; }

// (1/pi^2) log(2NW) + 0.45 - (2/3) W^2 + W^2 sin^2(2c) / (6 c^2)
double eta_bound(int N, double W) {
  const double c = kPi * N * W;
  return std::log(2.0 * N * W) / (kPi * kPi) + 0.45 - 2.0 / 3.0 * W * W +
         W * W / (6.0 * c * c) * sq(std::sin(2.0 * c));
}

bool params_less(const Params& a, const Params& b) {
  const std::size_t n = std::min(a.size(), b.size());
  for (std::size_t i = 0; i < n; ++i) {
    if (a[i].first != b[i].first) return a[i].first < b[i].first;
    if (a[i].second != b[i].second) return a[i].second < b[i].second;
  }
  return a.size() < b.size();
}

BoundCheck skipped(std::string name, std::string ref, Params params, std::string why) {
  BoundCheck c;
  c.name = std::move(name);
  c.paper_ref = std::move(ref);
  c.params = std::move(params);
  c.mandatory = false;
  c.note = "skipped: " + std::move(why);
  return c;
}

struct Cell {
  int N;
  double W;
  discrete::DiscreteSpectrum ds;
  continuous::ContinuousSpectrum cs;
};

int comparison_order(int N, double W, int tail) {
  return std::max(continuous::default_order(kPi * N * W), N + tail + 10);
}

Cell make_cell(int N, double W, int tail, const Tolerances& tol) {
  continuous::NystromOptions opt;
  opt.order = comparison_order(N, W, tail);
  opt.vectors = false;
  return {N, W, discrete::spectrum({N, W}, discrete::Method::tridiag, tol),
          continuous::nystrom_spectrum(kPi * N * W, opt, tol)};
}

std::vector<BoundCheck> thm2_checks(const Cell& cell, const Tolerances& tol) {
  std::vector<BoundCheck> out;
  const double a = thm2_constant(cell.W);
  for (int n = 0; n < cell.N; ++n) {
    const double lt = cell.ds.values[static_cast<std::size_t>(n)];
    if (lt < tol.eigen_floor) continue;
    const double lc = cell.cs.values[static_cast<std::size_t>(n)];
    out.push_back(make_check("eigenvalue_comparison", "discrete_vs_continuous_eigenvalues",
                             {{"N", cell.N}, {"W", cell.W}, {"n", n}}, a * lc, lt,
                             tol.check_floor));
  }
  return out;
}

SpectrumComparison comparison_from(const Cell& cell, int tail) {
  SpectrumComparison sc;
  sc.N = cell.N;
  sc.W = cell.W;
  sc.c = kPi * cell.N * cell.W;
  sc.tail = tail;
  sc.order = cell.cs.order;
  double ss = 0.0;
  for (int k = 0; k < cell.N + tail; ++k) {
    const auto u = static_cast<std::size_t>(k);
    const double lt = k < cell.N ? cell.ds.values[u] : 0.0;
    ss += sq(lt - cell.cs.values[u]);
  }
  sc.l2 = std::sqrt(ss);
  sc.bound = continuous::hs_difference_bound(cell.W);
  return sc;
}

}  // namespace

BoundCheck make_check(std::string name, std::string ref, Params params, double bound,
                      double measured, double floor, bool mandatory) {
  BoundCheck c;
  c.name = std::move(name);
  c.paper_ref = std::move(ref);
  c.params = std::move(params);
  c.bound = bound;
  c.measured = measured;
  c.satisfied = measured <= bound + floor;
  c.margin = bound - measured;
  c.mandatory = mandatory;
  return c;
}

std::size_t BoundReport::failures() const {
  return static_cast<std::size_t>(std::count_if(checks.begin(), checks.end(), [](const auto& c) {
    return c.mandatory && !c.satisfied;
  }));
}

void BoundReport::finalize() {
  std::stable_sort(checks.begin(), checks.end(), [](const BoundCheck& a, const BoundCheck& b) {
    if (a.name != b.name) return a.name < b.name;
    return params_less(a.params, b.params);
  });
  pass = failures() == 0;
}

nlohmann::ordered_json tolerances_to_json(const Tolerances& t) {
  nlohmann::ordered_json j = nlohmann::ordered_json::object();
  for (const auto& f : kToleranceFields) j[std::string(f.name)] = t.*f.member;
  return j;
}

bool set_tolerance(Tolerances& t, const std::string& key, double value) {
  for (const auto& f : kToleranceFields)
    if (f.name == key) {
      t.*f.member = value;
      return true;
    }
  return false;
}

Tolerances tolerances_from_json(const nlohmann::ordered_json& j) {
  Tolerances t;
  for (const auto& [key, value] : j.items())
    if (!set_tolerance(t, key, value.get<double>()))
      throw std::invalid_argument("unknown tolerance '" + key + "'");
  return t;
}

nlohmann::ordered_json to_json(const BoundCheck& c) {
  nlohmann::ordered_json params = nlohmann::ordered_json::object();
  for (const auto& [k, v] : c.params) params[k] = v;
  nlohmann::ordered_json j;
  j["name"] = c.name;
  j["paper_ref"] = c.paper_ref;
  j["params"] = params;
  j["bound"] = c.bound;
  j["measured"] = c.measured;
  j["satisfied"] = c.satisfied;
  j["margin"] = c.margin;
  j["mandatory"] = c.mandatory;
  if (!c.note.empty()) j["note"] = c.note;
  return j;
}

nlohmann::ordered_json to_json(const BoundReport& r) {
  nlohmann::ordered_json j;
  j["version"] = r.version;
  j["tolerances"] = tolerances_to_json(r.tolerances);
  j["pass"] = r.pass;
  j["checks"] = nlohmann::ordered_json::array();
  for (const auto& c : r.checks) j["checks"].push_back(to_json(c));
  return j;
}

BoundCheck check_from_json(const nlohmann::ordered_json& j) {
  BoundCheck c;
  c.name = j.at("name").get<std::string>();
  c.paper_ref = j.at("paper_ref").get<std::string>();
  for (const auto& [k, v] : j.at("params").items()) c.params.emplace_back(k, v.get<double>());
  c.bound = j.at("bound").get<double>();
  c.measured = j.at("measured").get<double>();
  c.satisfied = j.at("satisfied").get<bool>();
  c.margin = j.at("margin").get<double>();
  c.mandatory = j.value("mandatory", true);
  c.note = j.value("note", std::string{});
  return c;
}

BoundReport report_from_json(const nlohmann::ordered_json& j) {
  BoundReport r;
  r.version = j.at("version").get<std::string>();
  r.tolerances = tolerances_from_json(j.at("tolerances"));
  r.pass = j.at("pass").get<bool>();
  for (const auto& c : j.at("checks")) r.checks.push_back(check_from_json(c));
  return r;
}

double lemma1_constant(double W) {
  require(W > 0.0 && W < 2.0 / (kE * kPi), "W must lie in (0, 2/(e pi))");
  return std::sqrt(2.0 * W) * (2.0 + 2.0 / (kE * kPi * W));
}

double lemma1_bound(int n, int N, double W) {
  const double cw = lemma1_constant(W);
  require(N >= 2, "N must be >= 2");
  const double edge = kE * kPi * W * (N - 1.0) / 2.0;
  require(n > edge && n <= N - 1, "n outside (e pi W (N-1)/2, N-1]");
  const double ratio = edge / n;
  return cw / (std::sqrt(N - 1.0) * std::log(1.0 / ratio)) * std::pow(ratio, n - 0.5);
}

double thm1_count_bound(int N, double W, double eps) {
  require_eps_half(eps);
  discrete::DiscreteParams{N, W}.validate();
  return eta_bound(N, W) / (eps * (1.0 - eps));
}

double zhu_count_bound(int N, double eps) {
  require_eps_half(eps);
  require(N >= 2, "N must be >= 2");
  const double a = 2.0 / (kPi * kPi);
  return (a * std::log(N - 1.0) + a * (2.0 * N - 1.0) / (N - 1.0)) / (eps * (1.0 - eps));
}

double karnik_count_estimate(int N, double eps) {
  require(N >= 1, "N must be >= 1");
  require(eps > 0.0, "eps must be positive");
  return 8.0 / (kPi * kPi) * std::log(8.0 * N + 12.0) * std::log(15.0 / eps);
}

int measured_count(const discrete::DiscreteSpectrum& s, double eps) {
  return static_cast<int>(std::count_if(s.values.begin(), s.values.end(), [eps](double v) {
    return v >= eps && v <= 1.0 - eps;
  }));
}

double thm2_constant(double W) {
  require(W > 0.0 && W < 0.5, "W must lie in (0, 1/2)");
  return 2.0 * kPi * kPi / sq(std::cos(kPi * W)) * sq(0.25 - W * W);
}

std::vector<BoundCheck> thm2_verify(int N, double W, const Tolerances& tol) {
  return thm2_checks(make_cell(N, W, 0, tol), tol);
}

double decay_bound(int k, int N, double W) {
  require(N >= 3, "N must be >= 3");
  require(W > 0.0 && W < 2.0 / (kE * kPi) * (N - 1.0) / N, "W above 2(N-1)/(e pi N)");
  require(k >= 2 && k <= N - 1 && k >= kE * kPi * N * W / 2.0, "k outside [e pi N W/2, N-1]");
  return 2.0 * std::exp(-(2.0 * k + 1.0) * std::log(2.0 * (k + 1.0) / (kE * kPi * N * W)));
}

DecayFit plunge_decay_fit(int N, double W, const Tolerances& tol) {
  discrete::DiscreteParams{N, W}.validate();
  const double c = kPi * N * W;
  const double lo = 2.0 * N * W + std::log(c) + 6.0;
  DecayFit fit;
  fit.n_first = static_cast<int>(std::ceil(lo));
  fit.n_last = std::min(static_cast<int>(std::floor(c)), N - 1);
  if (fit.n_first > fit.n_last) throw RangeError("decay-fit index range is empty");
  const auto s = discrete::spectrum({N, W}, discrete::Method::tridiag, tol);
  const double scale = std::log(c) + 5.0;
  double eta = std::numeric_limits<double>::infinity();
  for (int n = fit.n_first; n <= fit.n_last; ++n) {
    const double v = s.values[static_cast<std::size_t>(n)];
    if (v < tol.eigen_floor) continue;
    ++fit.used;
    // lambda_n <= 2 exp(-eta (n - 2NW) / scale)
    eta = std::min(eta, -std::log(v / 2.0) * scale / (n - 2.0 * N * W));
  }
  if (fit.used == 0) throw RangeError("no decay-fit eigenvalue above the floor");
  fit.eta = eta;
  return fit;
}

SlepianConstants slepian_constants(double W, double eps, int N) {
  require(eps > (kE * kPi - 6.0) / 4.0, "eps must exceed (e pi - 6)/4");
  require(N >= 3, "N must be >= 3");
  require(W > 0.0 && W <= 2.0 / (kE * kPi) * (N - 1.0) / N, "W above 2(N-1)/(e pi N)");
  return {2.0, 4.0 * W * (1.0 + eps) * std::log((4.0 * (1.0 + eps) + 2.0) / (kE * kPi))};
}

BoundCheck eta_sum(int N, double W, const Tolerances& tol) {
  const auto s = discrete::spectrum({N, W}, discrete::Method::tridiag, tol);
  double eta = 0.0;
  for (double v : s.values) eta += v * (1.0 - v);
  return make_check("plunge_energy_sum", "plunge_energy_sum", {{"N", N}, {"W", W}},
                    eta_bound(N, W), eta, tol.check_floor);
}

double turan_formula(double W) {
  require(W >= 1.0 / 6.0 - 1e-15 && W < 0.5, "W must lie in [1/6, 1/2)");
  return 2.0 / (1.0 - 2.0 * W) * std::log(2.0 / (kE * kPi * W));
}

TuranResult turan_constant(double W, const std::vector<int>& N_list, const Tolerances& tol) {
  TuranResult r;
  r.W = W;
  r.formula_value = turan_formula(W);
  for (int N : N_list) {
    require(N >= 2, "each N must be >= 2");
    const auto s = discrete::spectrum({N, W}, discrete::Method::tridiag, tol);
    const double last = s.values.back();
    if (last < tol.eigen_floor) continue;
    r.used_N.push_back(N);
    r.last_eigenvalue.push_back(last);
    r.empirical_A = std::max(r.empirical_A, -std::log(last) / ((1.0 - 2.0 * W) * (N - 1.0)));
  }
  if (r.used_N.empty())
    throw RangeError("every lambda~_{N-1} is below the floor; choose smaller N");
  r.empirical_A_squared = r.empirical_A / 2.0;
  r.self_consistent = true;
  for (std::size_t i = 0; i < r.used_N.size(); ++i) {
    const double lower = std::exp(-r.empirical_A * (1.0 - 2.0 * W) * (r.used_N[i] - 1.0));
    if (!(r.last_eigenvalue[i] >= lower * (1.0 - 1e-9))) r.self_consistent = false;
  }
  return r;
}

SpectrumComparison compare_spectra(int N, double W, int tail, discrete::Method method) {
  require(tail >= 0, "tail must be >= 0");
  discrete::DiscreteParams{N, W}.validate();
  continuous::NystromOptions opt;
  opt.order = comparison_order(N, W, tail);
  opt.vectors = false;
  const Cell cell{N, W, discrete::spectrum({N, W}, method),
                  continuous::nystrom_spectrum(kPi * N * W, opt)};
  return comparison_from(cell, tail);
}

BoundReport verify_all(const Grids& g, const Tolerances& tol) {
  if (g.N.empty() || g.W.empty() || g.eps.empty())
    throw std::invalid_argument("verification grids must be nonempty");
  for (int N : g.N)
    if (N < 1) throw std::invalid_argument("grid N values must be >= 1");
  for (double W : g.W)
    if (!(W > 0.0 && W < 0.5)) throw std::invalid_argument("grid W values must lie in (0, 1/2)");
  for (double e : g.eps)
    if (!(e > 0.0 && e < 0.5)) throw std::invalid_argument("grid eps values must lie in (0, 1/2)");

  BoundReport rep;
  rep.version = std::string(kVersion);
  rep.tolerances = tol;
  auto& out = rep.checks;
  constexpr int tail = 30;

  {
    double lo = 1e300;
    double hi = -1e300;
    for (int i = 1; i <= 1000; ++i) {
      const double a = thm2_constant(0.5 * i / 1001.0);
      lo = std::min(lo, a);
      hi = std::max(hi, a);
    }
    out.push_back(make_check("comparison_constant_upper", "comparison_constant_range", {}, 2.0,
                             hi, 0.0));
    out.push_back(make_check("comparison_constant_lower", "comparison_constant_range", {}, lo,
                             kPi * kPi / 8.0, 1e-12));
  }
  {
    const double f = turan_formula(1.0 / 6.0);
    out.push_back(make_check("turan_formula", "turan_constant", {{"W", 1.0 / 6.0}},
                             tol.turan_formula_abs, std::abs(f - 1.0206), 0.0));
    out.back().note = "formula value " + std::to_string(f);
  }

  for (int N : g.N)
    for (double W : g.W) {
      const Params pw{{"N", N}, {"W", W}};
      const Cell cell = make_cell(N, W, tail, tol);
      const double c = kPi * N * W;

      double sum = 0.0;
      for (double v : cell.ds.values) sum += v;
      out.push_back(make_check("trace_identity", "trace_identity", pw, tol.trace_rel * 2.0 * N * W,
                               std::abs(sum - 2.0 * N * W), 0.0));

      {
        const auto tp = discrete::spectrum({N, W}, discrete::Method::toeplitz, tol);
        double worst = 0.0;
        for (std::size_t k = 0; k < cell.ds.size(); ++k)
          if (tp.values[k] >= tol.eigen_floor || cell.ds.values[k] >= tol.eigen_floor)
            worst = std::max(worst, std::abs(tp.values[k] - cell.ds.values[k]));
        out.push_back(make_check("cross_route_agreement", "two_route_eigenvalues", pw,
                                 tol.cross_route, worst, 0.0));
      }

      const auto t2 = thm2_checks(cell, tol);
      out.insert(out.end(), t2.begin(), t2.end());

      for (double eps : g.eps) {
        Params pe = pw;
        pe.emplace_back("eps", eps);
        out.push_back(make_check("plunge_count", "plunge_count", pe, thm1_count_bound(N, W, eps),
                                 measured_count(cell.ds, eps), 0.0));
        if (N >= 2 && c >= 1.0)
          out.push_back(make_check("plunge_count_vs_reference", "plunge_count_comparison", pe,
                                   zhu_count_bound(N, eps), thm1_count_bound(N, W, eps), 0.0));
        out.push_back(make_check("plunge_count_asymptotic", "plunge_count_asymptotic", pe,
                                 karnik_count_estimate(N, eps), measured_count(cell.ds, eps), 0.0,
                                 false));
      }

      {
        double eta = 0.0;
        for (double v : cell.ds.values) eta += v * (1.0 - v);
        out.push_back(make_check("plunge_energy_sum", "plunge_energy_sum", pw, eta_bound(N, W), eta,
                                 tol.check_floor));
      }

      if (W < 2.0 / (kE * kPi) && N >= 2) {
        const double edge = kE * kPi * W * (N - 1.0) / 2.0;
        for (int n = static_cast<int>(std::floor(edge)) + 1; n <= N - 1; ++n) {
          const double v = cell.ds.values[static_cast<std::size_t>(n)];
          if (v < tol.eigen_floor) continue;
          Params pn = pw;
          pn.emplace_back("n", n);
          out.push_back(make_check("small_bandwidth_decay", "small_bandwidth_decay", pn,
                                   lemma1_bound(n, N, W), v, tol.check_floor));
        }
      } else {
        out.push_back(skipped("small_bandwidth_decay", "small_bandwidth_decay", pw,
                              "W outside (0, 2/(e pi))"));
      }

      if (N >= 3 && W < 2.0 / (kE * kPi) * (N - 1.0) / N) {
        const int k0 = std::max(2, static_cast<int>(std::ceil(kE * kPi * N * W / 2.0)));
        for (int k = k0; k <= N - 1; ++k) {
          const double v = cell.ds.values[static_cast<std::size_t>(k)];
          if (v < tol.eigen_floor) continue;
          Params pk = pw;
          pk.emplace_back("k", k);
          out.push_back(make_check("superexponential_decay", "superexponential_decay", pk,
                                   decay_bound(k, N, W), v, tol.check_floor));
        }
      } else {
        out.push_back(skipped("superexponential_decay", "superexponential_decay", pw,
                              "W above 2(N-1)/(e pi N)"));
      }

      try {
        const auto fit = plunge_decay_fit(N, W, tol);
        BoundCheck ch = make_check("plunge_decay_rate", "plunge_decay_rate", pw, fit.eta, 0.0, 0.0,
                                   false);
        ch.satisfied = fit.eta > 0.0;
        out.push_back(ch);
      } catch (const RangeError& e) {
        out.push_back(skipped("plunge_decay_rate", "plunge_decay_rate", pw, e.what()));
      }

      {
        const auto sc = comparison_from(cell, tail);
        out.push_back(
            make_check("spectrum_l2_distance", "spectrum_l2_distance", pw, sc.bound, sc.l2, 0.0));
        out.push_back(make_check("hs_difference", "hs_difference", pw, sc.bound,
                                 continuous::hs_norm_difference(N, W), 0.0));
      }

      if (c > 0.0) {
        double hs = 0.0;
        for (double v : cell.cs.values) hs += v * v;
        auto ch = make_check("hs_lower_bound", "hs_lower_bound", {{"c", c}}, hs,
                             continuous::hs_lower_bound(c), 0.0);
        ch.note = "bound holds the computed squared norm; measured holds the lower estimate";
        out.push_back(ch);
      }
    }
  rep.finalize();
  return rep;
}

}  // namespace slepian::bounds
