#include "slepian/cli.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <optional>
#include <sstream>
#include <stdexcept>

#include "CLI11.hpp"
#include "slepian/approx.hpp"
#include "slepian/bounds.hpp"
#include "slepian/continuous.hpp"
#include "slepian/discrete.hpp"
#include "slepian/errors.hpp"

namespace slepian::cli {

namespace {

constexpr double kPi = std::numbers::pi;

// reference l2 spectrum distances at N = 60
constexpr std::array<std::pair<double, double>, 4> kTable1Reference{
    {{0.1, 4.15e-3}, {0.2, 1.65e-2}, {0.3, 3.98e-2}, {0.4, 8.51e-2}}};
constexpr double kExample3K60 = 8.64e-3;
constexpr double kExample3K36 = 2.43e-2;

struct StrictFailure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

double to_real(const std::string& key, const std::string& v) {
  std::size_t pos = 0;
  double d = 0.0;
  try {
    d = std::stod(v, &pos);
  } catch (const std::exception&) {
    pos = 0;
  }
  if (pos == 0 || trim(v.substr(pos)) != "")
    throw std::invalid_argument("config: '" + key + "' expects a number, got '" + v + "'");
  return d;
}

int to_int(const std::string& key, const std::string& v) {
  const double d = to_real(key, v);
  if (d != std::floor(d) || std::abs(d) > 1e9)
    throw std::invalid_argument("config: '" + key + "' expects an integer, got '" + v + "'");
  return static_cast<int>(d);
}

template <typename T, typename F>
std::vector<T> to_list(const std::string& key, const std::string& v, F conv) {
  std::vector<T> out;
  std::stringstream ss(v);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(conv(key, trim(item)));
  if (out.empty()) throw std::invalid_argument("config: '" + key + "' is empty");
  return out;
}

bool to_bool(const std::string& key, const std::string& v) {
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  throw std::invalid_argument("config: '" + key + "' expects a boolean, got '" + v + "'");
}

std::string csv_row(const std::vector<std::string>& cells) {
  std::string s;
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i) s += ',';
    s += cells[i];
  }
  s += '\n';
  return s;
}

class Output {
 public:
  Output(std::ostream& out, const RunConfig& cfg) : out_(out), cfg_(cfg) {}

  std::filesystem::path resolve(const std::string& path) const {
    std::filesystem::path p(path);
    if (p.is_relative() && !cfg_.out_dir.empty()) p = std::filesystem::path(cfg_.out_dir) / p;
    return p;
  }

  // Content is fully formed before anything is written.
  void emit(const std::string& path, const std::string& content) const {
    if (path.empty()) {
      out_ << content;
      return;
    }
    const auto p = resolve(path);
    if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
    std::ofstream f(p, std::ios::binary);
    if (!f) throw std::invalid_argument("cannot open output file " + p.string());
    f << content;
    if (!f) throw std::invalid_argument("cannot write output file " + p.string());
  }

 private:
  std::ostream& out_;
  const RunConfig& cfg_;
};

approx::TestFunction read_samples(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open samples file " + path);
  std::vector<double> x;
  std::vector<double> y;
  std::string line;
  bool first = true;
  while (std::getline(in, line)) {
    line = trim(line);
    if (line.empty() || line[0] == '#') continue;
    const auto comma = line.find(',');
    if (comma == std::string::npos) throw std::invalid_argument("samples: expected 'x,y' rows");
    try {
      std::size_t p1 = 0;
      std::size_t p2 = 0;
      const std::string a = trim(line.substr(0, comma));
      const std::string b = trim(line.substr(comma + 1));
      const double xv = std::stod(a, &p1);
      const double yv = std::stod(b, &p2);
      if (p1 != a.size() || p2 != b.size()) throw std::invalid_argument("trailing text");
      x.push_back(xv);
      y.push_back(yv);
    } catch (const std::exception&) {
      if (!first) throw std::invalid_argument("samples: malformed row '" + line + "'");
    }
    first = false;
  }
  if (x.empty()) throw std::invalid_argument("samples file has no data rows");
  return approx::TestFunction::samples(std::move(x), std::move(y));
}

std::string replace_extension(const std::string& path, const std::string& suffix) {
  std::filesystem::path p(path);
  p.replace_extension();
  return p.string() + suffix;
}

std::string coefficient_json(const approx::ProjectionResult& r) {
  nlohmann::ordered_json j;
  j["K"] = r.K;
  j["domain"] = r.domain == approx::Domain::native ? "native" : "dilated";
  j["residual_l2"] = r.residual_l2;
  j["residual_sup"] = r.residual_sup;
  j["quadrature_order"] = r.quadrature_order;
  j["direct_modes"] = r.direct_modes;
  j["modes"] = r.modes;
  j["excluded"] = r.excluded;
  auto& c = j["coefficients"] = nlohmann::ordered_json::array();
  for (const auto& v : r.coefficients) c.push_back({v.real(), v.imag()});
  return j.dump(2) + "\n";
}

}  // namespace

std::string format_real(double v) { return fmt::format("{:.16e}", v); }

RunConfig parse_config(const std::string& text) {
  RunConfig c;
  std::stringstream ss(text);
  std::string line;
  int lineno = 0;
  while (std::getline(ss, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw std::invalid_argument("config line " + std::to_string(lineno) + ": expected key = value");
    const std::string key = trim(line.substr(0, eq));
    const std::string val = trim(line.substr(eq + 1));
    if (key == "N_grid") {
      c.N_grid = to_list<int>(key, val, to_int);
    } else if (key == "W_grid") {
      c.W_grid = to_list<double>(key, val, to_real);
    } else if (key == "eps_grid") {
      c.eps_grid = to_list<double>(key, val, to_real);
    } else if (key == "turan_N") {
      c.turan_N = to_list<int>(key, val, to_int);
    } else if (key == "quadrature_order") {
      c.quadrature_order = to_int(key, val);
    } else if (key == "out_dir") {
      c.out_dir = val;
    } else if (key == "strict") {
      c.strict = to_bool(key, val);
    } else if (!bounds::set_tolerance(c.tolerances, key, to_real(key, val))) {
      throw std::invalid_argument("config: unknown key '" + key + "'");
    }
  }
  validate(c);
  return c;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open config file " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

void validate(const RunConfig& c) {
  for (const auto& f : kToleranceFields)
    if (!(c.tolerances.*f.member > 0.0))
      throw std::invalid_argument("tolerance '" + std::string(f.name) + "' must be positive");
  for (int N : c.N_grid)
    if (N < 1) throw std::invalid_argument("N values must be >= 1");
  for (int N : c.turan_N)
    if (N < 2) throw std::invalid_argument("turan_N values must be >= 2");
  for (double W : c.W_grid)
    if (!(W > 0.0 && W < 0.5)) throw std::invalid_argument("W values must lie in (0, 1/2)");
  for (double e : c.eps_grid)
    if (!(e > 0.0 && e < 0.5)) throw std::invalid_argument("eps values must lie in (0, 1/2)");
  if (c.quadrature_order < 0) throw std::invalid_argument("quadrature_order must be >= 0");
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"DPSS / DPSWF spectra, bounds and approximation experiments", "slepian"};
  app.require_subcommand(1);
  app.fallthrough();
  std::string config_path;
  bool strict_flag = false;
  app.add_option("--config", config_path, "flat key = value config file");
  app.add_flag("--strict", strict_flag, "exit 3 when a verification fails");

  int N = 60;
  double W = 0.3;
  std::string method = "tridiag";
  std::string out_path;
  bool figure = false;
  auto* eigs = app.add_subcommand("eigs", "eigenvalues of the concentration matrix");
  eigs->add_option("--N", N, "sequence length")->required();
  eigs->add_option("--W", W, "bandwidth in (0, 1/2)")->required();
  eigs->add_option("--method", method, "toeplitz | tridiag");
  eigs->add_option("--out", out_path, "CSV output (stdout when absent)");
  eigs->add_flag("--figure", figure, "add continuous eigenvalues and log10 columns");

  auto* table1 = app.add_subcommand("table1", "l2 distance between discrete and continuous spectra");
  table1->add_option("--out", out_path, "CSV output");

  std::vector<int> N_list;
  std::vector<double> W_list;
  std::vector<double> eps_list;
  auto* bnd = app.add_subcommand("bounds", "verify every bound on a parameter grid");
  bnd->add_option("--N", N_list, "comma-separated N grid")->delimiter(',');
  bnd->add_option("--W", W_list, "comma-separated W grid")->delimiter(',');
  bnd->add_option("--eps", eps_list, "comma-separated eps grid")->delimiter(',');
  bnd->add_option("--out", out_path, "JSON output");

  std::string target = "sinc";
  std::string preset;
  std::string samples_path;
  std::string domain = "dilated";
  std::string curve_path;
  double alpha = 56.0;
  double s_exp = 1.0;
  int K = 60;
  auto* proj = app.add_subcommand("project", "project a test function onto DPSWFs");
  proj->add_option("--target", target, "sinc | weierstrass | samples")
      ->check(CLI::IsMember({"sinc", "weierstrass", "samples"}));
  proj->add_option("--preset", preset, "example2 | example3")
      ->check(CLI::IsMember({"example2", "example3"}));
  proj->add_option("--samples", samples_path, "x,y rows for --target samples");
  proj->add_option("--domain", domain, "native | dilated")
      ->check(CLI::IsMember({"native", "dilated"}));
  proj->add_option("--N", N, "sequence length");
  proj->add_option("--W", W, "bandwidth");
  proj->add_option("--K", K, "number of modes");
  proj->add_option("--alpha", alpha, "sinc frequency");
  proj->add_option("--s", s_exp, "Weierstrass exponent");
  proj->add_option("--out", out_path, "ProjectionResult JSON");
  proj->add_option("--curve", curve_path, "residual-vs-K CSV");

  double eps = 0.05;
  auto* cnt = app.add_subcommand("count", "plunge-region eigenvalue count against its bounds");
  cnt->add_option("--N", N)->required();
  cnt->add_option("--W", W)->required();
  cnt->add_option("--eps", eps)->required();
  cnt->add_option("--out", out_path);

  auto* sym = app.add_subcommand("symmetry", "defect of lambda_k(1/2-W) = 1 - lambda_{N-1-k}(W)");
  sym->add_option("--N", N)->required();
  sym->add_option("--W", W)->required();
  sym->add_option("--method", method);
  sym->add_option("--out", out_path);

  std::vector<int> K_list;
  std::optional<double> b_opt;
  auto* pd = app.add_subcommand("projector-distance", "distance between eigenprojectors");
  pd->add_option("--N", N)->required();
  pd->add_option("--W", W)->required();
  pd->add_option("--K", K_list, "comma-separated truncations")->delimiter(',')->required();
  pd->add_option("--b", b_opt, "parameter b > log(3)/pi for the bound");
  pd->add_option("--out", out_path);

  double turan_W = 1.0 / 6.0;
  auto* tur = app.add_subcommand("turan", "empirical concentration constant");
  tur->add_option("--W", turan_W, "bandwidth in [1/6, 1/2)");
  tur->add_option("--N", N_list, "comma-separated N list")->delimiter(',');
  tur->add_option("--out", out_path);

  std::vector<std::string> rev(args.rbegin(), args.rend());
  try {
    app.parse(rev);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kUsage;
  }

  try {
    if (config_path.empty())
      if (const char* env = std::getenv(kConfigEnv); env != nullptr && *env != '\0')
        config_path = env;
    RunConfig cfg = config_path.empty() ? RunConfig{} : load_config(config_path);
    const bool strict = strict_flag || cfg.strict;
    const Tolerances& tol = cfg.tolerances;
    const Output sink(out, cfg);

    if (*eigs) {
      const discrete::DiscreteParams p{N, W};
      p.validate();
      const auto m = discrete::parse_method(method);
      const auto s = discrete::spectrum(p, m, tol);
      std::string csv;
      if (!figure) {
        csv = csv_row({"k", "lambda_discrete", "method", "N", "W"});
        for (std::size_t k = 0; k < s.size(); ++k)
          csv += csv_row({std::to_string(k), format_real(s.values[k]), discrete::to_string(m),
                          std::to_string(N), format_real(W)});
      } else {
        continuous::NystromOptions opt;
        opt.order = std::max(continuous::default_order(kPi * N * W), N + 10);
        opt.vectors = false;
        const auto cs = continuous::nystrom_spectrum(kPi * N * W, opt, tol);
        csv = csv_row({"k", "lambda_discrete", "lambda_continuous", "log10_discrete",
                       "log10_continuous", "method", "N", "W"});
        auto lg = [](double v) { return v > 0.0 ? format_real(std::log10(v)) : std::string("nan"); };
        for (std::size_t k = 0; k < s.size(); ++k)
          csv += csv_row({std::to_string(k), format_real(s.values[k]), format_real(cs.values[k]),
                          lg(s.values[k]), lg(cs.values[k]), discrete::to_string(m),
                          std::to_string(N), format_real(W)});
      }
      sink.emit(out_path, csv);
      return kOk;
    }

    if (*table1) {
      std::string csv = csv_row({"W", "c", "l2_diff", "bound", "reference"});
      bool ok = true;
      for (const auto& [w, ref] : kTable1Reference) {
        const auto sc = bounds::compare_spectra(60, w);
        csv += csv_row({format_real(w), format_real(sc.c), format_real(sc.l2), format_real(sc.bound),
                        format_real(ref)});
        if (std::abs(sc.l2 - ref) > tol.table1_rel * ref || sc.l2 > sc.bound) ok = false;
      }
      sink.emit(out_path, csv);
      if (strict && !ok) throw StrictFailure("table values outside tolerance");
      return kOk;
    }

    if (*bnd) {
      bounds::Grids g;
      g.N = N_list.empty() ? cfg.N_grid : N_list;
      g.W = W_list.empty() ? cfg.W_grid : W_list;
      g.eps = eps_list.empty() ? cfg.eps_grid : eps_list;
      const auto rep = bounds::verify_all(g, tol);
      sink.emit(out_path, bounds::to_json(rep).dump(2) + "\n");
      if (strict && !rep.pass)
        throw StrictFailure(std::to_string(rep.failures()) + " mandatory checks failed");
      return kOk;
    }

    if (*proj) {
      if (preset == "example2") {
        target = "sinc";
        alpha = 56.0;
        N = 60;
        W = 0.3;
        K = 60;
        domain = "dilated";
      } else if (preset == "example3") {
        target = "weierstrass";
        s_exp = 1.0;
        N = 60;
        W = 0.3;
        if (proj->count("--K") == 0) K = 60;
        domain = "dilated";
      }
      const discrete::DiscreteParams p{N, W};
      p.validate();
      if (K < 1 || K > N) throw RangeError("K must lie in [1, N]");
      const approx::TestFunction f = target == "sinc"          ? approx::TestFunction::sinc(alpha)
                                     : target == "weierstrass" ? approx::TestFunction::weierstrass(s_exp)
                                                               : read_samples(samples_path);
      const auto s = discrete::spectrum(p, discrete::Method::tridiag, tol);
      approx::ProjectionOptions opt;
      opt.quadrature_order = cfg.quadrature_order;
      opt.lambda_floor = tol.untrusted_floor;
      opt.drop_floor = tol.projection_floor;
      const auto dom = domain == "native" ? approx::Domain::native : approx::Domain::dilated;
      const auto curve = approx::residual_curve(f, s, dom, K, opt);
      const auto& res = curve.back();

      std::string csv = csv_row({"K", "residual_l2", "residual_sup", "modes"});
      for (const auto& r : curve)
        csv += csv_row({std::to_string(r.K), format_real(r.residual_l2), format_real(r.residual_sup),
                        std::to_string(r.modes.size())});
      if (curve_path.empty() && !out_path.empty()) curve_path = replace_extension(out_path, "_curve.csv");
      sink.emit(out_path, coefficient_json(res));
      if (!curve_path.empty()) sink.emit(curve_path, csv);

      if (strict) {
        if (preset == "example2" && !(res.residual_sup <= tol.example2_sup))
          throw StrictFailure("sup residual above tolerance");
        if (preset == "example3") {
          const double ref = K == 60 ? kExample3K60 : K == 36 ? kExample3K36 : 0.0;
          if (ref > 0.0 && std::abs(res.residual_l2 - ref) > tol.example3_rel * ref)
            throw StrictFailure("L2 residual outside tolerance");
        }
      }
      return kOk;
    }

    if (*cnt) {
      const discrete::DiscreteParams p{N, W};
      p.validate();
      const double bound = bounds::thm1_count_bound(N, W, eps);
      const auto s = discrete::spectrum(p, discrete::Method::tridiag, tol);
      const int measured = bounds::measured_count(s, eps);
      const std::string zhu = N >= 2 ? format_real(bounds::zhu_count_bound(N, eps)) : "nan";
      std::string csv = csv_row({"N", "W", "eps", "measured", "count_bound", "reference_bound",
                                 "asymptotic_estimate"});
      csv += csv_row({std::to_string(N), format_real(W), format_real(eps), std::to_string(measured),
                      format_real(bound), zhu, format_real(bounds::karnik_count_estimate(N, eps))});
      sink.emit(out_path, csv);
      if (strict && measured > bound) throw StrictFailure("measured count above bound");
      return kOk;
    }

    if (*sym) {
      discrete::DiscreteParams{N, W}.validate();
      const double d = discrete::symmetry_check(N, W, discrete::parse_method(method));
      sink.emit(out_path, csv_row({"N", "W", "defect"}) +
                              csv_row({std::to_string(N), format_real(W), format_real(d)}));
      if (strict && d > tol.symmetry) throw StrictFailure("symmetry defect above tolerance");
      return kOk;
    }

    if (*pd) {
      std::string csv = csv_row({"K", "distance", "c", "condition_holds", "bound"});
      bool ok = true;
      for (int k : K_list) {
        const auto r = continuous::projector_distance(N, W, k, b_opt, tol);
        csv += csv_row({std::to_string(k), format_real(r.distance), format_real(r.c),
                        r.condition_holds ? "true" : "false",
                        r.bound ? format_real(*r.bound) : std::string("nan")});
        if (r.distance > 1.0 + 1e-10) ok = false;
      }
      sink.emit(out_path, csv);
      if (strict && !ok) throw StrictFailure("projector distance above 1");
      return kOk;
    }

    if (*tur) {
      const auto r = bounds::turan_constant(turan_W, N_list.empty() ? cfg.turan_N : N_list, tol);
      nlohmann::ordered_json j;
      j["W"] = r.W;
      j["formula_value"] = r.formula_value;
      j["empirical_A"] = r.empirical_A;
      j["empirical_A_squared"] = r.empirical_A_squared;
      j["self_consistent"] = r.self_consistent;
      j["N"] = r.used_N;
      j["lambda_last"] = r.last_eigenvalue;
      sink.emit(out_path, j.dump(2) + "\n");
      if (strict && !r.self_consistent) throw StrictFailure("constant not self-consistent");
      return kOk;
    }
  } catch (const StrictFailure& e) {
    err << "verification failed: " << e.what() << '\n';
    return kStrict;
  } catch (const NumericalFailure& e) {
    err << "numerical failure: " << e.what() << '\n';
    return kNumerical;
  } catch (const IllConditioned& e) {
    err << "numerical failure: " << e.what() << '\n';
    return kNumerical;
  } catch (const RangeError& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const std::filesystem::filesystem_error& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  }
  return kUsage;
}

}  // namespace slepian::cli
