#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "slepian/config.hpp"

namespace slepian::cli {

enum Exit : int { kOk = 0, kUsage = 1, kNumerical = 2, kStrict = 3 };

/// Environment variable naming a config file when --config is absent.
inline constexpr const char* kConfigEnv = "SLEPIAN_CONFIG";

struct RunConfig {
  Tolerances tolerances;
  std::vector<int> N_grid{30, 60};
  std::vector<double> W_grid{0.1, 0.2, 0.3, 0.4};
  std::vector<double> eps_grid{0.01, 0.05, 0.2};
  std::vector<int> turan_N{6, 8, 10};
  int quadrature_order = 0;  // 0 keeps the per-operation default
  std::string out_dir;
  bool strict = false;
};

/// Flat `key = value` text; '#' starts a comment. Throws std::invalid_argument
/// on unknown keys or malformed values.
RunConfig parse_config(const std::string& text);
RunConfig load_config(const std::string& path);
/// Throws std::invalid_argument when a value is out of range.
void validate(const RunConfig& c);

/// 17 significant digits, scientific notation.
std::string format_real(double v);

/// args excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace slepian::cli
