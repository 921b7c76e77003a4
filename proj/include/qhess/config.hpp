#pragma once

// INI-style run configuration: [section] headers, key = value lines, # or ;
// comments. Unknown sections or keys are hard errors carrying the line number, as
// are malformed numbers; silent typos must not survive parsing.

#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>

namespace qhess {

struct ConfigError : std::runtime_error {
  int line;
  ConfigError(const std::string& msg, int line_)
      : std::runtime_error(msg + " (line " + std::to_string(line_) + ")"), line(line_) {}
};

struct RunConfig {
  // [run]
  int n = 1;
  int m = 1;
  std::uint64_t seed = 1;
  int threads = 1;
  double tol = -1.0;  // negative: command default applies
  std::string mode = "radial";  // "radial" or "grid"

  // [grid]
  double extent = 1.0;
  int points = 9;

  // [radial]
  double radius = 1.0;
  int samples = 200;

  // [obstacle]
  double inner_radius = 0.5;

  // [variational]
  std::string mu_kind = "manufactured";  // zero | constant | manufactured | file
  double mu_value = 0.0;
  std::string mu_file;
  int max_iterations = 400;
  double kappa = 1.0;
  double step0 = 1.0;

  // [energy]
  double p = 1.0;

  // [hessian]
  std::string input_field;

  std::string raw;  // config bytes as parsed, hashed into outputs
  std::uint64_t hash() const;
};

RunConfig parse_run_config(const std::string& text);
RunConfig load_run_config(const std::string& path);

}  // namespace qhess
