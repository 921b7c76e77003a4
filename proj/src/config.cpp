#include "qhess/config.hpp"

#include <cstdlib>
#include <fstream>
#include <sstream>

#include "qhess/util.hpp"

namespace qhess {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double parse_double(const std::string& v, int line) {
  char* end = nullptr;
  const double x = std::strtod(v.c_str(), &end);
  if (end == v.c_str() || *end != '\0') throw ConfigError("bad number '" + v + "'", line);
  return x;
}

int parse_int(const std::string& v, int line) {
  char* end = nullptr;
  const long x = std::strtol(v.c_str(), &end, 10);
  if (end == v.c_str() || *end != '\0')
    throw ConfigError("bad integer '" + v + "'", line);
  return static_cast<int>(x);
}

std::uint64_t parse_u64(const std::string& v, int line) {
  char* end = nullptr;
  const unsigned long long x = std::strtoull(v.c_str(), &end, 10);
  if (end == v.c_str() || *end != '\0')
    throw ConfigError("bad unsigned integer '" + v + "'", line);
  return x;
}

}  // namespace

std::uint64_t RunConfig::hash() const { return fnv1a64(raw); }

RunConfig parse_run_config(const std::string& text) {
  RunConfig cfg;
  cfg.raw = text;
  std::istringstream in(text);
  std::string linebuf, section;
  int lineno = 0;
  while (std::getline(in, linebuf)) {
    ++lineno;
    std::string s = linebuf;
    const auto hash_pos = s.find_first_of("#;");
    if (hash_pos != std::string::npos) s = s.substr(0, hash_pos);
    s = trim(s);
    if (s.empty()) continue;
    if (s.front() == '[') {
      if (s.back() != ']') throw ConfigError("unterminated section header", lineno);
      section = trim(s.substr(1, s.size() - 2));
      if (section != "run" && section != "grid" && section != "radial" &&
          section != "obstacle" && section != "variational" && section != "energy" &&
          section != "hessian")
        throw ConfigError("unknown section [" + section + "]", lineno);
      continue;
    }
    const auto eq = s.find('=');
    if (eq == std::string::npos) throw ConfigError("expected key = value", lineno);
    const std::string key = trim(s.substr(0, eq));
    const std::string val = trim(s.substr(eq + 1));
    if (key.empty()) throw ConfigError("empty key", lineno);
    if (section.empty()) throw ConfigError("key before any [section]", lineno);

    auto unknown = [&]() -> ConfigError {
      return ConfigError("unknown key '" + key + "' in [" + section + "]", lineno);
    };

    if (section == "run") {
      if (key == "n") cfg.n = parse_int(val, lineno);
      else if (key == "m") cfg.m = parse_int(val, lineno);
      else if (key == "seed") cfg.seed = parse_u64(val, lineno);
      else if (key == "threads") cfg.threads = parse_int(val, lineno);
      else if (key == "tol") cfg.tol = parse_double(val, lineno);
      else if (key == "mode") {
        if (val != "radial" && val != "grid")
          throw ConfigError("mode must be 'radial' or 'grid'", lineno);
        cfg.mode = val;
      } else throw unknown();
    } else if (section == "grid") {
      if (key == "extent") cfg.extent = parse_double(val, lineno);
      else if (key == "points") cfg.points = parse_int(val, lineno);
      else throw unknown();
    } else if (section == "radial") {
      if (key == "radius") cfg.radius = parse_double(val, lineno);
      else if (key == "samples") cfg.samples = parse_int(val, lineno);
      else throw unknown();
    } else if (section == "obstacle") {
      if (key == "inner_radius") cfg.inner_radius = parse_double(val, lineno);
      else throw unknown();
    } else if (section == "variational") {
      if (key == "mu") {
        if (val == "dirac" || val == "atom")
          throw ConfigError(
              "atomic measures are outside the admissible class (bounded densities "
              "only); 'mu = " + val + "' rejected", lineno);
        if (val != "zero" && val != "constant" && val != "manufactured" && val != "file")
          throw ConfigError("mu must be zero|constant|manufactured|file", lineno);
        cfg.mu_kind = val;
      } else if (key == "mu_value") cfg.mu_value = parse_double(val, lineno);
      else if (key == "mu_file") cfg.mu_file = val;
      else if (key == "max_iterations") cfg.max_iterations = parse_int(val, lineno);
      else if (key == "kappa") cfg.kappa = parse_double(val, lineno);
      else if (key == "step0") cfg.step0 = parse_double(val, lineno);
      else throw unknown();
    } else if (section == "energy") {
      if (key == "p") cfg.p = parse_double(val, lineno);
      else throw unknown();
    } else if (section == "hessian") {
      if (key == "input") cfg.input_field = val;
      else throw unknown();
    }
  }
  if (cfg.n < 1 || cfg.n > 4 || cfg.m < 1 || cfg.m > cfg.n)
    throw ConfigError("need 1 <= m <= n <= 4", 0);
  return cfg;
}

RunConfig load_run_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open config file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_run_config(ss.str());
}

}  // namespace qhess
