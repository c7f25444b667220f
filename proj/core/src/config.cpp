#include "kramers/config.hpp"

#include "kramers/errors.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace kramers {

const char* to_string(ValueType t) {
  switch (t) {
    case ValueType::real: return "real";
    case ValueType::integer: return "integer";
    case ValueType::boolean: return "boolean";
    case ValueType::string: return "string";
    case ValueType::real_list: return "real list";
  }
  return "?";
}

const std::vector<ConfigKey>& config_schema() {
  static const std::vector<ConfigKey> schema = {
      // discretisation
      {"length", ValueType::real, "3.141592653589793", "domain length l; eigenvalues (i pi / l)^2"},
      {"modes", ValueType::integer, "32", "number of sine modes N"},
      {"components", ValueType::integer, "2", "field components r"},
      // model
      {"model", ValueType::string, "default", "default | constant_friction | deterministic"},
      {"friction_perturbation", ValueType::real, "0.5", "a in A_1 = diag(a, -a)"},
      {"noise_amplitude", ValueType::real, "1", "multiplier on the diffusion coefficient"},
      {"diffusion_slope", ValueType::real, "0.3", "slope of the tanh-diagonal diffusion"},
      {"cutoff_radius", ValueType::real, "0", "truncation radius R; 0 disables truncation"},
      {"initial_amplitude", ValueType::real, "1", "scale of the default smooth initial field"},
      // time grid
      {"horizon", ValueType::real, "1", "final time T"},
      {"snapshots", ValueType::integer, "200", "snapshot intervals on [0, T]"},
      {"base_steps_per_snapshot", ValueType::integer, "0",
       "noise steps per snapshot interval; 0 picks the smallest 120 * 2^j that resolves every dt rule"},
      {"wave_dt_max", ValueType::real, "0.01", "upper bound on the wave step"},
      {"wave_cfl", ValueType::real, "0.5", "wave step <= wave_cfl * sqrt(mu / alpha_N)"},
      {"damping_resolution", ValueType::real, "0.25", "wave step <= damping_resolution * mu / sup ||g||"},
      {"limit_dt", ValueType::real, "0.001", "upper bound on the limit-equation step"},
      {"drift_method", ValueType::string, "trace", "spectral | trace"},
      {"drift_lag", ValueType::integer, "1", "recompute the noise-induced drift every k steps"},
      // sweep
      {"mu_grid", ValueType::real_list, "0.1,0.03,0.01,0.003,0.001", "masses, largest first"},
      {"replicas", ValueType::integer, "16", "ensemble size per mass"},
      {"seed", ValueType::integer, "20240611", "master seed; replica k uses seed + k"},
      {"varrho", ValueType::real, "0.9", "sup-norm exponent of the error metric"},
      {"vartheta", ValueType::real, "1.5", "integrated-norm exponent of the error metric"},
      {"p_exponent", ValueType::real, "3", "power of the integrated norm"},
      {"eta", ValueType::real, "0.05", "threshold of the probability form P(error > eta)"},
      {"pass_ratio", ValueType::real, "3", "required median(error, largest mu) / median(error, smallest mu)"},
      {"max_inversions", ValueType::integer, "1", "allowed increases of the median error along the grid"},
      {"max_flagged_fraction", ValueType::real, "0.2", "blown-up replicas tolerated before the sweep fails"},
      {"energy_slack", ValueType::real, "0.1", "relative slack on monotone energy trends"},
      {"threads", ValueType::integer, "1", "worker threads for replicas"},
      {"output_dir", ValueType::string, "reports", "report directory"},
      {"write_snapshots", ValueType::boolean, "false", "persist wave and limit snapshots per replica"},
      // correctors and drift oracles
      {"delta", ValueType::real, "0.25", "lambda(mu) = mu^((1/2 - delta) / 2)"},
      {"quadrature_nodes", ValueType::integer, "200", "Gauss-Legendre nodes for phi2"},
      {"quadrature_horizon", ValueType::real, "40", "quadrature horizon in units of 1 / gamma0"},
      {"mc_samples", ValueType::integer, "1000000", "Monte-Carlo samples for drift cross-checks"},
      {"ergodic_steps", ValueType::integer, "200000", "exact OU steps for the ergodic drift oracle"},
  };
  return schema;
}

namespace {

const ConfigKey& lookup(const std::string& key) {
  const auto& schema = config_schema();
  const auto it = std::find_if(schema.begin(), schema.end(), [&](const ConfigKey& k) { return k.name == key; });
  if (it == schema.end()) throw InvalidConfig("config: unknown key '" + key + "'");
  return *it;
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

bool parse_real(const std::string& s, double& out) {
  const std::string t = trim(s);
  if (t.empty()) return false;
  const char* first = t.data();
  const char* last = first + t.size();
  const auto res = std::from_chars(first, last, out);
  return res.ec == std::errc() && res.ptr == last && std::isfinite(out);
}

bool parse_integer(const std::string& s, std::int64_t& out) {
  const std::string t = trim(s);
  if (t.empty()) return false;
  const auto res = std::from_chars(t.data(), t.data() + t.size(), out);
  return res.ec == std::errc() && res.ptr == t.data() + t.size();
}

bool parse_boolean(const std::string& s, bool& out) {
  const std::string t = trim(s);
  if (t == "true" || t == "1" || t == "yes" || t == "on") return out = true, true;
  if (t == "false" || t == "0" || t == "no" || t == "off") return out = false, true;
  return false;
}

bool parse_list(const std::string& s, std::vector<double>& out) {
  out.clear();
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    double v;
    if (!parse_real(item, v)) return false;
    out.push_back(v);
  }
  return !out.empty();
}

[[noreturn]] void bad_value(const ConfigKey& k, const std::string& v) {
  throw InvalidConfig("config key '" + k.name + "': expected " + to_string(k.type) + ", got '" + v + "'");
}

}  // namespace

Config::Config() {
  for (const auto& k : config_schema()) values_[k.name] = k.default_value;
}

Config Config::from_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidConfig("config: cannot open '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return from_string(ss.str(), path);
}

Config Config::from_string(const std::string& text, const std::string& origin) {
  Config cfg;
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
      throw InvalidConfig(origin + ":" + std::to_string(lineno) + ": expected 'key = value'");
    try {
      cfg.set(trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
    } catch (const InvalidConfig& e) {
      throw InvalidConfig(origin + ":" + std::to_string(lineno) + ": " + e.what());
    }
  }
  return cfg;
}

void Config::set(const std::string& key, const std::string& value) {
  const ConfigKey& k = lookup(key);
  const std::string v = trim(value);
  switch (k.type) {
    case ValueType::real: {
      double x;
      if (!parse_real(v, x)) bad_value(k, v);
      break;
    }
    case ValueType::integer: {
      std::int64_t x;
      if (!parse_integer(v, x)) bad_value(k, v);
      break;
    }
    case ValueType::boolean: {
      bool x;
      if (!parse_boolean(v, x)) bad_value(k, v);
      break;
    }
    case ValueType::real_list: {
      std::vector<double> x;
      if (!parse_list(v, x)) bad_value(k, v);
      break;
    }
    case ValueType::string:
      if (v.empty()) bad_value(k, v);
      break;
  }
  values_[key] = v;
}

bool Config::has(const std::string& key) const { return values_.count(key) > 0; }

double Config::real(const std::string& key) const {
  double x = 0.0;
  if (lookup(key).type != ValueType::real || !parse_real(values_.at(key), x))
    throw InvalidConfig("config key '" + key + "' is not a real");
  return x;
}

std::int64_t Config::integer(const std::string& key) const {
  std::int64_t x = 0;
  if (lookup(key).type != ValueType::integer || !parse_integer(values_.at(key), x))
    throw InvalidConfig("config key '" + key + "' is not an integer");
  return x;
}

bool Config::boolean(const std::string& key) const {
  bool x = false;
  if (lookup(key).type != ValueType::boolean || !parse_boolean(values_.at(key), x))
    throw InvalidConfig("config key '" + key + "' is not a boolean");
  return x;
}

const std::string& Config::str(const std::string& key) const {
  lookup(key);
  return values_.at(key);
}

std::vector<double> Config::real_list(const std::string& key) const {
  std::vector<double> x;
  if (lookup(key).type != ValueType::real_list || !parse_list(values_.at(key), x))
    throw InvalidConfig("config key '" + key + "' is not a real list");
  return x;
}

void Config::validate() const {
  auto require = [](bool ok, const std::string& key, const std::string& msg) {
    if (!ok) throw InvalidConfig("config key '" + key + "': " + msg);
  };
  require(real("length") > 0.0, "length", "must be positive");
  require(integer("modes") >= 1, "modes", "must be >= 1");
  require(integer("components") >= 1 && integer("components") <= 4, "components", "must lie in [1, 4]");
  require(real("horizon") > 0.0, "horizon", "must be positive");
  require(integer("snapshots") >= 1, "snapshots", "must be >= 1");
  require(integer("base_steps_per_snapshot") >= 0, "base_steps_per_snapshot", "must be >= 0");
  require(real("wave_dt_max") > 0.0, "wave_dt_max", "must be positive");
  require(real("wave_cfl") > 0.0, "wave_cfl", "must be positive");
  require(real("damping_resolution") > 0.0, "damping_resolution", "must be positive");
  require(real("limit_dt") > 0.0, "limit_dt", "must be positive");
  require(str("drift_method") == "trace" || str("drift_method") == "spectral", "drift_method",
          "must be 'trace' or 'spectral'");
  require(integer("drift_lag") >= 1, "drift_lag", "must be >= 1");
  const auto grid = real_list("mu_grid");
  for (double mu : grid) require(mu > 0.0 && mu <= 1.0, "mu_grid", "masses must lie in (0, 1]");
  for (std::size_t i = 1; i < grid.size(); ++i)
    require(grid[i] < grid[i - 1], "mu_grid", "masses must be strictly decreasing");
  require(integer("replicas") >= 1, "replicas", "must be >= 1");
  require(integer("seed") >= 0, "seed", "must be nonnegative");
  const double varrho = real("varrho"), vartheta = real("vartheta"), p = real("p_exponent");
  require(varrho > 0.0 && varrho < 1.0, "varrho", "must lie in (0, 1)");
  // The truncation ramp measures H^rbar with rbar = 0.95; the sup error may not be stronger.
  require(varrho <= 0.95, "varrho", "must not exceed the cutoff exponent 0.95");
  require(vartheta >= 1.0 && vartheta < 2.0, "vartheta", "must lie in [1, 2)");
  require(p > 0.0 && p * (vartheta - 1.0) < 2.0, "p_exponent", "must satisfy 0 < p (vartheta - 1) < 2");
  require(real("eta") > 0.0, "eta", "must be positive");
  require(real("pass_ratio") >= 1.0, "pass_ratio", "must be >= 1");
  require(integer("max_inversions") >= 0, "max_inversions", "must be >= 0");
  require(real("max_flagged_fraction") >= 0.0 && real("max_flagged_fraction") <= 1.0,
          "max_flagged_fraction", "must lie in [0, 1]");
  require(real("energy_slack") >= 0.0, "energy_slack", "must be >= 0");
  require(integer("threads") >= 1, "threads", "must be >= 1");
  require(real("delta") > 0.0 && real("delta") < 0.5, "delta", "must lie in (0, 1/2)");
  require(integer("quadrature_nodes") >= 1, "quadrature_nodes", "must be >= 1");
  require(real("quadrature_horizon") >= 40.0, "quadrature_horizon", "must be >= 40");
  require(integer("mc_samples") >= 100, "mc_samples", "must be >= 100");
  require(integer("ergodic_steps") >= 100, "ergodic_steps", "must be >= 100");
  require(real("noise_amplitude") >= 0.0, "noise_amplitude", "must be >= 0");
  require(real("cutoff_radius") >= 0.0, "cutoff_radius", "must be >= 0");
}

std::string Config::canonical() const {
  std::string out;
  for (const auto& k : config_schema()) out += k.name + " = " + values_.at(k.name) + "\n";
  return out;
}

std::string Config::hash() const {
  // Keys that cannot change any reported number stay out of the hash.
  static const char* const inert[] = {"output_dir", "threads", "write_snapshots"};
  std::uint64_t h = 1469598103934665603ull;
  for (const auto& k : config_schema()) {
    if (std::find(std::begin(inert), std::end(inert), k.name) != std::end(inert)) continue;
    for (unsigned char c : k.name + " = " + values_.at(k.name) + "\n") {
      h ^= c;
      h *= 1099511628211ull;
    }
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace kramers
