#include "monoperiod/cli/config.hpp"

#include <algorithm>
#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "monoperiod/errors.hpp"

namespace monoperiod::cli {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(trim(item));
  return out;
}

bool parse_double(const std::string& s, double& out) {
  if (s.empty()) return false;
  errno = 0;
  char* end = nullptr;
  out = std::strtod(s.c_str(), &end);
  return end == s.c_str() + s.size() && errno != ERANGE && std::isfinite(out);
}

}  // namespace

std::string format_number(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

const std::vector<std::string>& Config::known_keys() {
  static const std::vector<std::string> keys = {
      "model.C_m", "model.chi", "model.c1", "model.c2", "model.c3", "model.b", "model.a",
      "model.u_res", "model.u_peak", "model.sigma", "model.a1", "model.a2",
      "rescaling.epsilon", "rescaling.xi",
      "geometry.length",
      "stimulus.kind", "stimulus.period", "stimulus.period_tilde", "stimulus.offset",
      "stimulus.amplitude", "stimulus.center", "stimulus.width", "stimulus.phi",
      "solver.m", "solver.n_quad", "solver.dt", "solver.steps_per_period", "solver.nodes",
      "solver.periods", "solver.t_end", "solver.record_stride", "solver.tol", "solver.theta",
      "solver.max_iter", "solver.method", "solver.literal_sign", "solver.kernel_quadrature",
      "solver.m_list",
      "initial.u_coeffs", "initial.w_coeffs", "initial.random", "initial.random_amplitude",
      "initial.seed",
      "ball.radius",
      "feasibility.kappa", "feasibility.beta", "feasibility.gamma", "feasibility.delta",
      "feasibility.h0", "feasibility.K1", "feasibility.K2", "feasibility.M_over_alpha",
      "feasibility.trace_norm", "feasibility.phi_norm", "feasibility.s_hat", "feasibility.R",
      "feasibility.T", "feasibility.literal_exponent",
      "curves.T_max", "curves.R_max", "curves.points",
      "region.a1_min", "region.a1_max", "region.a1_count", "region.a2_max", "region.a2_count",
      "region.literal",
  };
  return keys;
}

Config Config::parse(std::istream& in, const std::string& source) {
  const auto& known = known_keys();
  Config cfg;
  cfg.source_ = source;
  std::string raw;
  int line = 0;
  while (std::getline(in, raw)) {
    ++line;
    const auto hash = raw.find('#');
    const std::string text = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
    if (text.empty()) continue;
    const auto eq = text.find('=');
    const std::string where = source + ":" + std::to_string(line) + ": ";
    if (eq == std::string::npos) throw ConfigError(where + "expected 'key = value'");
    const std::string key = trim(text.substr(0, eq));
    const std::string value = trim(text.substr(eq + 1));
    if (key.empty()) throw ConfigError(where + "empty key");
    if (std::find(known.begin(), known.end(), key) == known.end())
      throw ConfigError(where + "unknown key '" + key + "'");
    if (value.empty()) throw ConfigError(where + "key '" + key + "' has no value");
    if (cfg.entries_.count(key)) throw ConfigError(where + "duplicate key '" + key + "'");
    cfg.entries_[key] = {value, line};
  }
  return cfg;
}

Config Config::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open configuration file '" + path + "'");
  return parse(in, path);
}

bool Config::has(const std::string& key) const { return entries_.count(key) > 0; }

void Config::set(const std::string& key, const std::string& value) {
  const auto& known = known_keys();
  if (std::find(known.begin(), known.end(), key) == known.end())
    throw ConfigError("unknown key '" + key + "'");
  entries_[key] = {value, 0};
}

const Config::Entry& Config::require(const std::string& key) const {
  const auto it = entries_.find(key);
  if (it == entries_.end()) throw ConfigError(source_ + ": missing required key '" + key + "'");
  return it->second;
}

void Config::fail(const std::string& key, const std::string& what) const {
  const auto it = entries_.find(key);
  const std::string line = (it != entries_.end() && it->second.line > 0)
                               ? ":" + std::to_string(it->second.line)
                               : std::string();
  throw ConfigError(source_ + line + ": key '" + key + "': " + what);
}

void Config::record(const std::string& key, const std::string& value) { resolved_[key] = value; }

void Config::record(const std::string& key, double value) { record(key, format_number(value)); }

void Config::forget(const std::string& key) { resolved_.erase(key); }

double Config::number(const std::string& key) {
  const Entry& e = require(key);
  double x = 0.0;
  if (!parse_double(e.value, x)) fail(key, "expected a finite number, got '" + e.value + "'");
  record(key, x);
  return x;
}

double Config::number_or(const std::string& key, double fallback) {
  if (has(key)) return number(key);
  record(key, fallback);
  return fallback;
}

std::optional<double> Config::optional_number(const std::string& key) {
  if (!has(key)) return std::nullopt;
  return number(key);
}

int Config::integer(const std::string& key) {
  const Entry& e = require(key);
  double x = 0.0;
  if (!parse_double(e.value, x) || x != std::floor(x) || std::abs(x) > 2e9)
    fail(key, "expected an integer, got '" + e.value + "'");
  const int v = static_cast<int>(x);
  record(key, std::to_string(v));
  return v;
}

int Config::integer_or(const std::string& key, int fallback) {
  if (has(key)) return integer(key);
  record(key, std::to_string(fallback));
  return fallback;
}

bool Config::flag_or(const std::string& key, bool fallback) {
  bool v = fallback;
  if (has(key)) {
    const std::string& s = entries_.at(key).value;
    if (s == "true" || s == "1" || s == "yes")
      v = true;
    else if (s == "false" || s == "0" || s == "no")
      v = false;
    else
      fail(key, "expected true or false, got '" + s + "'");
  }
  record(key, v ? "true" : "false");
  return v;
}

std::string Config::choice_or(const std::string& key, const std::string& fallback,
                              const std::vector<std::string>& choices) {
  const std::string v = has(key) ? entries_.at(key).value : fallback;
  if (std::find(choices.begin(), choices.end(), v) == choices.end()) {
    std::string list;
    for (const auto& c : choices) list += (list.empty() ? "" : "|") + c;
    fail(key, "expected one of " + list + ", got '" + v + "'");
  }
  record(key, v);
  return v;
}

std::vector<double> Config::numbers(const std::string& key) {
  const Entry& e = require(key);
  std::vector<double> out;
  for (const auto& item : split_list(e.value)) {
    double x = 0.0;
    if (!parse_double(item, x)) fail(key, "expected a list of numbers, got '" + e.value + "'");
    out.push_back(x);
  }
  std::string echo;
  for (double x : out) echo += (echo.empty() ? "" : ", ") + format_number(x);
  record(key, echo);
  return out;
}

std::vector<double> Config::numbers_or(const std::string& key,
                                       const std::vector<double>& fallback) {
  if (has(key)) return numbers(key);
  std::string echo;
  for (double x : fallback) echo += (echo.empty() ? "" : ", ") + format_number(x);
  if (!fallback.empty()) record(key, echo);
  return fallback;
}

std::vector<int> Config::integers(const std::string& key) {
  const Entry& e = require(key);
  std::vector<int> out;
  for (const auto& item : split_list(e.value)) {
    double x = 0.0;
    if (!parse_double(item, x) || x != std::floor(x) || std::abs(x) > 2e9)
      fail(key, "expected a list of integers, got '" + e.value + "'");
    out.push_back(static_cast<int>(x));
  }
  std::string echo;
  for (int x : out) echo += (echo.empty() ? "" : ", ") + std::to_string(x);
  record(key, echo);
  return out;
}

std::string Config::resolved_text() const {
  std::string out;
  for (const auto& [k, v] : resolved_) out += k + " = " + v + "\n";
  return out;
}

}  // namespace monoperiod::cli
