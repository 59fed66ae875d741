#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace monoperiod {

/// Invalid user-facing configuration (unknown key, missing key, bad value).
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A Galerkin trajectory escaped to infinity (or became non-finite).
class BlowUpError : public std::runtime_error {
 public:
  BlowUpError(const std::string& what, double time, double max_abs)
      : std::runtime_error(what), time_(time), max_abs_(max_abs) {}

  double time() const { return time_; }
  double max_abs() const { return max_abs_; }

 private:
  double time_;
  double max_abs_;
};

/// An iterative solver stopped without meeting its tolerance.
class ConvergenceError : public std::runtime_error {
 public:
  ConvergenceError(const std::string& what, std::vector<double> history)
      : std::runtime_error(what), history_(std::move(history)) {}

  const std::vector<double>& history() const { return history_; }

 private:
  std::vector<double> history_;
};

}  // namespace monoperiod
