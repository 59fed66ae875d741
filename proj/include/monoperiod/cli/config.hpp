#pragma once

#include <istream>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace monoperiod::cli {

/// Flat `section.key = value` configuration. `#` starts a comment, list
/// values are comma separated. Every lookup records the value it resolved
/// to (defaults included) so that the run can be echoed and replayed.
class Config {
 public:
  /// Throws ConfigError with `source:line` for syntax errors, unknown or
  /// duplicate keys.
  static Config parse(std::istream& in, const std::string& source = "config");
  static Config load(const std::string& path);

  /// Every key the parser accepts.
  static const std::vector<std::string>& known_keys();

  bool has(const std::string& key) const;
  /// Overrides or inserts a value (command-line flags).
  void set(const std::string& key, const std::string& value);

  double number(const std::string& key);
  double number_or(const std::string& key, double fallback);
  std::optional<double> optional_number(const std::string& key);
  int integer(const std::string& key);
  int integer_or(const std::string& key, int fallback);
  bool flag_or(const std::string& key, bool fallback);
  /// One of `choices`; ConfigError otherwise.
  std::string choice_or(const std::string& key, const std::string& fallback,
                        const std::vector<std::string>& choices);
  std::vector<double> numbers_or(const std::string& key, const std::vector<double>& fallback);
  std::vector<double> numbers(const std::string& key);
  std::vector<int> integers(const std::string& key);

  /// Records a derived value under `key` without reading it.
  void record(const std::string& key, const std::string& value);
  void record(const std::string& key, double value);
  /// Drops a key from the resolved echo (it was replaced by another).
  void forget(const std::string& key);

  /// Resolved entries, sorted by key.
  const std::map<std::string, std::string>& resolved() const { return resolved_; }
  std::string resolved_text() const;

 private:
  struct Entry {
    std::string value;
    int line = 0;
  };

  const Entry& require(const std::string& key) const;
  [[noreturn]] void fail(const std::string& key, const std::string& what) const;

  std::string source_;
  std::map<std::string, Entry> entries_;
  std::map<std::string, std::string> resolved_;
};

/// 17 significant digits, the form used for every float the CLI writes.
std::string format_number(double x);

}  // namespace monoperiod::cli
