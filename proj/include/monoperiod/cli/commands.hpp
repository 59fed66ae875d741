#pragma once

#include "json.hpp"
#include "monoperiod/cli/config.hpp"
#include "monoperiod/cli/output.hpp"
#include "monoperiod/cli/run_config.hpp"

namespace monoperiod::cli {

/// Process exit codes.
inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitNonConvergence = 3;
inline constexpr int kExitBlowUp = 4;

struct RunReport {
  /// command, config echo, status, result payload, condition flags.
  nlohmann::ordered_json doc;
  int exit_code = kExitOk;
  double seconds = 0.0;
};

/// Resolves `cfg` for `cmd`, runs it and writes resolved.cfg, the data files
/// and report.json into `out.dir`. Wall-clock time goes to timings.json so that
/// report.json depends on the configuration only. Throws ConfigError before
/// any file is written.
RunReport run_command(Subcommand cmd, Config& cfg, const OutputOptions& out);

nlohmann::ordered_json cmd_feasibility(const RunConfig& rc, const OutputOptions& out);
nlohmann::ordered_json cmd_solve_cauchy(const RunConfig& rc, const OutputOptions& out);
nlohmann::ordered_json cmd_solve_periodic(const RunConfig& rc, const OutputOptions& out);
nlohmann::ordered_json cmd_converge(const RunConfig& rc, const OutputOptions& out);
nlohmann::ordered_json cmd_param_region(const RunConfig& rc, const OutputOptions& out);

}  // namespace monoperiod::cli
