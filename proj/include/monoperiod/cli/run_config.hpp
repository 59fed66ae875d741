#pragma once

#include <optional>
#include <string>
#include <vector>

#include "monoperiod/cli/config.hpp"
#include "monoperiod/feasibility.hpp"
#include "monoperiod/galerkin.hpp"
#include "monoperiod/ionic.hpp"
#include "monoperiod/periodic.hpp"
#include "monoperiod/spectral.hpp"

namespace monoperiod::cli {

enum class Subcommand { feasibility, solve_cauchy, solve_periodic, converge, param_region };

std::optional<Subcommand> parse_subcommand(const std::string& name);
const char* subcommand_name(Subcommand cmd);

struct ModelBlock {
  ionic::PhysiologicalParameters phys;
  ionic::RescalingParameters resc;
  /// With model.a1 / model.a2 overrides applied; c4 always follows c1.
  ionic::DerivedParameters derived;
};

struct SolverBlock {
  int m = 8;
  int n_quad = 0;
  int nodes = periodic::PeriodicGrid::kDefaultNodes;
  int steps_per_period = 0;
  double dt = 0.0;
  double t_end = 0.0;
  int record_stride = 1;
  double tol = 1e-10;
  double theta = 1.0;
  int max_iter = 500;
  std::string method = "both";
  periodic::FarkasOptions farkas;
  std::vector<int> m_list;
};

struct InitialBlock {
  std::vector<double> u;
  std::vector<double> w;
  bool random = false;
  double random_amplitude = 0.0;
  unsigned seed = 0;
};

struct FeasibilityBlock {
  std::vector<feasibility::AggregateConstants> aggregates;  ///< one per kappa
  std::optional<feasibility::RawConstants> raw;
  double h0 = 0.0;
  double xi = 0.0;
  double c3 = 1.0;
  std::optional<double> R;
  std::optional<double> T;
  bool literal_exponent = false;
  double T_max = 0.0;
  double R_max = 0.0;
  int points = 0;
};

struct RegionBlock {
  feasibility::RegionParameters params;
  double a1_min = 0.0;
  double a1_max = 0.0;
  int a1_count = 0;
  double a2_max = 0.0;
  int a2_count = 0;
  bool literal = false;
};

/// Blocks needed by one subcommand, validated.
struct RunConfig {
  Subcommand command = Subcommand::feasibility;
  std::optional<ModelBlock> model;
  spectral::Geometry1D geometry;
  std::optional<spectral::Stimulus> stimulus;
  SolverBlock solver;
  InitialBlock initial;
  std::optional<double> ball_radius;
  std::optional<FeasibilityBlock> feasibility;
  std::optional<RegionBlock> region;
};

/// Reads the keys `cmd` needs. Throws ConfigError naming the offending key.
RunConfig resolve(Config& cfg, Subcommand cmd);

galerkin::GalerkinSystem build_system(const RunConfig& rc, int m);
/// Coefficients from initial.u_coeffs / w_coeffs, zero padded to m+1.
galerkin::GalerkinState initial_state(const RunConfig& rc, int m);

}  // namespace monoperiod::cli
