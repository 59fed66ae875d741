#pragma once

#include <Eigen/Dense>

#include <optional>
#include <vector>

#include "monoperiod/ionic.hpp"
#include "monoperiod/spectral.hpp"

namespace monoperiod::galerkin {

/// Coefficients of (u_m, w_m) stacked as [u_0 .. u_m, w_0 .. w_m].
struct GalerkinState {
  double t = 0.0;
  Eigen::VectorXd x;

  GalerkinState() = default;
  GalerkinState(double time, Eigen::VectorXd coeffs) : t(time), x(std::move(coeffs)) {}
  static GalerkinState zero(int modes, double time = 0.0) {
    return {time, Eigen::VectorXd::Zero(2 * modes)};
  }
  static GalerkinState from_blocks(const Eigen::VectorXd& u, const Eigen::VectorXd& w,
                                   double time = 0.0);

  int modes() const { return static_cast<int>(x.size() / 2); }
  auto u() const { return x.head(modes()); }
  auto w() const { return x.tail(modes()); }
  auto u() { return x.head(modes()); }
  auto w() { return x.tail(modes()); }
};

/// The 2m+2 dimensional Faedo-Galerkin system
///   u_i' = -lambda_i u_i - <psi_i, f(u_m, w_m)> + s(t) <psi_i, phi*>
///   w_i' = eps b (u_i - xi c3 w_i).
/// Immutable after construction.
class GalerkinSystem {
 public:
  GalerkinSystem(spectral::SpectralBasis basis, ionic::DerivedParameters params,
                 spectral::Stimulus stimulus);

  const spectral::SpectralBasis& basis() const { return basis_; }
  const ionic::DerivedParameters& params() const { return params_; }
  const spectral::Stimulus& stimulus() const { return stimulus_; }
  /// b_i = <psi_i, phi*>.
  const Eigen::VectorXd& trace_vector() const { return trace_; }
  int modes() const { return basis_.size(); }
  int dimension() const { return 2 * basis_.size(); }
  double period() const { return stimulus_.period(); }

  /// -<psi_i, f(u_m, w_m)>, the nonlinear forcing of the u-block.
  Eigen::VectorXd nonlinear_forcing(const Eigen::Ref<const Eigen::VectorXd>& x) const;

  Eigen::VectorXd rhs(double t, const Eigen::Ref<const Eigen::VectorXd>& x) const;

 private:
  spectral::SpectralBasis basis_;
  ionic::DerivedParameters params_;
  spectral::Stimulus stimulus_;
  Eigen::VectorXd trace_;
};

/// Time-sampled solution. times[k] = t0 + k*dt except possibly the final
/// node, which is placed exactly on t1.
struct Trajectory {
  double dt = 0.0;
  std::vector<double> times;
  std::vector<Eigen::VectorXd> states;

  std::size_t size() const { return times.size(); }
  GalerkinState at(std::size_t k) const { return {times[k], states[k]}; }
  const GalerkinState back() const { return at(size() - 1); }
};

/// Coefficient magnitude above which an integration is declared blown up.
inline constexpr double kBlowUpThreshold = 1e12;

/// Number of fixed steps covering [t0, t1] with step dt; the last may be short.
long step_count(double t0, double t1, double dt);

/// Classical RK4 on [state0.t, t1]. Every record_stride-th node is stored,
/// plus the final one. Throws BlowUpError on non-finite or huge states.
Trajectory integrate_cauchy(const GalerkinSystem& sys, const GalerkinState& state0,
                            double t1, double dt, int record_stride = 1);

/// Same integration without storing intermediate nodes.
GalerkinState advance(const GalerkinSystem& sys, const GalerkinState& state0, double t1,
                      double dt);

/// State at t = T from state at t = 0 (T the stimulus period).
GalerkinState period_map(const GalerkinSystem& sys,
                         const Eigen::Ref<const Eigen::VectorXd>& x0, double dt);

struct PeriodMonitors {
  double sup_energy = 0.0;       ///< sup_t ||u_m||_H^2 + ||w_m||_H^2
  double u_L2V = 0.0;            ///< ||u_m||_{L^2(I;V)}
  double du_L2 = 0.0;            ///< ||u_m'||_{L^2(Q_I)}
  double dw_L2 = 0.0;            ///< ||w_m'||_{L^2(Q_I)}
};

struct AprioriReport {
  PeriodMonitors total;
  /// Monitors restricted to each complete period [kT, (k+1)T].
  std::vector<PeriodMonitors> per_period;
  /// Relative spread of the per-period monitors (max over the four).
  double period_spread = 0.0;
  /// sup energy doubled between two successive periods.
  bool unbounded_growth = false;
};

/// Runtime counterparts of the a priori estimates. Time integrals use the
/// trapezoid rule on the trajectory nodes, derivatives come from the rhs.
AprioriReport apriori_monitor(const GalerkinSystem& sys, const Trajectory& traj,
                              std::optional<double> period = std::nullopt);

/// ||a - b||_{L^2(Q_I)} for two trajectories on the same time grid whose
/// bases differ only in truncation. Fields are compared on the quadrature grid
/// of the larger basis; absent modes count as zero.
struct RefinementGap {
  double u = 0.0;
  double w = 0.0;
};
RefinementGap refinement_gap(const GalerkinSystem& coarse, const Trajectory& a,
                             const GalerkinSystem& fine, const Trajectory& b);

}  // namespace monoperiod::galerkin
