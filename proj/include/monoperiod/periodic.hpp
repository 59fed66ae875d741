#pragma once

#include <Eigen/Dense>

#include <vector>

#include "monoperiod/galerkin.hpp"
#include "monoperiod/spectral.hpp"

namespace monoperiod::periodic {

/// N_t uniform nodes t_k = k T / N_t on [0, T).
class PeriodicGrid {
 public:
  static constexpr int kMinNodes = 64;
  static constexpr int kDefaultNodes = 512;

  explicit PeriodicGrid(double period, int nodes = kDefaultNodes);

  double period() const { return T_; }
  int nodes() const { return N_; }
  double spacing() const { return T_ / N_; }
  double time(int k) const { return T_ * k / N_; }
  std::vector<double> times() const;

  bool operator==(const PeriodicGrid&) const = default;

 private:
  double T_;
  int N_;
};

/// Periodic coefficient trajectory: row k holds [u_0..u_m, w_0..w_m] at t_k.
using Samples = Eigen::MatrixXd;

/// Two-branch kernel of the periodic problem y' = -rate y + F:
///   (1 - e^{-rate T})^{-1} e^{-rate (t - tau)}      tau <= t
///   (1 - e^{-rate T})^{-1} e^{-rate (t + T - tau)}  tau >  t
/// Throws std::invalid_argument unless rate > 0 and t, tau lie in [0, T].
double green_kernel(double rate, double T, double t, double tau);

/// K_i with rate lambda_i.
double green_kernel_u(double lambda_i, double T, double t, double tau);

/// K_b with rate b c3 eps xi.
double green_kernel_w(double b, double c3, double xi, double epsilon, double T, double t,
                      double tau);

enum class KernelQuadrature {
  /// Exact integration of the trigonometric interpolant of the forcing.
  spectral,
  /// Exact integration of the piecewise-linear interpolant, each branch
  /// handled separately.
  product_trapezoid,
};

/// y(t_k) = int_0^T K(t_k, tau) F(tau) dtau for samples F(t_j), one rate.
class KernelConvolution {
 public:
  KernelConvolution(double rate, const PeriodicGrid& grid, KernelQuadrature rule);

  double rate() const { return rate_; }
  Eigen::VectorXd apply(const Eigen::Ref<const Eigen::VectorXd>& F) const;

 private:
  double rate_;
  PeriodicGrid grid_;
  KernelQuadrature rule_;
  Eigen::VectorXd circulant_;  // spectral rule: y_k = sum_j c_{(k-j) mod N} F_j
  double w_left_ = 0.0;        // product rule: weight of F_j on [t_j, t_{j+1}]
  double w_right_ = 0.0;       // product rule: weight of F_{j+1}
  double decay_ = 0.0;         // e^{-rate h}
};

struct FarkasOptions {
  KernelQuadrature quadrature = KernelQuadrature::spectral;
  /// Use +<psi_i, f> in the u-block forcing instead of -<psi_i, f>.
  bool literal_sign = false;
};

/// The operator K_m on periodic coefficient trajectories. Kernel weights are
/// computed once per (system, grid).
class FarkasOperator {
 public:
  FarkasOperator(const galerkin::GalerkinSystem& sys, const PeriodicGrid& grid,
                 FarkasOptions options = {});

  const galerkin::GalerkinSystem& system() const { return *sys_; }
  const PeriodicGrid& grid() const { return grid_; }
  const FarkasOptions& options() const { return options_; }

  /// u-block forcing -<psi_i, f(u_m, w_m)> + s(t_k) b_i at every node.
  Eigen::MatrixXd forcing(const Samples& U) const;

  /// Both blocks from the input trajectory.
  Samples apply(const Samples& U) const;

  /// u-block from the input, w-block from the new u-block.
  Samples apply_sequential(const Samples& U) const;

 private:
  Eigen::MatrixXd u_image(const Samples& U) const;
  Eigen::MatrixXd w_image(const Eigen::MatrixXd& u) const;
  void check_shape(const Samples& U) const;

  const galerkin::GalerkinSystem* sys_;
  PeriodicGrid grid_;
  FarkasOptions options_;
  std::vector<KernelConvolution> u_kernels_;
  KernelConvolution w_kernel_;
};

/// One-shot application; prefer FarkasOperator inside loops.
Samples farkas_apply(const galerkin::GalerkinSystem& sys, const PeriodicGrid& grid,
                     const Samples& U, FarkasOptions options = {});

/// sup_k sqrt(||u(t_k)||_V^2 + ||w(t_k)||_H^2) and the maximizing row.
struct CTNorm {
  double value = 0.0;
  int row = 0;
};
CTNorm ct_norm(const spectral::SpectralBasis& basis, const Samples& U);

/// ||X(T) - X(0)|| / ||X(0)|| after an RK4 pass over one period with
/// steps_per_period steps; absolute when X(0) = 0.
double periodicity_residual(const galerkin::GalerkinSystem& sys,
                            const Eigen::Ref<const Eigen::VectorXd>& x0, int steps_per_period);

enum class Method { picard, shooting };
const char* method_name(Method m);

struct PeriodicOrbit {
  PeriodicOrbit(PeriodicGrid g, Samples s, Method m)
      : grid(g), samples(std::move(s)), method(m) {}

  PeriodicGrid grid;
  Samples samples;
  Method method;
  bool converged = false;
  /// Picard: applications with update >= tol. Shooting: Newton steps taken.
  int iterations = 0;
  /// Picard: ||U - K_m(U)||_CT. Shooting: ||Phi_T(x) - x||.
  double fixed_point_residual = 0.0;
  /// From a fresh RK4 integration of the orbit's initial state.
  double periodicity_residual = 0.0;
  double ct_norm = 0.0;
  double worst_t = 0.0;
  /// Update norms (Picard) or ||G|| (shooting) per iteration.
  std::vector<double> history;
  /// Picard: damping in effect at exit.
  double theta = 1.0;
  /// Shooting: reciprocal condition estimate of the last Newton matrix.
  double rcond = 0.0;

  galerkin::GalerkinState state(int k) const {
    return {grid.time(k), samples.row(k).transpose()};
  }
};

struct PicardOptions {
  double theta = 1.0;
  double tol = 1e-10;
  int max_iter = 500;
  /// RK4 steps for the periodicity check; 0 selects 4 N_t.
  int steps_per_period = 0;
  FarkasOptions farkas;
};

/// U <- (1 - theta) U + theta K_m(U) with the w-block refreshed from the new
/// u-block. theta is halved when the update norm doubles over 10 iterations,
/// down to 1/16; beyond that ConvergenceError carries the update history.
PeriodicOrbit picard_solve(const galerkin::GalerkinSystem& sys, const PeriodicGrid& grid,
                           const Samples& U0, const PicardOptions& options = {});

struct ShootingOptions {
  double tol = 1e-10;
  int max_iter = 50;
  /// RK4 steps per period; must be a positive multiple of N_t. 0 selects 4 N_t.
  int steps_per_period = 0;
};

/// Newton on G(x) = Phi_T(x) - x with a forward-difference Jacobian.
/// Throws ConvergenceError on a singular Jacobian or after max_iter steps.
PeriodicOrbit shooting_solve(const galerkin::GalerkinSystem& sys, const PeriodicGrid& grid,
                             const Eigen::Ref<const Eigen::VectorXd>& x0_guess,
                             const ShootingOptions& options = {});

struct BallCertificate {
  double R = 0.0;
  bool member = false;
  double worst_t = 0.0;
  double margin = 0.0;
};

/// Closed ball: member iff ct_norm <= R.
BallCertificate certify_ball(const PeriodicGrid& grid, const Samples& U,
                             const spectral::SpectralBasis& basis, double R);
BallCertificate certify_ball(const PeriodicOrbit& orbit, double R);

/// max_{k, j} |a(k, j) - b(k, j)|.
double sup_norm_gap(const Samples& a, const Samples& b);

}  // namespace monoperiod::periodic
