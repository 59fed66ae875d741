#include "monoperiod/periodic.hpp"

#include <Eigen/LU>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "monoperiod/errors.hpp"

namespace monoperiod::periodic {

using galerkin::GalerkinSystem;

PeriodicGrid::PeriodicGrid(double period, int nodes) : T_(period), N_(nodes) {
  if (!(std::isfinite(period) && period > 0.0))
    throw std::invalid_argument("grid period must be positive");
  if (nodes < kMinNodes) throw std::invalid_argument("periodic grid needs at least 64 nodes");
}

std::vector<double> PeriodicGrid::times() const {
  std::vector<double> t(static_cast<std::size_t>(N_));
  for (int k = 0; k < N_; ++k) t[static_cast<std::size_t>(k)] = time(k);
  return t;
}

double green_kernel(double rate, double T, double t, double tau) {
  if (!(rate > 0.0)) throw std::invalid_argument("kernel rate must be positive");
  if (!(T > 0.0)) throw std::invalid_argument("kernel period must be positive");
  if (!(t >= 0.0 && t <= T && tau >= 0.0 && tau <= T))
    throw std::invalid_argument("kernel arguments must lie in [0, T]");
  const double norm = -1.0 / std::expm1(-rate * T);
  if (tau <= t) return norm * std::exp(-rate * (t - tau));
  return norm * std::exp(-rate * (t + T - tau));
}

double green_kernel_u(double lambda_i, double T, double t, double tau) {
  return green_kernel(lambda_i, T, t, tau);
}

double green_kernel_w(double b, double c3, double xi, double epsilon, double T, double t,
                      double tau) {
  return green_kernel(b * c3 * xi * epsilon, T, t, tau);
}

namespace {

// phi_1(z) = (e^z - 1)/z and phi_2(z) = (e^z - 1 - z)/z^2.
double phi1(double z) { return z == 0.0 ? 1.0 : std::expm1(z) / z; }

double phi2(double z) {
  if (std::abs(z) < 0.1) {
    double term = 0.5, sum = 0.5;
    for (int k = 3; k < 14; ++k) {
      term *= z / k;
      sum += term;
    }
    return sum;
  }
  return (std::expm1(z) - z) / (z * z);
}

}  // namespace

KernelConvolution::KernelConvolution(double rate, const PeriodicGrid& grid,
                                     KernelQuadrature rule)
    : rate_(rate), grid_(grid), rule_(rule) {
  if (!(rate > 0.0) || !std::isfinite(rate))
    throw std::invalid_argument("kernel rate must be positive");
  const int N = grid.nodes();
  const double T = grid.period();
  const double h = grid.spacing();

  if (rule == KernelQuadrature::product_trapezoid) {
    const double z = -rate * h;
    w_right_ = h * phi2(z);
    w_left_ = h * phi1(z) - w_right_;
    decay_ = std::exp(z);
    return;
  }

  // c_n = (1/N) sum_k e^{2 pi i k n / N} / (rate + i omega_k), omega_k = 2 pi k / T,
  // k symmetric about 0 with the Nyquist term split evenly.
  circulant_.resize(N);
  const int half = N / 2;
  for (int n = 0; n < N; ++n) {
    double s = 1.0 / rate;
    for (int k = 1; k < half; ++k) {
      const double om = 2.0 * std::numbers::pi * k / T;
      const double th = 2.0 * std::numbers::pi * static_cast<double>((static_cast<long>(k) * n) % N) / N;
      s += 2.0 * (rate * std::cos(th) + om * std::sin(th)) / (rate * rate + om * om);
    }
    if (N % 2 == 0) {
      const double om = 2.0 * std::numbers::pi * half / T;
      s += ((n % 2 == 0) ? 1.0 : -1.0) * rate / (rate * rate + om * om);
    } else {
      const double om = 2.0 * std::numbers::pi * half / T;
      const double th = 2.0 * std::numbers::pi * static_cast<double>((static_cast<long>(half) * n) % N) / N;
      s += 2.0 * (rate * std::cos(th) + om * std::sin(th)) / (rate * rate + om * om);
    }
    circulant_(n) = s / N;
  }
}

Eigen::VectorXd KernelConvolution::apply(const Eigen::Ref<const Eigen::VectorXd>& F) const {
  const int N = grid_.nodes();
  if (F.size() != N) throw std::invalid_argument("forcing length does not match grid");
  Eigen::VectorXd y(N);

  if (rule_ == KernelQuadrature::spectral) {
    for (int k = 0; k < N; ++k) {
      double s = 0.0;
      for (int j = 0; j <= k; ++j) s += circulant_(k - j) * F(j);
      for (int j = k + 1; j < N; ++j) s += circulant_(k - j + N) * F(j);
      y(k) = s;
    }
    return y;
  }

  // G_k = int_0^{t_k} e^{-rate (t_k - tau)} F dtau; y_k = G_k + e^{-rate t_k} G_N / (1 - e^{-rate T})
  Eigen::VectorXd G(N + 1);
  G(0) = 0.0;
  for (int j = 0; j < N; ++j) {
    const double right = F((j + 1) % N);
    G(j + 1) = decay_ * G(j) + w_left_ * F(j) + w_right_ * right;
  }
  const double wrap = -G(N) / std::expm1(-rate_ * grid_.period());
  for (int k = 0; k < N; ++k) y(k) = G(k) + std::exp(-rate_ * grid_.time(k)) * wrap;
  return y;
}

FarkasOperator::FarkasOperator(const GalerkinSystem& sys, const PeriodicGrid& grid,
                               FarkasOptions options)
    : sys_(&sys),
      grid_(grid),
      options_(options),
      w_kernel_(sys.params().recovery_rate(), grid, options.quadrature) {
  if (std::abs(grid.period() - sys.period()) > 1e-12 * sys.period())
    throw std::invalid_argument("grid period differs from the stimulus period");
  for (int i = 0; i < sys.modes(); ++i) {
    const double lam = sys.basis().lambda(i);
    if (!(lam > 0.0))
      throw std::invalid_argument("eigenvalue lambda_i <= 0: kernel undefined");
    u_kernels_.emplace_back(lam, grid, options.quadrature);
  }
}

void FarkasOperator::check_shape(const Samples& U) const {
  if (U.rows() != grid_.nodes() || U.cols() != sys_->dimension())
    throw std::invalid_argument("trajectory shape does not match grid and system");
}

Eigen::MatrixXd FarkasOperator::forcing(const Samples& U) const {
  check_shape(U);
  const int n = sys_->modes();
  const double sign = options_.literal_sign ? -1.0 : 1.0;
  Eigen::MatrixXd F(grid_.nodes(), n);
  for (int k = 0; k < grid_.nodes(); ++k) {
    const Eigen::VectorXd x = U.row(k).transpose();
    F.row(k) = (sign * sys_->nonlinear_forcing(x) +
                sys_->stimulus()(grid_.time(k)) * sys_->trace_vector())
                   .transpose();
  }
  return F;
}

Eigen::MatrixXd FarkasOperator::u_image(const Samples& U) const {
  const Eigen::MatrixXd F = forcing(U);
  Eigen::MatrixXd out(F.rows(), F.cols());
  for (int i = 0; i < sys_->modes(); ++i) out.col(i) = u_kernels_[i].apply(F.col(i));
  return out;
}

Eigen::MatrixXd FarkasOperator::w_image(const Eigen::MatrixXd& u) const {
  const double gain = sys_->params().epsilon * sys_->params().b;
  Eigen::MatrixXd out(u.rows(), u.cols());
  for (int i = 0; i < u.cols(); ++i) out.col(i) = w_kernel_.apply(gain * u.col(i));
  return out;
}

Samples FarkasOperator::apply(const Samples& U) const {
  const int n = sys_->modes();
  Samples out(U.rows(), U.cols());
  out.leftCols(n) = u_image(U);
  out.rightCols(n) = w_image(U.leftCols(n));
  return out;
}

Samples FarkasOperator::apply_sequential(const Samples& U) const {
  const int n = sys_->modes();
  Samples out(U.rows(), U.cols());
  out.leftCols(n) = u_image(U);
  out.rightCols(n) = w_image(out.leftCols(n));
  return out;
}

Samples farkas_apply(const GalerkinSystem& sys, const PeriodicGrid& grid, const Samples& U,
                     FarkasOptions options) {
  return FarkasOperator(sys, grid, options).apply(U);
}

CTNorm ct_norm(const spectral::SpectralBasis& basis, const Samples& U) {
  const int n = basis.size();
  if (U.cols() != 2 * n) throw std::invalid_argument("trajectory width does not match basis");
  CTNorm out;
  double best = -1.0;
  for (int k = 0; k < U.rows(); ++k) {
    const double v = basis.lambdas().dot(U.row(k).head(n).transpose().cwiseAbs2()) +
                     U.row(k).tail(n).squaredNorm();
    if (v > best) {
      best = v;
      out.row = k;
    }
  }
  out.value = std::sqrt(std::max(best, 0.0));
  return out;
}

double periodicity_residual(const GalerkinSystem& sys,
                            const Eigen::Ref<const Eigen::VectorXd>& x0, int steps_per_period) {
  if (steps_per_period < 1) throw std::invalid_argument("steps_per_period must be >= 1");
  const double dt = sys.period() / steps_per_period;
  const Eigen::VectorXd xT = galerkin::period_map(sys, x0, dt).x;
  const double scale = x0.norm();
  const double gap = (xT - x0).norm();
  return scale > 0.0 ? gap / scale : gap;
}

const char* method_name(Method m) { return m == Method::picard ? "picard" : "shooting"; }

namespace {

int resolve_steps(int steps, const PeriodicGrid& grid) {
  return steps == 0 ? 4 * grid.nodes() : steps;
}

void finish_orbit(PeriodicOrbit& orbit, const GalerkinSystem& sys, int steps_per_period) {
  const CTNorm norm = ct_norm(sys.basis(), orbit.samples);
  orbit.ct_norm = norm.value;
  orbit.worst_t = orbit.grid.time(norm.row);
  orbit.periodicity_residual =
      periodicity_residual(sys, orbit.samples.row(0).transpose(), steps_per_period);
}

}  // namespace

PeriodicOrbit picard_solve(const GalerkinSystem& sys, const PeriodicGrid& grid,
                           const Samples& U0, const PicardOptions& options) {
  if (!(options.theta > 0.0 && options.theta <= 1.0))
    throw std::invalid_argument("damping theta must lie in (0, 1]");
  if (!(options.tol > 0.0)) throw std::invalid_argument("tolerance must be positive");
  if (options.max_iter < 1) throw std::invalid_argument("max_iter must be >= 1");
  const int steps = resolve_steps(options.steps_per_period, grid);

  constexpr double kThetaFloor = 1.0 / 16.0;
  constexpr int kWindow = 10;

  const FarkasOperator op(sys, grid, options.farkas);
  PeriodicOrbit orbit(grid, U0, Method::picard);
  orbit.theta = options.theta;

  Samples U = U0;
  Samples best = U0;
  double best_update = std::numeric_limits<double>::infinity();
  std::vector<double> window;  // update norms since the last restart

  for (int it = 0; it < options.max_iter; ++it) {
    Samples next = (1.0 - orbit.theta) * U + orbit.theta * op.apply_sequential(U);
    const double update =
        next.allFinite() ? ct_norm(sys.basis(), next - U).value
                         : std::numeric_limits<double>::infinity();
    orbit.history.push_back(update);

    if (update < options.tol) {
      U = std::move(next);
      orbit.converged = true;
      break;
    }
    ++orbit.iterations;
    window.push_back(update);

    const bool diverging =
        !std::isfinite(update) ||
        (window.size() > kWindow && update > 2.0 * window[window.size() - 1 - kWindow]);
    if (diverging) {
      if (orbit.theta <= kThetaFloor) {
        std::ostringstream msg;
        msg << "Picard iteration diverges at theta = " << orbit.theta << " after "
            << orbit.history.size() << " applications";
        throw ConvergenceError(msg.str(), orbit.history);
      }
      orbit.theta = std::max(kThetaFloor, 0.5 * orbit.theta);
      U = best;
      window.clear();
      continue;
    }
    if (update < best_update) {
      best_update = update;
      best = next;
    }
    U = std::move(next);
  }

  orbit.samples = orbit.converged ? U : best;
  orbit.fixed_point_residual = ct_norm(sys.basis(), orbit.samples - op.apply(orbit.samples)).value;
  finish_orbit(orbit, sys, steps);
  return orbit;
}

PeriodicOrbit shooting_solve(const GalerkinSystem& sys, const PeriodicGrid& grid,
                             const Eigen::Ref<const Eigen::VectorXd>& x0_guess,
                             const ShootingOptions& options) {
  if (!(options.tol > 0.0)) throw std::invalid_argument("tolerance must be positive");
  if (options.max_iter < 1) throw std::invalid_argument("max_iter must be >= 1");
  if (std::abs(grid.period() - sys.period()) > 1e-12 * sys.period())
    throw std::invalid_argument("grid period differs from the stimulus period");
  const int steps = resolve_steps(options.steps_per_period, grid);
  if (steps % grid.nodes() != 0)
    throw std::invalid_argument("steps_per_period must be a multiple of the grid size");
  if (x0_guess.size() != sys.dimension())
    throw std::invalid_argument("initial guess dimension does not match system");

  const double dt = sys.period() / steps;
  const int dim = sys.dimension();
  auto G = [&](const Eigen::VectorXd& x) -> Eigen::VectorXd {
    return galerkin::period_map(sys, x, dt).x - x;
  };

  PeriodicOrbit orbit(grid, Samples(), Method::shooting);
  Eigen::VectorXd x = x0_guess;
  Eigen::VectorXd g = G(x);
  orbit.history.push_back(g.norm());

  while (g.norm() > options.tol * std::max(1.0, x.norm())) {
    if (orbit.iterations >= options.max_iter)
      throw ConvergenceError("shooting Newton iteration did not converge", orbit.history);
    Eigen::MatrixXd J(dim, dim);
    for (int j = 0; j < dim; ++j) {
      const double h = 1e-6 * std::max(1.0, std::abs(x(j)));
      Eigen::VectorXd xp = x;
      xp(j) += h;
      J.col(j) = (G(xp) - g) / (xp(j) - x(j));
    }
    const Eigen::PartialPivLU<Eigen::MatrixXd> lu(J);
    orbit.rcond = lu.rcond();
    if (!(orbit.rcond > 1e3 * std::numeric_limits<double>::epsilon())) {
      std::ostringstream msg;
      msg << "shooting Jacobian is singular (rcond = " << orbit.rcond << ")";
      throw ConvergenceError(msg.str(), orbit.history);
    }
    x -= lu.solve(g);
    g = G(x);
    ++orbit.iterations;
    orbit.history.push_back(g.norm());
  }
  orbit.converged = true;
  orbit.fixed_point_residual = g.norm();

  // resample the orbit on the grid from one more period
  const int stride = steps / grid.nodes();
  const galerkin::Trajectory traj =
      galerkin::integrate_cauchy(sys, galerkin::GalerkinState(0.0, x), sys.period(), dt, stride);
  orbit.samples.resize(grid.nodes(), dim);
  for (int k = 0; k < grid.nodes(); ++k)
    orbit.samples.row(k) = traj.states[static_cast<std::size_t>(k)].transpose();
  finish_orbit(orbit, sys, steps);
  return orbit;
}

BallCertificate certify_ball(const PeriodicGrid& grid, const Samples& U,
                             const spectral::SpectralBasis& basis, double R) {
  if (!(R >= 0.0)) throw std::invalid_argument("ball radius must be nonnegative");
  const CTNorm norm = ct_norm(basis, U);
  BallCertificate cert;
  cert.R = R;
  cert.member = norm.value <= R;
  cert.worst_t = grid.time(norm.row);
  cert.margin = R - norm.value;
  return cert;
}

BallCertificate certify_ball(const PeriodicOrbit& orbit, double R) {
  if (!(R >= 0.0)) throw std::invalid_argument("ball radius must be nonnegative");
  BallCertificate cert;
  cert.R = R;
  cert.member = orbit.ct_norm <= R;
  cert.worst_t = orbit.worst_t;
  cert.margin = R - orbit.ct_norm;
  return cert;
}

double sup_norm_gap(const Samples& a, const Samples& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols())
    throw std::invalid_argument("trajectories differ in shape");
  return (a - b).cwiseAbs().maxCoeff();
}

}  // namespace monoperiod::periodic
