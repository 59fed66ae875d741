#include "monoperiod/galerkin.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "monoperiod/errors.hpp"

namespace monoperiod::galerkin {

GalerkinState GalerkinState::from_blocks(const Eigen::VectorXd& u, const Eigen::VectorXd& w,
                                         double time) {
  if (u.size() != w.size()) throw std::invalid_argument("u and w blocks differ in length");
  Eigen::VectorXd x(2 * u.size());
  x << u, w;
  return {time, std::move(x)};
}

GalerkinSystem::GalerkinSystem(spectral::SpectralBasis basis, ionic::DerivedParameters params,
                               spectral::Stimulus stimulus)
    : basis_(std::move(basis)),
      params_(params),
      stimulus_(std::move(stimulus)),
      trace_(spectral::trace_functional(basis_, stimulus_)) {}

Eigen::VectorXd GalerkinSystem::nonlinear_forcing(
    const Eigen::Ref<const Eigen::VectorXd>& x) const {
  const int n = modes();
  return -spectral::project_nonlinearity(basis_, x.head(n), x.tail(n), params_);
}

Eigen::VectorXd GalerkinSystem::rhs(double t, const Eigen::Ref<const Eigen::VectorXd>& x) const {
  const int n = modes();
  if (x.size() != 2 * n) throw std::invalid_argument("state dimension does not match system");
  const auto u = x.head(n);
  const auto w = x.tail(n);
  Eigen::VectorXd dx(2 * n);
  dx.head(n) = -basis_.lambdas().cwiseProduct(u) + nonlinear_forcing(x) + stimulus_(t) * trace_;
  const double rate = params_.epsilon * params_.b;
  dx.tail(n) = rate * (u - params_.xi * params_.c3 * w);
  return dx;
}

long step_count(double t0, double t1, double dt) {
  if (!(dt > 0.0)) throw std::invalid_argument("dt must be positive");
  if (!(t1 > t0)) throw std::invalid_argument("t1 must exceed t0");
  const double r = (t1 - t0) / dt;
  const double nearest = std::round(r);
  if (nearest >= 1.0 && std::abs(r - nearest) <= 1e-9 * std::max(1.0, r))
    return static_cast<long>(nearest);
  return static_cast<long>(std::ceil(r));
}

namespace {

void check_finite(const Eigen::VectorXd& x, double t) {
  const double big = x.cwiseAbs().maxCoeff();
  if (!x.allFinite() || big > kBlowUpThreshold) {
    std::ostringstream msg;
    msg << "Galerkin state blew up at t = " << t << " (max |coeff| = " << big << ")";
    throw BlowUpError(msg.str(), t, big);
  }
}

Eigen::VectorXd rk4_step(const GalerkinSystem& sys, double t, double h,
                         const Eigen::VectorXd& x) {
  const Eigen::VectorXd k1 = sys.rhs(t, x);
  const Eigen::VectorXd k2 = sys.rhs(t + 0.5 * h, x + (0.5 * h) * k1);
  const Eigen::VectorXd k3 = sys.rhs(t + 0.5 * h, x + (0.5 * h) * k2);
  const Eigen::VectorXd k4 = sys.rhs(t + h, x + h * k3);
  return x + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

template <typename Visit>
Eigen::VectorXd run_rk4(const GalerkinSystem& sys, const GalerkinState& s0, double t1,
                        double dt, Visit&& visit) {
  if (s0.x.size() != sys.dimension())
    throw std::invalid_argument("initial state dimension does not match system");
  check_finite(s0.x, s0.t);
  const long n = step_count(s0.t, t1, dt);
  Eigen::VectorXd x = s0.x;
  for (long k = 0; k < n; ++k) {
    const double t = s0.t + static_cast<double>(k) * dt;
    const double t_next = (k + 1 == n) ? t1 : s0.t + static_cast<double>(k + 1) * dt;
    x = rk4_step(sys, t, t_next - t, x);
    check_finite(x, t_next);
    visit(k + 1, n, t_next, x);
  }
  return x;
}

}  // namespace

Trajectory integrate_cauchy(const GalerkinSystem& sys, const GalerkinState& state0, double t1,
                            double dt, int record_stride) {
  if (record_stride < 1) throw std::invalid_argument("record_stride must be >= 1");
  Trajectory traj;
  traj.dt = dt;
  traj.times.push_back(state0.t);
  traj.states.push_back(state0.x);
  run_rk4(sys, state0, t1, dt, [&](long k, long n, double t, const Eigen::VectorXd& x) {
    if (k % record_stride == 0 || k == n) {
      traj.times.push_back(t);
      traj.states.push_back(x);
    }
  });
  return traj;
}

GalerkinState advance(const GalerkinSystem& sys, const GalerkinState& state0, double t1,
                      double dt) {
  Eigen::VectorXd x = run_rk4(sys, state0, t1, dt, [](long, long, double, const auto&) {});
  return {t1, std::move(x)};
}

GalerkinState period_map(const GalerkinSystem& sys, const Eigen::Ref<const Eigen::VectorXd>& x0,
                         double dt) {
  return advance(sys, GalerkinState(0.0, x0), sys.period(), dt);
}

namespace {

PeriodMonitors monitors_on(const GalerkinSystem& sys, const Trajectory& traj, std::size_t first,
                           std::size_t last) {
  const int n = sys.modes();
  const Eigen::VectorXd& lambda = sys.basis().lambdas();
  PeriodMonitors out;
  double l2v = 0.0, du = 0.0, dw = 0.0;
  double prev_v = 0.0, prev_du = 0.0, prev_dw = 0.0;
  for (std::size_t k = first; k <= last; ++k) {
    const Eigen::VectorXd& x = traj.states[k];
    const auto u = x.head(n);
    const auto w = x.tail(n);
    out.sup_energy = std::max(out.sup_energy, u.squaredNorm() + w.squaredNorm());
    const Eigen::VectorXd dx = sys.rhs(traj.times[k], x);
    const double v = lambda.dot(u.cwiseAbs2());
    const double a = dx.head(n).squaredNorm();
    const double b = dx.tail(n).squaredNorm();
    if (k > first) {
      const double h = traj.times[k] - traj.times[k - 1];
      l2v += 0.5 * h * (v + prev_v);
      du += 0.5 * h * (a + prev_du);
      dw += 0.5 * h * (b + prev_dw);
    }
    prev_v = v;
    prev_du = a;
    prev_dw = b;
  }
  out.u_L2V = std::sqrt(l2v);
  out.du_L2 = std::sqrt(du);
  out.dw_L2 = std::sqrt(dw);
  return out;
}

double relative_spread(const std::vector<double>& v) {
  const auto [lo, hi] = std::minmax_element(v.begin(), v.end());
  const double scale = std::max(std::abs(*hi), std::abs(*lo));
  return scale > 0.0 ? (*hi - *lo) / scale : 0.0;
}

}  // namespace

AprioriReport apriori_monitor(const GalerkinSystem& sys, const Trajectory& traj,
                              std::optional<double> period) {
  AprioriReport report;
  if (traj.size() == 0) return report;
  report.total = monitors_on(sys, traj, 0, traj.size() - 1);
  if (!period) return report;

  const double T = *period;
  if (!(T > 0.0)) throw std::invalid_argument("monitor period must be positive");
  const double t0 = traj.times.front();
  const double tol = 1e-9 * T;
  // node index of each period boundary t0 + kT
  std::vector<std::size_t> marks{0};
  for (std::size_t k = 1; k < traj.size(); ++k) {
    const double target = t0 + static_cast<double>(marks.size()) * T;
    if (std::abs(traj.times[k] - target) <= tol) marks.push_back(k);
  }
  for (std::size_t p = 0; p + 1 < marks.size(); ++p)
    report.per_period.push_back(monitors_on(sys, traj, marks[p], marks[p + 1]));

  if (report.per_period.size() >= 2) {
    std::vector<double> e, v, a, b;
    for (const auto& m : report.per_period) {
      e.push_back(m.sup_energy);
      v.push_back(m.u_L2V);
      a.push_back(m.du_L2);
      b.push_back(m.dw_L2);
    }
    report.period_spread =
        std::max({relative_spread(e), relative_spread(v), relative_spread(a), relative_spread(b)});
    for (std::size_t p = 1; p < e.size(); ++p)
      if (e[p - 1] > 0.0 && e[p] > 2.0 * e[p - 1]) report.unbounded_growth = true;
  }
  return report;
}

RefinementGap refinement_gap(const GalerkinSystem& coarse, const Trajectory& a,
                             const GalerkinSystem& fine, const Trajectory& b) {
  if (!(coarse.stimulus() == fine.stimulus()))
    throw ConfigError("refinement runs use different stimuli");
  if (coarse.basis().geometry().L != fine.basis().geometry().L)
    throw ConfigError("refinement runs use different geometries");
  if (coarse.modes() > fine.modes())
    throw std::invalid_argument("coarse system has more modes than the fine one");
  if (a.times != b.times) throw std::invalid_argument("trajectories use different time grids");

  const int nc = coarse.modes();
  const int nf = fine.modes();
  const Eigen::MatrixXd& P = fine.basis().psi_at_nodes();
  const Eigen::VectorXd& wq = fine.basis().quad_weights();

  auto space_sq = [&](const Eigen::VectorXd& xa, const Eigen::VectorXd& xb, int block) {
    const Eigen::VectorXd fa = P.leftCols(nc) * xa.segment(block * nc, nc);
    const Eigen::VectorXd fb = P * xb.segment(block * nf, nf);
    return wq.dot((fb - fa).cwiseAbs2());
  };

  RefinementGap gap;
  double prev_u = 0.0, prev_w = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) {
    const double su = space_sq(a.states[k], b.states[k], 0);
    const double sw = space_sq(a.states[k], b.states[k], 1);
    if (k > 0) {
      const double h = a.times[k] - a.times[k - 1];
      gap.u += 0.5 * h * (su + prev_u);
      gap.w += 0.5 * h * (sw + prev_w);
    }
    prev_u = su;
    prev_w = sw;
  }
  gap.u = std::sqrt(gap.u);
  gap.w = std::sqrt(gap.w);
  return gap;
}

}  // namespace monoperiod::galerkin
