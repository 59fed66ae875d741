// Acceptance harness: one PASS/FAIL line per criterion, exit status 1 if any
// criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <random>
#include <sstream>
#include <string>

#include "fixtures.hpp"
#include "monoperiod/errors.hpp"
#include "monoperiod/feasibility.hpp"
#include "monoperiod/galerkin.hpp"
#include "monoperiod/periodic.hpp"
#include "oracles.hpp"

using namespace monoperiod;
using periodic::PeriodicGrid;
using periodic::Samples;

namespace {

struct Outcome {
  bool ok = true;
  std::ostringstream detail;

  void require(bool cond, const std::string& what) {
    if (!cond) {
      ok = false;
      detail << "[failed: " << what << "] ";
    }
  }
};

int failures = 0;

void criterion(int id, const char* name, double limit_s, const std::function<void(Outcome&)>& body) {
  Outcome out;
  const auto t0 = std::chrono::steady_clock::now();
  try {
    body(out);
  } catch (const std::exception& e) {
    out.ok = false;
    out.detail << "[exception: " << e.what() << "] ";
  }
  const double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (s >= limit_s) {
    out.ok = false;
    out.detail << "[over time limit " << limit_s << " s] ";
  }
  if (!out.ok) ++failures;
  std::printf("%s %d %s: %s(%.3f s)\n", out.ok ? "PASS" : "FAIL", id, name,
              out.detail.str().c_str(), s);
  std::fflush(stdout);
}

Eigen::VectorXd linear_steady(const galerkin::GalerkinSystem& sys, double s0) {
  const int n = sys.modes();
  Eigen::VectorXd x(2 * n);
  for (int i = 0; i < n; ++i) {
    x(i) = s0 * sys.trace_vector()(i) / sys.basis().lambda(i);
    x(n + i) = x(i) / (sys.params().xi * sys.params().c3);
  }
  return x;
}

// Ball radius used for the feasible configuration.
constexpr double kRadius = 1.4734;

feasibility::AggregateConstants honest_aggregate() {
  const auto d = fixtures::derived();
  return feasibility::AggregateConstants::derived(
      fixtures::raw_constants(d, fixtures::kLength, fixtures::sinusoid().sup(), 1.0));
}

feasibility::RegionParameters region_parameters() {
  const auto d = fixtures::derived();
  const auto hc = fixtures::honest_constants(d, fixtures::kLength);
  feasibility::RegionParameters rp;
  rp.xi = d.xi;
  rp.c3 = d.c3;
  rp.K1 = hc.K;
  rp.kappa = std::numbers::sqrt2 / 2.0;
  rp.epsilon = d.epsilon;
  rp.C = d.C;
  rp.u_tr = d.u_tr;
  rp.u_pr = d.u_pr;
  rp.omega_measure = fixtures::kLength;
  rp.B = fixtures::sinusoid().sup() * hc.trace_norm;
  return rp;
}

void kernel_identities(Outcome& out) {
  const auto sys = fixtures::feasible_system(8);
  const auto& d = sys.params();
  const PeriodicGrid grid(sys.period(), 512);
  const Eigen::VectorXd ones = Eigen::VectorXd::Ones(512);
  double worst = 0.0;
  for (int i = 0; i < sys.modes(); ++i) {
    const double lam = sys.basis().lambda(i);
    const Eigen::VectorXd y =
        periodic::KernelConvolution(lam, grid, periodic::KernelQuadrature::spectral).apply(ones);
    worst = std::max(worst, (y.array() * lam - 1.0).abs().maxCoeff());
  }
  const double rb = d.b * d.c3 * d.xi * d.epsilon;
  const Eigen::VectorXd yb =
      periodic::KernelConvolution(rb, grid, periodic::KernelQuadrature::spectral).apply(ones);
  const double worst_b = (yb.array() * rb - 1.0).abs().maxCoeff();

  // independent check of the pointwise kernels by adaptive integration
  double worst_oracle = 0.0;
  for (int k : {0, 100, 511}) {
    const double t = grid.time(k);
    auto integral = [&](const std::function<double(double)>& K) {
      return oracles::adaptive_integral(K, 0.0, t) + oracles::adaptive_integral(K, t, grid.period());
    };
    const double lam = sys.basis().lambda(8);
    const double Iu = integral([&](double tau) { return periodic::green_kernel_u(lam, grid.period(), t, tau); });
    const double Ib = integral([&](double tau) {
      return periodic::green_kernel_w(d.b, d.c3, d.xi, d.epsilon, grid.period(), t, tau);
    });
    worst_oracle = std::max({worst_oracle, std::abs(Iu * lam - 1.0), std::abs(Ib * rb - 1.0)});
  }
  out.detail << "max rel err K_i " << worst << ", K_b " << worst_b << ", adaptive " << worst_oracle
             << " ";
  out.require(worst <= 1e-12, "K_i integral");
  out.require(worst_b <= 1e-12, "K_b integral");
  out.require(worst_oracle <= 1e-12, "adaptive kernel integral");
}

void linear_oracle(Outcome& out) {
  const double s0 = 2.0;
  const auto sys = fixtures::linear_system(8, s0);
  const PeriodicGrid grid(sys.period(), 512);
  const Samples target = linear_steady(sys, s0).transpose().replicate(512, 1);

  const auto pic = periodic::picard_solve(sys, grid, Samples::Zero(512, sys.dimension()));
  const auto sh = periodic::shooting_solve(sys, grid, Eigen::VectorXd::Zero(sys.dimension()));
  const double ep = periodic::sup_norm_gap(pic.samples, target);
  const double es = periodic::sup_norm_gap(sh.samples, target);
  out.detail << "Picard " << pic.iterations << " it err " << ep << ", shooting " << sh.iterations
             << " step err " << es << " ";
  out.require(pic.converged && pic.iterations == 1, "one Picard iteration");
  out.require(sh.converged && sh.iterations == 1, "one Newton step");
  out.require(ep <= 1e-10 && es <= 1e-10, "error <= 1e-10");
}

void cross_method(Outcome& out) {
  const auto d = fixtures::derived();
  const auto agg = honest_aggregate();
  const double T = fixtures::kPeriod;
  const double rate = d.linear_rate();
  const double Tstar = feasibility::t_star(kRadius, agg, rate);
  const auto resq = feasibility::check_resq(kRadius, T, agg, rate);
  const auto resq1 = feasibility::check_resq1(d.xi, d.c3);
  const bool small = d.a2 < feasibility::a2_bound(d.a1, region_parameters());
  out.detail << "T* " << Tstar << " ";
  out.require(T <= Tstar && resq.holds, "T <= T*");
  out.require(resq1.holds, "xi c3 >= sqrt2");
  out.require(small, "a2 below the admissible bound");

  const auto sys = fixtures::feasible_system(8);
  const PeriodicGrid grid(sys.period(), 512);
  periodic::PicardOptions popt;
  popt.tol = 1e-11;
  const auto pic = periodic::picard_solve(sys, grid, Samples::Zero(512, sys.dimension()), popt);
  periodic::ShootingOptions sopt;
  sopt.tol = 1e-12;
  const auto sh = periodic::shooting_solve(sys, grid, Eigen::VectorXd::Zero(sys.dimension()), sopt);
  const double gap = periodic::sup_norm_gap(pic.samples, sh.samples);
  out.detail << "gap " << gap << ", periodicity residual Picard " << pic.periodicity_residual
             << " shooting " << sh.periodicity_residual << " ";
  out.require(pic.converged && sh.converged, "both converge");
  out.require(gap <= 1e-6, "sup gap <= 1e-6");
  out.require(pic.periodicity_residual <= 1e-8 && sh.periodicity_residual <= 1e-8,
              "periodicity residual <= 1e-8");
}

void invariance(Outcome& out) {
  const auto d = fixtures::derived();
  const auto agg = honest_aggregate();
  out.require(feasibility::check_resq(kRadius, fixtures::kPeriod, agg, d.linear_rate()).holds,
              "invariance condition at R");
  out.require(feasibility::check_resq1(d.xi, d.c3).holds, "xi c3 >= sqrt2");

  const auto sys = fixtures::feasible_system(8);
  const PeriodicGrid grid(sys.period(), 512);
  const periodic::FarkasOperator op(sys, grid);
  std::mt19937_64 rng(20240601);
  std::uniform_real_distribution<double> U(-1.0, 1.0), fill(0.1, 1.0);
  double worst = 0.0;
  int members = 0;
  for (int r = 0; r < 20; ++r) {
    Samples X(512, sys.dimension());
    for (Eigen::Index k = 0; k < X.size(); ++k) X.data()[k] = U(rng);
    // every fifth trajectory sits on the sphere, the others inside
    const double radius = (r % 5 == 0 ? 1.0 : fill(rng)) * kRadius;
    X *= radius / periodic::ct_norm(sys.basis(), X).value;
    const auto cert = periodic::certify_ball(grid, op.apply(X), sys.basis(), kRadius);
    worst = std::max(worst, (kRadius - cert.margin) / kRadius);
    members += cert.member;
  }
  out.detail << members << "/20 images in B_R, max ||K(U)||/R " << worst << " ";
  out.require(members == 20, "all images in the ball");
}

void feasibility_numerics(Outcome& out) {
  const auto a = fixtures::reference_aggregates(0.5);
  const double rs = feasibility::r_star(a);
  const double g = oracles::golden_section_max([&](double R) { return feasibility::p_of_R(R, a); },
                                               0.0, 100.0 * rs);
  const double rel = std::abs(rs - g) / g;
  out.detail << "R* " << rs << " golden " << g << " ";
  out.require(rel <= 1e-6, "R* vs golden section");
  out.require(std::abs(rs - 1.587e-2) <= 1e-3 * 1.587e-2, "R* ~ 1.587e-2");

  const auto b = fixtures::reference_aggregates(0.174), c = fixtures::reference_aggregates(0.1);
  double ratio_err = 0.0;
  for (double R : {1e-3, rs, 0.1, 1.0, 10.0}) {
    const double pa = feasibility::p_of_R(R, a);
    ratio_err = std::max({ratio_err, std::abs(feasibility::p_of_R(R, b) / pa - 0.348),
                          std::abs(feasibility::p_of_R(R, c) / pa - 0.2)});
  }
  out.require(ratio_err <= 1e-14, "p ratios 0.5 : 0.174 : 0.1");

  const double h0 = feasibility::p_of_R(feasibility::r_star(b), b);
  const bool crossing = feasibility::condition_temp12(a, h0).holds;
  const auto tangent = feasibility::r_bounds(b, h0);
  const bool tangent_ok = !feasibility::condition_temp12(b, h0).holds && tangent.R1 == tangent.R2;
  bool disjoint = false;
  try {
    feasibility::r_bounds(c, h0);
  } catch (const std::domain_error&) {
    disjoint = !feasibility::condition_temp12(c, h0).holds;
  }
  out.detail << "h(0) " << h0 << ": crossing " << crossing << " tangent " << tangent_ok
             << " disjoint " << disjoint << " ";
  out.require(crossing && tangent_ok && disjoint, "three-case ordering");
}

void rk4_order(Outcome& out) {
  const auto sys = fixtures::linear_system(2, 0.0);
  const auto& d = sys.params();
  const int n = sys.modes();
  const double rw = d.epsilon * d.b * d.xi * d.c3, cw = d.epsilon * d.b;
  Eigen::VectorXd x0(2 * n);
  x0 << 1.0, -0.5, 0.25, 0.2, 0.1, -0.3;
  const double t1 = 0.1;
  Eigen::VectorXd exact(2 * n);
  for (int i = 0; i < n; ++i) {
    const double lam = sys.basis().lambda(i);
    exact(i) = x0(i) * std::exp(-lam * t1);
    exact(n + i) = x0(n + i) * std::exp(-rw * t1) +
                   cw * x0(i) * (std::exp(-lam * t1) - std::exp(-rw * t1)) / (rw - lam);
  }
  auto error = [&](double dt) {
    return (galerkin::advance(sys, {0.0, x0}, t1, dt).x - exact).cwiseAbs().maxCoeff();
  };
  double prev = error(2e-3);
  double min_factor = 1e300;
  out.detail << "errors " << prev;
  for (int h = 1; h <= 3; ++h) {
    const double e = error(2e-3 / (1 << h));
    out.detail << " " << e;
    min_factor = std::min(min_factor, prev / e);
    prev = e;
  }
  out.detail << ", min factor " << min_factor << " ";
  out.require(min_factor >= 15.0, "factor >= 15 per halving");
}

void quadrature_exactness(Outcome& out) {
  ionic::DerivedParameters d;
  d.epsilon = d.C = d.xi = 1.0;
  d.a1 = 1.0;  // f = u^3
  d.a2 = 0.0;
  d.u_tr = d.u_pr = 0.0;
  d.c4 = d.sigma = 1.0;
  const double L = 1.3;
  std::mt19937 rng(5);
  std::uniform_real_distribution<double> U(-1.0, 1.0);
  double worst = 0.0;
  for (int m = 0; m <= 4; ++m) {
    const auto basis = spectral::build_basis({L}, m, d);
    Eigen::VectorXd u(m + 1);
    for (int i = 0; i <= m; ++i) u(i) = U(rng);
    const Eigen::VectorXd proj =
        spectral::project_nonlinearity(basis, u, Eigen::VectorXd::Zero(m + 1), d);
    for (int i = 0; i <= m; ++i) {
      double ref = 0.0;
      for (int j = 0; j <= m; ++j)
        for (int k = 0; k <= m; ++k)
          for (int l = 0; l <= m; ++l)
            ref += u(j) * u(k) * u(l) * oracles::basis_product_integral({i, j, k, l}, L);
      worst = std::max(worst, std::abs(proj(i) - ref));
    }
  }
  out.detail << "max abs err " << worst << " ";
  out.require(worst <= 1e-12, "cubic projection <= 1e-12");
}

void refinement(Outcome& out) {
  const double T = fixtures::kPeriod;
  const double dt = T / 400.0;
  const double t_end = 2.0 * T;
  std::vector<double> gaps;
  auto sys_c = fixtures::feasible_system(4);
  auto traj_c = galerkin::integrate_cauchy(sys_c, galerkin::GalerkinState::zero(5), t_end, dt);
  for (int m : {8, 16, 32}) {
    auto sys_f = fixtures::feasible_system(m);
    auto traj_f =
        galerkin::integrate_cauchy(sys_f, galerkin::GalerkinState::zero(m + 1), t_end, dt);
    gaps.push_back(galerkin::refinement_gap(sys_c, traj_c, sys_f, traj_f).u);
    sys_c = std::move(sys_f);
    traj_c = std::move(traj_f);
  }
  out.detail << "gaps";
  for (double g : gaps) out.detail << " " << g;
  out.detail << ", ";
  out.require(gaps[1] <= gaps[0] && gaps[2] <= gaps[1], "gaps nonincreasing");

  // monitors over ten periods started on the periodic orbit
  const auto sys = fixtures::feasible_system(8);
  const PeriodicGrid grid(T, 512);
  periodic::ShootingOptions sopt;
  sopt.tol = 1e-13;
  const auto orbit = periodic::shooting_solve(sys, grid, Eigen::VectorXd::Zero(sys.dimension()), sopt);
  const auto traj = galerkin::integrate_cauchy(sys, orbit.state(0), 10.0 * T, T / 2048.0);
  const auto rep = galerkin::apriori_monitor(sys, traj, T);
  const bool finite = std::isfinite(rep.total.sup_energy) && std::isfinite(rep.total.u_L2V) &&
                      std::isfinite(rep.total.du_L2) && std::isfinite(rep.total.dw_L2);
  out.detail << "monitor spread " << rep.period_spread << " over " << rep.per_period.size()
             << " periods ";
  out.require(rep.per_period.size() == 10, "ten complete periods");
  out.require(finite && !rep.unbounded_growth, "monitors bounded");
  out.require(rep.period_spread <= 1e-6, "period-stationary within 1e-6");
}

void region(Outcome& out) {
  const auto rp = region_parameters();
  const double a1_max = 4.0;
  const auto g = feasibility::region_sweep(rp, 0.0, a1_max, 81, 1.25 * feasibility::a2_bound(a1_max, rp), 81);
  int members = 0, violations = 0;
  for (std::size_t i = 0; i < g.a1.size(); ++i)
    for (std::size_t j = 0; j < g.a2.size(); ++j)
      if (g.member[i][j]) {
        ++members;
        if (!feasibility::check_temp14(g.a1[i], g.a2[j], rp).holds) ++violations;
      }
  bool zero_row_empty = true;
  for (bool m : g.member[0]) zero_row_empty = zero_row_empty && !m;
  out.detail << members << " sampled members, " << violations << " violations ";
  out.require(members > 0, "region nonempty");
  out.require(violations == 0, "members satisfy the direct condition");
  out.require(g.a1[0] == 0.0 && zero_row_empty, "a1 = 0 row empty");
}

}  // namespace

int main() {
  criterion(1, "kernel identities", 1.0, kernel_identities);
  criterion(2, "linear oracle", 5.0, linear_oracle);
  criterion(3, "cross-method agreement", 120.0, cross_method);
  criterion(4, "ball invariance", 120.0, invariance);
  criterion(5, "feasibility numerics", 1.0, feasibility_numerics);
  criterion(6, "RK4 order", 10.0, rk4_order);
  criterion(7, "quadrature exactness", 1.0, quadrature_exactness);
  criterion(8, "Galerkin refinement and monitors", 300.0, refinement);
  criterion(9, "admissible region", 5.0, region);
  std::printf("%d of 9 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
