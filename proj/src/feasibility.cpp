#include "monoperiod/feasibility.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace monoperiod::feasibility {

namespace {

constexpr double kRelTol = 1e-12;
constexpr int kMaxBisections = 200;

// Root of a function changing sign on [lo, hi]; sign_lo is the sign at lo.
template <typename F>
double bisect(F&& f, double lo, double hi, bool negative_at_lo) {
  for (int it = 0; it < kMaxBisections && hi - lo > kRelTol * std::abs(hi); ++it) {
    const double mid = 0.5 * (lo + hi);
    if ((f(mid) < 0.0) == negative_at_lo)
      lo = mid;
    else
      hi = mid;
  }
  return 0.5 * (lo + hi);
}

void require(bool ok, const char* what) {
  if (!ok) throw std::invalid_argument(what);
}

}  // namespace

AggregateConstants AggregateConstants::direct(double kappa, double beta, double gamma,
                                              double delta) {
  AggregateConstants a{kappa, beta, gamma, delta, Provenance::direct};
  a.validate();
  return a;
}

AggregateConstants AggregateConstants::derived(const RawConstants& raw) {
  require(raw.M_over_alpha >= 0.0, "M/alpha must be nonnegative");
  require(raw.omega_measure > 0.0, "|Omega| must be positive");
  AggregateConstants a;
  a.kappa = std::numbers::sqrt2 / (2.0 * (1.0 + raw.M_over_alpha));
  a.beta = raw.A2 * raw.K1 * raw.K2;
  a.gamma = raw.A3 * raw.K1;
  a.delta = raw.A1 * raw.K1 * std::pow(raw.omega_measure, 0.75) +
            raw.s_hat * raw.trace_norm * raw.phi_norm;
  a.provenance = Provenance::derived;
  a.validate();
  return a;
}

void AggregateConstants::validate() const {
  require(std::isfinite(kappa) && kappa > 0.0, "kappa must be positive");
  require(std::isfinite(beta) && beta >= 0.0, "beta must be nonnegative");
  require(std::isfinite(gamma) && gamma >= 0.0, "gamma must be nonnegative");
  require(std::isfinite(delta) && delta > 0.0, "delta must be positive");
  require(beta + gamma > 0.0, "beta and gamma cannot both vanish (p has no maximum)");
}

double h_of_T(double T, double rate) {
  require(std::isfinite(rate) && rate > 0.0, "h needs a positive rate eps*c4/C");
  require(T >= 0.0, "h needs T >= 0");
  if (T == 0.0) return 1.0 / rate;
  return T / -std::expm1(-rate * T);
}

double h_of_T(double T, double c4, double epsilon, double C) {
  return h_of_T(T, epsilon * c4 / C);
}

double h_at_zero(double c4, double epsilon, double C) { return h_of_T(0.0, c4, epsilon, C); }

double p_of_R(double R, const AggregateConstants& agg) {
  require(R >= 0.0, "p needs R >= 0");
  return agg.kappa * R / (agg.beta * R * R * R + agg.gamma * std::pow(R, 1.5) + agg.delta);
}

double r_star(const AggregateConstants& agg) {
  agg.validate();
  const double root = std::sqrt(agg.gamma * agg.gamma + 32.0 * agg.beta * agg.delta);
  return std::pow(4.0 * agg.delta / (root + agg.gamma), 2.0 / 3.0);
}

ConditionResult condition_temp12(const AggregateConstants& agg, double h0) {
  require(std::isfinite(h0) && h0 > 0.0, "h(0) must be positive");
  ConditionResult r;
  r.lhs = h0;
  r.rhs = p_of_R(r_star(agg), agg);
  r.margin = r.rhs - r.lhs;
  r.holds = r.lhs < r.rhs;
  return r;
}

ConditionResult condition_temp12(const AggregateConstants& agg, double C, double epsilon,
                                 double c4) {
  return condition_temp12(agg, h_at_zero(c4, epsilon, C));
}

ConditionResult check_resq1(double xi, double c3) {
  ConditionResult r;
  r.lhs = xi * c3;
  r.rhs = std::numbers::sqrt2;
  r.margin = r.lhs - r.rhs;
  r.holds = r.lhs >= r.rhs;
  return r;
}

RBounds r_bounds(const AggregateConstants& agg, double h0) {
  require(std::isfinite(h0) && h0 > 0.0, "h(0) must be positive");
  const double Rs = r_star(agg);
  const double top = p_of_R(Rs, agg);
  if (h0 > top * (1.0 + kRelTol))
    throw std::domain_error("h(0) exceeds max p: no radius satisfies p(R) = h(0)");
  if (h0 >= top) return {Rs, Rs};

  auto f = [&](double R) { return p_of_R(R, agg) - h0; };
  double big = 2.0 * Rs;
  for (int k = 0; k < 2000 && f(big) >= 0.0; ++k) big *= 2.0;
  return {bisect(f, 0.0, Rs, true), bisect(f, Rs, big, false)};
}

double t_star(double R, const AggregateConstants& agg, double rate) {
  const double target = p_of_R(R, agg);
  const double h0 = h_of_T(0.0, rate);
  if (target < h0 * (1.0 - 1e-9))
    throw std::domain_error("p(R) < h(0): R lies outside [R1, R2]");
  if (target <= h0 * (1.0 + 1e-9)) return 0.0;
  // h(T) >= T, so T = p(R) brackets the root from above
  auto f = [&](double T) { return h_of_T(T, rate) - target; };
  return bisect(f, 0.0, target, true);
}

ConditionResult check_resq(double R, double T, const AggregateConstants& agg, double rate) {
  ConditionResult r;
  r.lhs = h_of_T(T, rate);
  r.rhs = p_of_R(R, agg);
  r.margin = r.rhs - r.lhs;
  r.holds = r.lhs <= r.rhs;
  return r;
}

ConditionResult check_resq_raw(double R, double T, const RawConstants& raw, double c4,
                               double epsilon, double C, bool literal_exponent) {
  require(R >= 0.0, "R must be nonnegative");
  const double rate = literal_exponent ? c4 : epsilon * c4 / C;
  const double M1 = raw.K1 * (raw.A1 * std::pow(raw.omega_measure, 0.75) +
                              raw.A2 * raw.K2 * R * R * R + raw.A3 * std::pow(R, 1.5));
  ConditionResult r;
  r.lhs = h_of_T(T, rate);
  r.rhs = std::numbers::sqrt2 * R /
          (2.0 * (1.0 + raw.M_over_alpha) * (M1 + raw.s_hat * raw.trace_norm * raw.phi_norm));
  r.margin = r.rhs - r.lhs;
  r.holds = r.lhs <= r.rhs;
  return r;
}

double RegionParameters::A() const {
  return std::pow(omega_measure, 0.75) *
         ((u_tr + u_pr) / 3.0 + 2.0 * u_tr * u_pr / 3.0);
}

void RegionParameters::validate() const {
  require(xi > 0.0 && c3 > 0.0, "xi and c3 must be positive");
  require(K1 > 0.0 && kappa > 0.0, "K1 and kappa must be positive");
  require(epsilon > 0.0 && C > 0.0, "epsilon and C must be positive");
  require(u_tr > 0.0 && u_pr > 0.0, "u_tr and u_pr must be positive");
  require(omega_measure > 0.0, "|Omega| must be positive");
  require(B > 0.0, "B = s_hat N_T ||phi|| must be positive");
}

ConditionResult check_temp14(double a1, double a2, const RegionParameters& rp) {
  rp.validate();
  require(a1 >= 0.0 && a2 >= 0.0, "a1 and a2 must be nonnegative");
  constexpr double inf = std::numeric_limits<double>::infinity();
  const double c4 = a1 * rp.u_tr * rp.u_pr;
  const double gamma = rp.xi * a2 * rp.K1 / 3.0;
  const double delta = rp.A() * rp.epsilon * rp.K1 / rp.C * a1 + rp.B;
  ConditionResult r;
  r.lhs = c4 > 0.0 ? rp.C / (rp.epsilon * c4) : inf;
  r.rhs = gamma > 0.0
              ? rp.kappa * std::cbrt(4.0) / (3.0 * std::pow(gamma, 2.0 / 3.0) * std::cbrt(delta))
              : inf;
  r.holds = r.lhs < r.rhs;
  r.margin = (std::isinf(r.lhs) && std::isinf(r.rhs)) ? 0.0 : r.rhs - r.lhs;
  return r;
}

double a2_bound(double a1, const RegionParameters& rp, bool literal) {
  rp.validate();
  require(a1 >= 0.0, "a1 must be nonnegative");
  const double coeff = literal ? 2.0 * std::numbers::sqrt2 / (std::numbers::sqrt3 * rp.c3 * rp.K1)
                               : 2.0 / (std::numbers::sqrt3 * rp.xi * rp.K1);
  const double scale = std::pow(rp.epsilon * rp.u_tr * rp.u_pr * rp.kappa / rp.C, 1.5);
  const double denom = std::sqrt(rp.A() * rp.epsilon * rp.K1 / rp.C * a1 + rp.B);
  return coeff * scale * std::pow(a1, 1.5) / denom;
}

namespace {

std::vector<double> uniform(double lo, double hi, int count) {
  require(count >= 1, "grid needs at least one point");
  require(hi >= lo, "grid upper end below lower end");
  std::vector<double> x(static_cast<std::size_t>(count));
  for (int k = 0; k < count; ++k)
    x[static_cast<std::size_t>(k)] = count == 1 ? lo : lo + (hi - lo) * k / (count - 1);
  return x;
}

}  // namespace

RegionGrid region_sweep(const RegionParameters& rp, double a1_min, double a1_max, int a1_count,
                        double a2_max, int a2_count, bool literal) {
  require(a1_min >= 0.0 && a2_max >= 0.0, "region bounds must be nonnegative");
  RegionGrid g;
  g.a1 = uniform(a1_min, a1_max, a1_count);
  g.a2 = uniform(0.0, a2_max, a2_count);
  for (double a1 : g.a1) {
    const double bound = a2_bound(a1, rp, literal);
    g.bound.push_back(bound);
    std::vector<bool> row;
    for (double a2 : g.a2) row.push_back(a2 < bound);
    g.member.push_back(std::move(row));
  }
  return g;
}

Curve h_curve(double rate, double T_max, int points) {
  require(points >= 2, "curve needs at least two points");
  require(T_max > 0.0, "T_max must be positive");
  Curve c;
  c.x = uniform(0.0, T_max, points);
  for (double T : c.x) c.value.push_back(h_of_T(T, rate));
  return c;
}

Curve p_curve(const AggregateConstants& agg, double R_max, int points) {
  require(points >= 2, "curve needs at least two points");
  require(R_max > 0.0, "R_max must be positive");
  agg.validate();
  Curve c;
  c.x = uniform(0.0, R_max, points);
  for (double R : c.x) c.value.push_back(p_of_R(R, agg));
  return c;
}

FeasibilityReport evaluate(const AggregateConstants& agg, double h0, double xi, double c3) {
  FeasibilityReport rep;
  rep.R_star = r_star(agg);
  rep.p_at_R_star = p_of_R(rep.R_star, agg);
  rep.h_at_zero = h0;
  rep.temp11 = check_resq1(xi, c3);
  rep.temp12 = condition_temp12(agg, h0);
  if (rep.temp12.holds) {
    rep.bounds = r_bounds(agg, h0);
    rep.T_star_at_R_star = t_star(rep.R_star, agg, 1.0 / h0);
  }
  return rep;
}

}  // namespace monoperiod::feasibility
