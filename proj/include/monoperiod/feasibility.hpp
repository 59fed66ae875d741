#pragma once

#include <optional>
#include <vector>

namespace monoperiod::feasibility {

/// Raw ingredients of the aggregated constants.
struct RawConstants {
  double A1 = 0.0;
  double A2 = 0.0;
  double A3 = 0.0;
  double K1 = 0.0;            ///< L^{p'} -> V* embedding constant
  double K2 = 0.0;            ///< V -> L^p embedding constant
  double M_over_alpha = 0.0;  ///< continuity / coercivity ratio of the bilinear form
  double s_hat = 0.0;         ///< sup |s|
  double trace_norm = 0.0;    ///< norm of the trace operator
  double phi_norm = 0.0;      ///< ||phi||_{L^2(Gamma_1)}
  double omega_measure = 0.0; ///< |Omega|
};

enum class Provenance { direct, derived };

/// p(R) = kappa R / (beta R^3 + gamma R^{3/2} + delta).
/// Invariants: kappa > 0, beta >= 0, gamma >= 0, delta > 0, beta + gamma > 0.
struct AggregateConstants {
  double kappa = 0.0;
  double beta = 0.0;
  double gamma = 0.0;
  double delta = 0.0;
  Provenance provenance = Provenance::direct;

  static AggregateConstants direct(double kappa, double beta, double gamma, double delta);
  /// kappa = sqrt2 / (2 (1 + M/alpha)), beta = A2 K1 K2, gamma = A3 K1,
  /// delta = A1 K1 |Omega|^{3/4} + s_hat N_T ||phi||.
  static AggregateConstants derived(const RawConstants& raw);

  /// Throws std::invalid_argument naming the violated invariant.
  void validate() const;
};

/// T / (1 - e^{-rate T}) with h(0) = 1/rate; rate = eps c4 / C.
double h_of_T(double T, double rate);
double h_of_T(double T, double c4, double epsilon, double C);
/// C / (eps c4).
double h_at_zero(double c4, double epsilon, double C);

double p_of_R(double R, const AggregateConstants& agg);

/// Maximizer of p. Written as (4 delta / (sqrt(gamma^2 + 32 beta delta) + gamma))^{2/3},
/// which equals the textbook form for beta > 0 and reduces to (2 delta / gamma)^{2/3}
/// at beta = 0 without cancellation.
double r_star(const AggregateConstants& agg);

struct ConditionResult {
  bool holds = false;
  double lhs = 0.0;
  double rhs = 0.0;
  /// rhs - lhs for "<" and "<=" conditions.
  double margin = 0.0;
};

/// h(0) < p(R*), strict.
ConditionResult condition_temp12(const AggregateConstants& agg, double h0);
ConditionResult condition_temp12(const AggregateConstants& agg, double C, double epsilon,
                                 double c4);

/// xi c3 >= sqrt2.
ConditionResult check_resq1(double xi, double c3);

struct RBounds {
  double R1 = 0.0;
  double R2 = 0.0;
};

/// Both roots of p(R) = h0. Requires h0 <= p(R*) (tangency gives R1 = R2 = R*);
/// throws std::domain_error otherwise.
RBounds r_bounds(const AggregateConstants& agg, double h0);

/// Unique T >= 0 with h(T) = p(R). T* = 0 when p(R) equals 1/rate to within
/// 1e-9 relative; throws std::domain_error when p(R) is below it.
double t_star(double R, const AggregateConstants& agg, double rate);

/// Aggregated form h(T) <= p(R).
ConditionResult check_resq(double R, double T, const AggregateConstants& agg, double rate);

/// Unaggregated form
///   T / (1 - e^{-r T}) <= sqrt2 R / (2 (1 + M/alpha) (M1(R) + s_hat N_T ||phi||)),
///   M1(R) = K1 (A1 |Omega|^{3/4} + A2 K2 R^3 + A3 R^{3/2}).
/// r = eps c4 / C unless literal_exponent, which uses c4 alone.
ConditionResult check_resq_raw(double R, double T, const RawConstants& raw, double c4,
                               double epsilon, double C, bool literal_exponent = false);

/// Model quantities entering the (a1, a2) admissibility analysis at beta = 0.
struct RegionParameters {
  double xi = 0.0;
  double c3 = 1.0;
  double K1 = 0.0;
  double kappa = 0.0;
  double epsilon = 0.0;
  double C = 0.0;
  double u_tr = 0.0;
  double u_pr = 0.0;
  double omega_measure = 0.0;
  double B = 0.0;  ///< s_hat N_T ||phi||

  /// |Omega|^{3/4} ((u_tr + u_pr)/3 + 2 u_tr u_pr / 3).
  double A() const;
  void validate() const;
};

/// h(0) < kappa 4^{1/3} / (3 gamma^{2/3} delta^{1/3}) with c4 = a1 u_tr u_pr,
/// gamma = xi a2 K1 / 3, delta = (A eps K1 / C) a1 + B.
ConditionResult check_temp14(double a1, double a2, const RegionParameters& rp);

/// Largest admissible a2 for a given a1:
///   a2 < coeff (eps u_tr u_pr kappa / C)^{3/2} a1^{3/2} / ((A eps K1 / C) a1 + B)^{1/2}.
/// coeff = 2 / (sqrt3 xi K1), which is what temp14 rearranges to; literal = true
/// uses the printed 2 sqrt2 / (sqrt3 c3 K1).
double a2_bound(double a1, const RegionParameters& rp, bool literal = false);

struct RegionGrid {
  std::vector<double> a1;
  std::vector<double> a2;
  std::vector<double> bound;  ///< a2_bound per a1
  /// member[i][j]: a2[j] < bound[i].
  std::vector<std::vector<bool>> member;
};

/// a1 on a uniform grid over [a1_min, a1_max]; a2 on a uniform grid over
/// [0, a2_max].
RegionGrid region_sweep(const RegionParameters& rp, double a1_min, double a1_max, int a1_count,
                        double a2_max, int a2_count, bool literal = false);

struct Curve {
  std::vector<double> x;
  std::vector<double> value;
};

/// h on a uniform grid of `points` nodes over [0, T_max].
Curve h_curve(double rate, double T_max, int points);
/// p on a uniform grid of `points` nodes over [0, R_max].
Curve p_curve(const AggregateConstants& agg, double R_max, int points);

struct FeasibilityReport {
  double R_star = 0.0;
  double p_at_R_star = 0.0;
  double h_at_zero = 0.0;
  ConditionResult temp11;
  ConditionResult temp12;
  std::optional<RBounds> bounds;  ///< present iff temp12 holds
  /// T* at R*, present iff temp12 holds.
  std::optional<double> T_star_at_R_star;
};

FeasibilityReport evaluate(const AggregateConstants& agg, double h0, double xi, double c3);

}  // namespace monoperiod::feasibility
