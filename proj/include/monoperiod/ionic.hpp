#pragma once

// Rogers-McCulloch ionic kinetics, the (u, w, tau) change of variables and
// the growth-bound constants used by the existence estimates.
//
// Raw quantities (hat-u, hat-w, physical time t) only appear in f_ion_raw,
// g_raw and rescale_period. Every solver works in transformed units:
//   hat-u = u + u_res,  hat-w = xi * w,  t = epsilon * tau.

namespace monoperiod::ionic {

struct PhysiologicalParameters {
  double C_m = 0.0;    ///< membrane capacitance per unit area
  double chi = 0.0;    ///< membrane area per unit volume
  double c1 = 0.0;
  double c2 = 0.0;
  double c3 = 1.0;
  double b = 0.0;
  double a = 0.0;      ///< threshold fraction, 0 < a < 1
  double u_res = 0.0;  ///< resting potential
  double u_peak = 0.0; ///< peak potential
  double sigma = 0.0;  ///< scalar conductivity

  double C() const { return chi * C_m; }

  /// Throws std::invalid_argument naming the first violated invariant.
  void validate() const;
};

struct RescalingParameters {
  double epsilon = 0.032;
  double xi = 3.75;

  void validate() const;
};

/// Everything the transformed model needs, flattened so that every
/// reaction term reads from one place.
struct DerivedParameters {
  // copied inputs
  double C = 1.0;
  double epsilon = 1.0;
  double xi = 1.0;
  double b = 0.0;
  double c3 = 1.0;
  double sigma = 0.0;
  double u_res = 0.0;
  double u_peak = 0.0;

  double u_amp = 0.0;
  double u_th = 0.0;
  double u_tr = 0.0;
  double u_pr = 0.0;
  double a1 = 0.0;
  double a2 = 0.0;
  double c4 = 0.0;

  // growth bounds |f1| <= l1 + l2|u|^3 and the L^{4/3} / L^2 estimates
  double l1 = 0.0;
  double l2 = 0.0;
  double A1 = 0.0;
  double A2 = 0.0;
  double A3 = 0.0;
  double B1 = 0.0;
  double B2 = 0.0;
  double B3 = 0.0;
  static constexpr int p_exponent = 4;

  /// Zeroth-order coefficient of the elliptic operator, epsilon*c4/C.
  double linear_rate() const { return epsilon * c4 / C; }
  /// Rescaled conductivity epsilon*sigma/C.
  double sigma_hat() const { return epsilon * sigma / C; }
  /// Decay rate of the recovery variable, b*c3*epsilon*xi.
  double recovery_rate() const { return b * c3 * epsilon * xi; }
};

DerivedParameters derive_parameters(const PhysiologicalParameters& phys,
                                    const RescalingParameters& resc);

/// a1 (u-u_res)(u-u_th)(u-u_peak) + a2 (u-u_res) w, raw units.
double f_ion_raw(double u_hat, double w_hat, const DerivedParameters& d);

/// b (u - u_res - c3 w), raw units.
double g_raw(double u_hat, double w_hat, const DerivedParameters& d);

/// Cubic part of the transformed current,
/// (eps/C)(a1 u^3 + xi a2 u w - a1 (u_pr + u_tr) u^2).
double f_transformed(double u, double w, const DerivedParameters& d);

/// Full transformed current (eps c4/C) u + f_transformed(u, w).
double f_hat(double u, double w, const DerivedParameters& d);

/// eps b (u - xi c3 w).
double g_hat(double u, double w, const DerivedParameters& d);

// Split f = f1(u) + f2(u) * (xi w) and g_hat = g1(u) + g2 w.
double f1_part(double u, const DerivedParameters& d);
double f2_part(double u, const DerivedParameters& d);
double g1_part(double u, const DerivedParameters& d);

/// Period of the transformed stimulus: T = T_tilde / epsilon.
double rescale_period(double T_tilde, const RescalingParameters& resc);
/// Inverse of rescale_period.
double physical_period(double T, const RescalingParameters& resc);

}  // namespace monoperiod::ionic
