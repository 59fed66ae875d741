#include "monoperiod/ionic.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace monoperiod::ionic {

namespace {

void require(bool ok, const char* what) {
  if (!ok) throw std::invalid_argument(what);
}

bool finite_all(std::initializer_list<double> xs) {
  for (double x : xs)
    if (!std::isfinite(x)) return false;
  return true;
}

}  // namespace

void PhysiologicalParameters::validate() const {
  require(finite_all({C_m, chi, c1, c2, c3, b, a, u_res, u_peak, sigma}),
          "physiological parameters must be finite");
  require(u_peak > u_res, "u_peak must exceed u_res");
  require(a > 0.0 && a < 1.0, "threshold fraction a must lie in (0, 1)");
  require(C_m > 0.0 && chi > 0.0, "capacitance C = chi*C_m must be positive");
  require(c1 > 0.0 && c2 > 0.0 && c3 > 0.0 && b > 0.0,
          "rate constants c1, c2, c3, b must be positive");
  require(sigma > 0.0, "conductivity sigma must be positive");
}

void RescalingParameters::validate() const {
  require(std::isfinite(epsilon) && epsilon > 0.0, "epsilon must be positive");
  require(std::isfinite(xi) && xi > 0.0, "xi must be positive");
}

DerivedParameters derive_parameters(const PhysiologicalParameters& phys,
                                    const RescalingParameters& resc) {
  phys.validate();
  resc.validate();

  DerivedParameters d;
  d.C = phys.C();
  d.epsilon = resc.epsilon;
  d.xi = resc.xi;
  d.b = phys.b;
  d.c3 = phys.c3;
  d.sigma = phys.sigma;
  d.u_res = phys.u_res;
  d.u_peak = phys.u_peak;

  d.u_amp = phys.u_peak - phys.u_res;
  if (d.u_amp == 0.0) throw std::invalid_argument("u_amp = 0: a1, a2 undefined");
  d.u_th = phys.u_res + phys.a * d.u_amp;
  d.u_tr = d.u_th - phys.u_res;
  d.u_pr = phys.u_peak - phys.u_res;
  d.a1 = phys.c1 / (d.u_amp * d.u_amp);
  d.a2 = phys.c2 / d.u_amp;
  d.c4 = d.a1 * d.u_tr * d.u_pr;

  const double scale = d.a1 * d.epsilon / d.C;
  const double sum = d.u_tr + d.u_pr;
  const double prod = d.u_tr * d.u_pr;
  d.l1 = scale * (sum / 3.0 + 2.0 * prod / 3.0);
  d.l2 = scale * (1.0 + 2.0 * sum / 3.0 + prod / 3.0);

  d.A1 = d.l1;
  d.A2 = d.l2 + 2.0 * d.xi * d.a2 / 3.0;
  d.A3 = d.xi * d.a2 / 3.0;
  d.B1 = d.epsilon * d.b / 2.0;
  d.B2 = d.epsilon * d.b / 2.0;
  d.B3 = d.xi * d.c3;
  return d;
}

double f_ion_raw(double u_hat, double w_hat, const DerivedParameters& d) {
  const double v = u_hat - d.u_res;
  return d.a1 * v * (u_hat - d.u_th) * (u_hat - d.u_peak) + d.a2 * v * w_hat;
}

double g_raw(double u_hat, double w_hat, const DerivedParameters& d) {
  return d.b * (u_hat - d.u_res - d.c3 * w_hat);
}

double f_transformed(double u, double w, const DerivedParameters& d) {
  const double u2 = u * u;
  return (d.epsilon / d.C) *
         (d.a1 * u2 * u + d.xi * d.a2 * u * w - d.a1 * (d.u_pr + d.u_tr) * u2);
}

double f_hat(double u, double w, const DerivedParameters& d) {
  return d.linear_rate() * u + f_transformed(u, w, d);
}

double g_hat(double u, double w, const DerivedParameters& d) {
  return d.epsilon * d.b * (u - d.xi * d.c3 * w);
}

double f1_part(double u, const DerivedParameters& d) {
  return (d.epsilon / d.C) * d.a1 * u * u * (u - (d.u_pr + d.u_tr));
}

double f2_part(double u, const DerivedParameters& d) {
  return (d.epsilon / d.C) * d.a2 * u;
}

double g1_part(double u, const DerivedParameters& d) { return d.epsilon * d.b * u; }

double rescale_period(double T_tilde, const RescalingParameters& resc) {
  resc.validate();
  if (!(T_tilde > 0.0)) throw std::invalid_argument("period must be positive");
  return T_tilde / resc.epsilon;
}

double physical_period(double T, const RescalingParameters& resc) {
  resc.validate();
  if (!(T > 0.0)) throw std::invalid_argument("period must be positive");
  return T * resc.epsilon;
}

}  // namespace monoperiod::ionic
