#pragma once

// Shared model configurations for the test suites.

#include <cmath>

#include "monoperiod/feasibility.hpp"
#include "monoperiod/galerkin.hpp"
#include "monoperiod/ionic.hpp"
#include "monoperiod/spectral.hpp"

namespace fixtures {

using namespace monoperiod;

/// Rogers-McCulloch values with unit capacitance, rescaled with eps = 0.032,
/// xi = 3.75. Gives a1 = 1.875, a2 = 2.5e-4, eps c4 / C = 48, sigma_hat = 0.64.
inline ionic::PhysiologicalParameters physiology() {
  ionic::PhysiologicalParameters p;
  p.C_m = 1.0;
  p.chi = 1.0;
  p.c1 = 3000.0;
  p.c2 = 0.01;
  p.c3 = 1.0;
  p.b = 1.0;
  p.a = 0.5;
  p.u_res = 0.0;
  p.u_peak = 40.0;
  p.sigma = 20.0;
  return p;
}

inline ionic::DerivedParameters derived() {
  return ionic::derive_parameters(physiology(), ionic::RescalingParameters{});
}

/// Same operator, reaction switched off.
inline ionic::DerivedParameters linear_derived() {
  ionic::DerivedParameters d = derived();
  d.a1 = 0.0;
  d.a2 = 0.0;
  return d;
}

inline constexpr double kPeriod = 0.05;
inline constexpr double kLength = 1.0;

inline spectral::Stimulus sinusoid() {
  return spectral::Stimulus::sinusoid(kPeriod, 0.5, 0.5, 1.0);
}

inline galerkin::GalerkinSystem feasible_system(int m) {
  const auto d = derived();
  return {spectral::build_basis({kLength}, m, d), d, sinusoid()};
}

inline galerkin::GalerkinSystem linear_system(int m, double s0, double period = kPeriod) {
  const auto d = linear_derived();
  return {spectral::build_basis({kLength}, m, d), d,
          spectral::Stimulus::constant(period, s0, 1.0)};
}

/// Honest one-dimensional constants for the feasible system:
///   trace norm^2 = 1/(lambda_0 L) + 2/sqrt(lambda_0 sigma_hat),
///   K1 = K2 = (trace norm^2 / lambda_0)^{1/4} (sup-norm embedding on the
///   interval), M/alpha = 0 in the eigen-norm.
struct HonestConstants {
  double trace_norm;
  double K;
};

inline HonestConstants honest_constants(const ionic::DerivedParameters& d, double L) {
  const double lam0 = d.linear_rate();
  const double n2 = 1.0 / (lam0 * L) + 2.0 / std::sqrt(lam0 * d.sigma_hat());
  return {std::sqrt(n2), std::pow(n2 / lam0, 0.25)};
}

inline feasibility::RawConstants raw_constants(const ionic::DerivedParameters& d, double L,
                                               double s_hat, double phi) {
  const HonestConstants hc = honest_constants(d, L);
  feasibility::RawConstants raw;
  raw.A1 = d.A1;
  raw.A2 = d.A2;
  raw.A3 = d.A3;
  raw.K1 = hc.K;
  raw.K2 = hc.K;
  raw.M_over_alpha = 0.0;
  raw.s_hat = s_hat;
  raw.trace_norm = hc.trace_norm;
  raw.phi_norm = std::abs(phi);
  raw.omega_measure = L;
  return raw;
}

/// Reference aggregates with a well separated maximizer.
inline feasibility::AggregateConstants reference_aggregates(double kappa) {
  return feasibility::AggregateConstants::direct(kappa, 1e-4, 1.0, 1e-3);
}

}  // namespace fixtures
