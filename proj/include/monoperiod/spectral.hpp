#pragma once

#include <Eigen/Dense>

#include <functional>
#include <span>

#include "monoperiod/ionic.hpp"

namespace monoperiod::spectral {

/// Omega = (0, L). The insulated epicardium sits at x = 0, the stimulated
/// endocardium at x = L.
struct Geometry1D {
  double L = 1.0;

  double omega_measure() const { return L; }
  void validate() const;
};

/// A v = -(sigma_hat v')' + reaction v with homogeneous Neumann conditions.
struct OperatorCoefficients {
  double sigma_hat = 0.0;
  double reaction = 0.0;
};

/// sigma_hat = eps*sigma/C, reaction = eps*c4/C.
OperatorCoefficients operator_coefficients(const ionic::DerivedParameters& d);

/// Smallest Gauss-Legendre rule accepted for truncation index m. Products of
/// four basis functions contain cosines up to frequency 4m*pi/L; 4(m+1) nodes
/// leave errors near 1e-6 for small m, the extra 12 bring them below 1e-13.
int minimum_quadrature_nodes(int m);

/// First m+1 Neumann eigenpairs of A on the interval:
///   psi_0 = 1/sqrt(L), psi_i = sqrt(2/L) cos(i pi x / L),
///   lambda_i = reaction + sigma_hat (i pi / L)^2.
class SpectralBasis {
 public:
  SpectralBasis(const Geometry1D& geometry, int m, const OperatorCoefficients& op,
                int n_quad);

  int m() const { return m_; }
  int size() const { return m_ + 1; }
  const Geometry1D& geometry() const { return geometry_; }
  const OperatorCoefficients& coefficients() const { return op_; }

  const Eigen::VectorXd& lambdas() const { return lambdas_; }
  double lambda(int i) const { return lambdas_(i); }

  double psi(int i, double x) const;
  double dpsi(int i, double x) const;

  const Eigen::VectorXd& quad_nodes() const { return nodes_; }
  const Eigen::VectorXd& quad_weights() const { return weights_; }
  /// psi_j(x_q), one row per quadrature node.
  const Eigen::MatrixXd& psi_at_nodes() const { return psi_nodes_; }
  const Eigen::MatrixXd& dpsi_at_nodes() const { return dpsi_nodes_; }
  /// psi_i(L).
  const Eigen::VectorXd& trace_values() const { return trace_; }

 private:
  Geometry1D geometry_;
  OperatorCoefficients op_;
  int m_;
  Eigen::VectorXd lambdas_;
  Eigen::VectorXd nodes_;
  Eigen::VectorXd weights_;
  Eigen::MatrixXd psi_nodes_;
  Eigen::MatrixXd dpsi_nodes_;
  Eigen::VectorXd trace_;
};

/// n_quad = 0 selects minimum_quadrature_nodes(m).
SpectralBasis build_basis(const Geometry1D& geometry, int m,
                          const ionic::DerivedParameters& d, int n_quad = 0);

enum class StimulusKind { constant, sinusoid, pulse_train };

/// T-periodic boundary current s(t) with spatial density phi on Gamma_1.
///
///   constant:    s(t) = offset
///   sinusoid:    s(t) = offset + amplitude sin(2 pi t / T)
///   pulse_train: s(t) = offset + amplitude sum_k exp(-(t - center - kT)^2 / (2 width^2))
class Stimulus {
 public:
  static Stimulus constant(double period, double level, double phi);
  static Stimulus sinusoid(double period, double offset, double amplitude, double phi);
  static Stimulus pulse_train(double period, double offset, double amplitude,
                              double center, double width, double phi);

  double operator()(double t) const;

  StimulusKind kind() const { return kind_; }
  double period() const { return period_; }
  double offset() const { return offset_; }
  double amplitude() const { return amplitude_; }
  double center() const { return center_; }
  double width() const { return width_; }
  double phi() const { return phi_; }
  /// sup over one period of |s|, from 2048 samples per period.
  double sup() const { return sup_; }

  bool operator==(const Stimulus&) const = default;

 private:
  Stimulus(StimulusKind kind, double period, double offset, double amplitude,
           double center, double width, double phi);

  StimulusKind kind_;
  double period_;
  double offset_;
  double amplitude_;
  double center_;
  double width_;
  double phi_;
  double sup_ = 0.0;
};

/// <psi_i, phi*> = phi * psi_i(L).
Eigen::VectorXd trace_functional(const SpectralBasis& basis, const Stimulus& stim);

/// int_Omega f(u_m, w_m) psi_i dx by the basis quadrature.
Eigen::VectorXd project_nonlinearity(const SpectralBasis& basis,
                                     const Eigen::Ref<const Eigen::VectorXd>& u,
                                     const Eigen::Ref<const Eigen::VectorXd>& w,
                                     const ionic::DerivedParameters& d);

struct Norms {
  double u_H = 0.0;
  double u_V = 0.0;
  double w_H = 0.0;
};

/// ||u||_H, ||u||_V = sqrt(sum lambda_i u_i^2), ||w||_H from coefficients.
Norms norms(const SpectralBasis& basis, const Eigen::Ref<const Eigen::VectorXd>& u,
            const Eigen::Ref<const Eigen::VectorXd>& w);

/// sum_i coeffs_i psi_i(x) at each x; throws std::out_of_range outside [0, L].
Eigen::VectorXd evaluate_field(const SpectralBasis& basis,
                               const Eigen::Ref<const Eigen::VectorXd>& coeffs,
                               std::span<const double> x);

/// (g, psi_i) by the basis quadrature.
Eigen::VectorXd project_function(const SpectralBasis& basis,
                                 const std::function<double(double)>& g);

}  // namespace monoperiod::spectral
