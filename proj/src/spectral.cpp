#include "monoperiod/spectral.hpp"

#include <gsl/gsl_integration.h>

#include <cmath>
#include <memory>
#include <numbers>
#include <stdexcept>
#include <utility>

namespace monoperiod::spectral {

namespace {

constexpr int kSupSamples = 2048;

struct GlTableDeleter {
  void operator()(gsl_integration_glfixed_table* t) const {
    gsl_integration_glfixed_table_free(t);
  }
};

// P_n(x) and P_n'(x) by the three-term recurrence, |x| < 1.
std::pair<double, double> legendre(int n, double x) {
  double p0 = 1.0, p1 = x;
  for (int k = 2; k <= n; ++k) {
    const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
    p0 = p1;
    p1 = p2;
  }
  return {p1, n * (x * p1 - p0) / (x * x - 1.0)};
}

// GSL tabulates only some sizes exactly; other sizes come from a loose
// iteration (node errors near 1e-11). Newton steps restore full precision.
std::pair<double, double> polished_node(int n, double x) {
  for (int it = 0; it < 3; ++it) {
    const auto [p, dp] = legendre(n, x);
    x -= p / dp;
  }
  const double dp = legendre(n, x).second;
  return {x, 2.0 / ((1.0 - x * x) * dp * dp)};
}

}  // namespace

void Geometry1D::validate() const {
  if (!(std::isfinite(L) && L > 0.0))
    throw std::invalid_argument("interval length L must be positive");
}

OperatorCoefficients operator_coefficients(const ionic::DerivedParameters& d) {
  return {d.sigma_hat(), d.linear_rate()};
}

int minimum_quadrature_nodes(int m) { return 4 * (m + 1) + 12; }

SpectralBasis::SpectralBasis(const Geometry1D& geometry, int m,
                             const OperatorCoefficients& op, int n_quad)
    : geometry_(geometry), op_(op), m_(m) {
  geometry_.validate();
  if (m < 0) throw std::invalid_argument("truncation index m must be >= 0");
  if (n_quad < minimum_quadrature_nodes(m))
    throw std::invalid_argument(
        "n_quad too small to integrate quartic products of the highest mode");
  if (!(op.sigma_hat > 0.0) || !std::isfinite(op.reaction))
    throw std::invalid_argument("operator needs sigma_hat > 0 and a finite reaction term");

  const double L = geometry_.L;
  const double k = std::numbers::pi / L;
  lambdas_.resize(m + 1);
  for (int i = 0; i <= m; ++i) lambdas_(i) = op.reaction + op.sigma_hat * (i * k) * (i * k);

  std::unique_ptr<gsl_integration_glfixed_table, GlTableDeleter> table(
      gsl_integration_glfixed_table_alloc(static_cast<size_t>(n_quad)));
  if (!table) throw std::runtime_error("Gauss-Legendre table allocation failed");
  nodes_.resize(n_quad);
  weights_.resize(n_quad);
  for (int q = 0; q < n_quad; ++q) {
    double xq = 0.0, wq = 0.0;
    gsl_integration_glfixed_point(-1.0, 1.0, static_cast<size_t>(q), &xq, &wq, table.get());
    const auto [x, w] = polished_node(n_quad, xq);
    nodes_(q) = 0.5 * L * (x + 1.0);
    weights_(q) = 0.5 * L * w;
  }

  psi_nodes_.resize(n_quad, m + 1);
  dpsi_nodes_.resize(n_quad, m + 1);
  for (int j = 0; j <= m; ++j)
    for (int q = 0; q < n_quad; ++q) {
      psi_nodes_(q, j) = psi(j, nodes_(q));
      dpsi_nodes_(q, j) = dpsi(j, nodes_(q));
    }

  trace_.resize(m + 1);
  const double amp = std::sqrt(2.0 / L);
  trace_(0) = 1.0 / std::sqrt(L);
  for (int i = 1; i <= m; ++i) trace_(i) = (i % 2 == 0) ? amp : -amp;
}

double SpectralBasis::psi(int i, double x) const {
  const double L = geometry_.L;
  if (i == 0) return 1.0 / std::sqrt(L);
  return std::sqrt(2.0 / L) * std::cos(i * std::numbers::pi * x / L);
}

double SpectralBasis::dpsi(int i, double x) const {
  if (i == 0) return 0.0;
  const double L = geometry_.L;
  const double k = i * std::numbers::pi / L;
  return -std::sqrt(2.0 / L) * k * std::sin(k * x);
}

SpectralBasis build_basis(const Geometry1D& geometry, int m,
                          const ionic::DerivedParameters& d, int n_quad) {
  if (n_quad == 0) n_quad = minimum_quadrature_nodes(m);
  return SpectralBasis(geometry, m, operator_coefficients(d), n_quad);
}

Stimulus::Stimulus(StimulusKind kind, double period, double offset, double amplitude,
                   double center, double width, double phi)
    : kind_(kind),
      period_(period),
      offset_(offset),
      amplitude_(amplitude),
      center_(center),
      width_(width),
      phi_(phi) {
  if (!(std::isfinite(period) && period > 0.0))
    throw std::invalid_argument("stimulus period must be positive");
  if (!std::isfinite(offset) || !std::isfinite(amplitude) || !std::isfinite(phi) ||
      !std::isfinite(center))
    throw std::invalid_argument("stimulus parameters must be finite");
  if (kind == StimulusKind::pulse_train && !(width > 0.0))
    throw std::invalid_argument("pulse width must be positive");

  double s = 0.0;
  for (int k = 0; k < kSupSamples; ++k)
    s = std::max(s, std::abs((*this)(period * k / kSupSamples)));
  if (kind == StimulusKind::pulse_train) s = std::max(s, std::abs((*this)(center)));
  sup_ = s;
}

Stimulus Stimulus::constant(double period, double level, double phi) {
  return {StimulusKind::constant, period, level, 0.0, 0.0, 0.0, phi};
}

Stimulus Stimulus::sinusoid(double period, double offset, double amplitude, double phi) {
  return {StimulusKind::sinusoid, period, offset, amplitude, 0.0, 0.0, phi};
}

Stimulus Stimulus::pulse_train(double period, double offset, double amplitude,
                               double center, double width, double phi) {
  return {StimulusKind::pulse_train, period, offset, amplitude, center, width, phi};
}

double Stimulus::operator()(double t) const {
  switch (kind_) {
    case StimulusKind::constant:
      return offset_;
    case StimulusKind::sinusoid: {
      const double phase = std::fmod(t, period_) / period_;
      return offset_ + amplitude_ * std::sin(2.0 * std::numbers::pi * phase);
    }
    case StimulusKind::pulse_train: {
      // distance to the pulse centre folded into [-T/2, T/2)
      double r = std::fmod(t - center_, period_);
      if (r < 0.0) r += period_;
      if (r >= 0.5 * period_) r -= period_;
      const int images = static_cast<int>(std::ceil(10.0 * width_ / period_)) + 1;
      double sum = 0.0;
      for (int k = -images; k <= images; ++k) {
        const double z = (r - k * period_) / width_;
        sum += std::exp(-0.5 * z * z);
      }
      return offset_ + amplitude_ * sum;
    }
  }
  return 0.0;
}

Eigen::VectorXd trace_functional(const SpectralBasis& basis, const Stimulus& stim) {
  return stim.phi() * basis.trace_values();
}

Eigen::VectorXd project_nonlinearity(const SpectralBasis& basis,
                                     const Eigen::Ref<const Eigen::VectorXd>& u,
                                     const Eigen::Ref<const Eigen::VectorXd>& w,
                                     const ionic::DerivedParameters& d) {
  if (u.size() != basis.size() || w.size() != basis.size())
    throw std::invalid_argument("coefficient vectors must have length m+1");
  const Eigen::MatrixXd& P = basis.psi_at_nodes();
  const Eigen::VectorXd uf = P * u;
  const Eigen::VectorXd wf = P * w;
  Eigen::VectorXd g(uf.size());
  for (Eigen::Index q = 0; q < uf.size(); ++q)
    g(q) = basis.quad_weights()(q) * ionic::f_transformed(uf(q), wf(q), d);
  return P.transpose() * g;
}

Norms norms(const SpectralBasis& basis, const Eigen::Ref<const Eigen::VectorXd>& u,
            const Eigen::Ref<const Eigen::VectorXd>& w) {
  if (u.size() != basis.size() || w.size() != basis.size())
    throw std::invalid_argument("coefficient vectors must have length m+1");
  Norms n;
  n.u_H = u.norm();
  n.u_V = std::sqrt(basis.lambdas().dot(u.cwiseAbs2()));
  n.w_H = w.norm();
  return n;
}

Eigen::VectorXd evaluate_field(const SpectralBasis& basis,
                               const Eigen::Ref<const Eigen::VectorXd>& coeffs,
                               std::span<const double> x) {
  if (coeffs.size() != basis.size())
    throw std::invalid_argument("coefficient vector must have length m+1");
  const double L = basis.geometry().L;
  Eigen::VectorXd out(static_cast<Eigen::Index>(x.size()));
  for (std::size_t k = 0; k < x.size(); ++k) {
    if (!(x[k] >= 0.0 && x[k] <= L)) throw std::out_of_range("x outside [0, L]");
    double s = 0.0;
    for (int i = 0; i < basis.size(); ++i) s += coeffs(i) * basis.psi(i, x[k]);
    out(static_cast<Eigen::Index>(k)) = s;
  }
  return out;
}

Eigen::VectorXd project_function(const SpectralBasis& basis,
                                 const std::function<double(double)>& g) {
  const Eigen::VectorXd& x = basis.quad_nodes();
  Eigen::VectorXd gw(x.size());
  for (Eigen::Index q = 0; q < x.size(); ++q) gw(q) = basis.quad_weights()(q) * g(x(q));
  return basis.psi_at_nodes().transpose() * gw;
}

}  // namespace monoperiod::spectral
