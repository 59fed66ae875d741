#include "doctest.h"

#include <numbers>
#include <random>

#include "fixtures.hpp"
#include "monoperiod/spectral.hpp"
#include "oracles.hpp"

using namespace monoperiod;

namespace {

// Parameters whose transformed current is cubic * u^3 + mixed * u w.
ionic::DerivedParameters monomial(double cubic, double mixed) {
  ionic::DerivedParameters d;
  d.epsilon = 1.0;
  d.C = 1.0;
  d.xi = 1.0;
  d.a1 = cubic;
  d.a2 = mixed;
  d.u_tr = 0.0;
  d.u_pr = 0.0;
  d.c4 = 1.0;
  d.sigma = 1.0;
  return d;
}

double cubic_projection_oracle(const Eigen::VectorXd& c, int i, double L) {
  const int n = static_cast<int>(c.size());
  double s = 0.0;
  for (int j = 0; j < n; ++j)
    for (int k = 0; k < n; ++k)
      for (int l = 0; l < n; ++l)
        s += c(j) * c(k) * c(l) * oracles::basis_product_integral({i, j, k, l}, L);
  return s;
}

double mixed_projection_oracle(const Eigen::VectorXd& a, const Eigen::VectorXd& b, int i,
                               double L) {
  const int n = static_cast<int>(a.size());
  double s = 0.0;
  for (int j = 0; j < n; ++j)
    for (int k = 0; k < n; ++k) s += a(j) * b(k) * oracles::basis_product_integral({i, j, k}, L);
  return s;
}

}  // namespace

TEST_CASE("eigenvalues follow the closed form and a finite-difference oracle") {
  const auto d = fixtures::derived();
  const double L = 1.7;
  const auto basis = spectral::build_basis({L}, 6, d);
  const Eigen::VectorXd fd =
      oracles::neumann_fd_eigenvalues(d.sigma_hat(), d.linear_rate(), L, 2000, 7);
  for (int i = 0; i <= 6; ++i) {
    const double k = i * std::numbers::pi / L;
    CHECK(basis.lambda(i) == doctest::Approx(d.linear_rate() + d.sigma_hat() * k * k).epsilon(1e-14));
    CHECK(basis.lambda(i) == doctest::Approx(fd(i)).epsilon(1e-5));
  }
}

TEST_CASE("quadrature reproduces orthonormality") {
  const auto d = fixtures::derived();
  for (int m : {0, 1, 4, 8, 16, 32}) {
    const auto basis = spectral::build_basis({2.0}, m, d);
    const Eigen::MatrixXd& P = basis.psi_at_nodes();
    const Eigen::MatrixXd G = P.transpose() * basis.quad_weights().asDiagonal() * P;
    CHECK((G - Eigen::MatrixXd::Identity(m + 1, m + 1)).cwiseAbs().maxCoeff() < 1e-13);
  }
}

TEST_CASE("quadrature below the minimum node count is refused") {
  const auto d = fixtures::derived();
  CHECK(spectral::minimum_quadrature_nodes(4) == 32);
  CHECK_THROWS_AS(spectral::SpectralBasis({1.0}, 4, spectral::operator_coefficients(d), 31),
                  std::invalid_argument);
  CHECK_NOTHROW(spectral::SpectralBasis({1.0}, 4, spectral::operator_coefficients(d), 32));
  CHECK_THROWS_AS(spectral::SpectralBasis({1.0}, -1, spectral::operator_coefficients(d), 32),
                  std::invalid_argument);
  CHECK_THROWS_AS(spectral::SpectralBasis({0.0}, 2, spectral::operator_coefficients(d), 32),
                  std::invalid_argument);
}

TEST_CASE("projected cubic matches symbolic cosine integrals") {
  std::mt19937 rng(11);
  std::uniform_real_distribution<double> U(-1.0, 1.0);
  const double L = 1.3;
  const auto d = monomial(1.0, 0.0);  // f = u^3
  for (int m = 0; m <= 4; ++m) {
    const auto basis = spectral::build_basis({L}, m, d);
    Eigen::VectorXd u(m + 1);
    for (int i = 0; i <= m; ++i) u(i) = U(rng);
    const Eigen::VectorXd proj =
        spectral::project_nonlinearity(basis, u, Eigen::VectorXd::Zero(m + 1), d);
    for (int i = 0; i <= m; ++i)
      CHECK(std::abs(proj(i) - cubic_projection_oracle(u, i, L)) < 1e-12);
  }
}

TEST_CASE("projected mixed product u w matches symbolic integrals") {
  std::mt19937 rng(12);
  std::uniform_real_distribution<double> U(-1.0, 1.0);
  const double L = 0.9;
  const auto d = monomial(0.0, 1.0);  // f = u w
  for (int m = 0; m <= 4; ++m) {
    const auto basis = spectral::build_basis({L}, m, d);
    Eigen::VectorXd u(m + 1), w(m + 1);
    for (int i = 0; i <= m; ++i) {
      u(i) = U(rng);
      w(i) = U(rng);
    }
    const Eigen::VectorXd proj = spectral::project_nonlinearity(basis, u, w, d);
    for (int i = 0; i <= m; ++i)
      CHECK(std::abs(proj(i) - mixed_projection_oracle(u, w, i, L)) < 1e-12);
  }
}

TEST_CASE("symbolic integral oracle sanity") {
  CHECK(oracles::cosine_product_integral({0}, 2.0) == 2.0);
  CHECK(oracles::cosine_product_integral({3, 3}, 2.0) == 1.0);
  CHECK(oracles::cosine_product_integral({1, 2}, 2.0) == 0.0);
  CHECK(oracles::cosine_product_integral({1, 1, 2}, 1.0) == doctest::Approx(0.25));
}

TEST_CASE("trace values alternate in sign") {
  const auto basis = spectral::build_basis({4.0}, 3, fixtures::derived());
  CHECK(basis.trace_values()(0) == doctest::Approx(0.5));
  CHECK(basis.trace_values()(1) == doctest::Approx(-std::sqrt(0.5)));
  CHECK(basis.trace_values()(2) == doctest::Approx(std::sqrt(0.5)));
  for (int i = 0; i <= 3; ++i) CHECK(basis.trace_values()(i) == doctest::Approx(basis.psi(i, 4.0)));
  const auto stim = spectral::Stimulus::constant(1.0, 1.0, 2.5);
  CHECK(spectral::trace_functional(basis, stim)(1) == doctest::Approx(-2.5 * std::sqrt(0.5)));
}

TEST_CASE("field evaluation and projection are inverse on the span") {
  const double L = 2.0;
  const auto basis = spectral::build_basis({L}, 5, fixtures::derived());
  const Eigen::VectorXd c =
      spectral::project_function(basis, [&](double x) { return std::cos(2.0 * std::numbers::pi * x / L); });
  for (int i = 0; i <= 5; ++i) CHECK(c(i) == doctest::Approx(i == 2 ? std::sqrt(L / 2.0) : 0.0).epsilon(1e-12));

  const std::vector<double> xs{0.0, 0.3, 1.1, 2.0};
  const Eigen::VectorXd f = spectral::evaluate_field(basis, c, xs);
  for (std::size_t k = 0; k < xs.size(); ++k)
    CHECK(f(static_cast<Eigen::Index>(k)) == doctest::Approx(std::cos(std::numbers::pi * xs[k])).epsilon(1e-12));
  const std::vector<double> outside{2.5};
  CHECK_THROWS_AS(spectral::evaluate_field(basis, c, outside), std::out_of_range);
}

TEST_CASE("norms from coefficients") {
  const auto basis = spectral::build_basis({1.0}, 2, fixtures::derived());
  Eigen::VectorXd u(3), w(3);
  u << 1.0, 0.0, 2.0;
  w << 0.0, 3.0, 4.0;
  const auto n = spectral::norms(basis, u, w);
  CHECK(n.u_H == doctest::Approx(std::sqrt(5.0)));
  CHECK(n.w_H == doctest::Approx(5.0));
  CHECK(n.u_V == doctest::Approx(std::sqrt(basis.lambda(0) + 4.0 * basis.lambda(2))));
}

TEST_CASE("stimulus shapes") {
  SUBCASE("sinusoid is periodic") {
    const auto s = spectral::Stimulus::sinusoid(2.0, 0.5, 0.25, 1.0);
    CHECK(s(0.5) == doctest::Approx(0.75));
    CHECK(s(2.5) == doctest::Approx(0.75));
    CHECK(s(1.5) == doctest::Approx(0.25));
    CHECK(s.sup() == doctest::Approx(0.75));
  }
  SUBCASE("constant") {
    const auto s = spectral::Stimulus::constant(1.0, -2.0, 1.0);
    CHECK(s(0.3) == -2.0);
    CHECK(s.sup() == 2.0);
  }
  SUBCASE("pulse train peaks at its centre") {
    const auto s = spectral::Stimulus::pulse_train(1.0, 0.0, 3.0, 0.25, 0.02, 1.0);
    CHECK(s(0.25) == doctest::Approx(3.0).epsilon(1e-12));
    CHECK(s(1.25) == doctest::Approx(3.0).epsilon(1e-12));
    CHECK(s(0.75) < 1e-100);
    CHECK(s.sup() == doctest::Approx(3.0).epsilon(1e-12));
  }
  SUBCASE("invalid") {
    CHECK_THROWS_AS(spectral::Stimulus::constant(0.0, 1.0, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(spectral::Stimulus::pulse_train(1.0, 0.0, 1.0, 0.0, 0.0, 1.0),
                    std::invalid_argument);
  }
}
