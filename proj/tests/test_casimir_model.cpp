#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <cmath>

#include "ptdyn/casimir_model.hpp"

using namespace ptdyn;

namespace {

double herm_err(const FockOperator& h) { return (h.matrix() - h.matrix().adjoint()).norm(); }

}  // namespace

TEST_CASE("hamiltonian limits") {
  const Index dim = 20;
  SUBCASE("no modulation") {
    const CasimirParams p{1.3, 2.0, 0.0, 1.0, 2.0};
    for (double t : {0.0, 0.7, 3.1})
      CHECK((hamiltonian(p, t, dim).matrix() - 1.3 * shifted_number_op(dim).matrix()).norm() < 1e-14);
  }
  SUBCASE("t = 0") {
    const CasimirParams p{1.0, 2.0, 0.05, 1.0, 2.0};
    CHECK(p.chi_at(0.0) == 0.0);
    CHECK((hamiltonian(p, 0.0, dim).matrix() - 0.95 * shifted_number_op(dim).matrix()).norm() < 1e-14);
  }
  SUBCASE("equal alpha and beta are hermitian") {
    const CasimirParams p{1.0, 2.0, 0.05, 1.5, 1.5};
    for (double t : {0.2, 1.1, -2.4}) CHECK(herm_err(hamiltonian(p, t, dim)) < 1e-14);
    const CasimirParams q{1.0, 2.0, 0.05, 1.0, 2.0};
    CHECK(herm_err(hamiltonian(q, 0.3, dim)) > 1e-3);
  }
}

TEST_CASE("xi phase") {
  const CasimirParams p{1.0, 2.0, 0.05, 1.0, 1.0};
  CHECK(xi_phase(p, 0.0) == 0.0);
  // frozen from the closed form; quadrature oracle below
  CHECK(xi_phase(p, 10.0) == doctest::Approx(9.9771763687).epsilon(1e-10));
  for (double t : {0.5, 3.0, 17.0, 40.0})
    CHECK(std::abs(xi_phase(p, t) - 0.5 * p.kappa * t) <= p.omega0 * p.epsilon / p.kappa + 1e-15);

  // xi = int_0^t (omega(s) - Delta) ds by composite Simpson
  const int n = 20000;
  const double t = 10.0, h = t / n;
  double acc = 0.0;
  for (int k = 0; k <= n; ++k) {
    const double w = (k == 0 || k == n) ? 1.0 : (k % 2 ? 4.0 : 2.0);
    acc += w * xi_rate(p, k * h);
  }
  CHECK(std::abs(acc * h / 3.0 - xi_phase(p, t)) < 1e-10);
}

TEST_CASE("interaction picture and reduced lab frame") {
  const CasimirParams p{1.0, 2.0, 0.05, 1.0, 2.0};
  const Index dim = 24;
  const double t = 0.83;
  const Matrix u = interaction_frame(p, t, dim).matrix();
  const Matrix nh = shifted_number_op(dim).matrix();
  // V = U H U^dagger - xi_dot (N + 1/2)
  const Matrix v = u * hamiltonian(p, t, dim).matrix() * u.adjoint() - xi_rate(p, t) * nh;
  CHECK((v - interaction_hamiltonian(p, t, dim).matrix()).norm() < 1e-13);
  const Matrix lab = u.adjoint() * rwa_hamiltonian(p, dim).matrix() * u + xi_rate(p, t) * nh;
  CHECK((lab - rwa_lab_hamiltonian(p, t, dim).matrix()).norm() < 1e-12);
}

TEST_CASE("rwa with no coupling is the free oscillator") {
  const CasimirParams p{1.7, 2.0, 0.0, 1.0, 1.0};
  CHECK((rwa_hamiltonian(p, 10).matrix() - 0.7 * shifted_number_op(10).matrix()).norm() < 1e-14);
}

TEST_CASE("squeezing strength") {
  CHECK(squeeze_params(CasimirParams::from_rwa(1.0, 0.0)).r == Complex(0.0));
  const SqueezeParams s = squeeze_params(CasimirParams::from_rwa(1.0, 0.25));
  CHECK(s.r.real() == doctest::Approx(0.5 * std::atanh(0.5)).epsilon(1e-14));
  CHECK(s.r.real() == doctest::Approx(0.2746530722).epsilon(1e-9));
  CHECK(s.regime == Regime::Unbroken);
  CHECK_THROWS_AS(squeeze_params(CasimirParams::from_rwa(1.0, 0.25, 1.0, 4.0)), ExceptionalPointError);
  CHECK((squeeze_operator(CasimirParams::from_rwa(1.0, 0.25), Complex(0.0), 12).matrix() - Matrix::Identity(12, 12)).norm() ==
        0.0);
}

TEST_CASE("regime classification from parameters") {
  CHECK(regime_of(CasimirParams::from_rwa(1.0, 0.25)) == Regime::Unbroken);
  CHECK(regime_of(CasimirParams::from_rwa(0.5, 0.5)) == Regime::Broken);
  CHECK(regime_of(CasimirParams::from_rwa(1.0, 0.25, 1.0, 4.0)) == Regime::ExceptionalPoint);
  CHECK(std::string(regime_name(Regime::ExceptionalPoint)) == "exceptional_point");
}

TEST_CASE("parameter validation and effective couplings") {
  const CasimirParams p = CasimirParams::from_rwa(1.0, 0.25);
  CHECK(p.delta() == doctest::Approx(1.0));
  CHECK(p.g() == doctest::Approx(0.25));
  CHECK_NOTHROW(p.validate());
  CHECK(p.with_g(0.4).g() == doctest::Approx(0.4));
  CHECK(p.with_delta(0.3).delta() == doctest::Approx(0.3));
  CHECK_THROWS_AS((CasimirParams{1.0, 2.0, 1.2, 1.0, 1.0}.validate()), InvalidParameter);
  CHECK_THROWS_AS((CasimirParams{0.5, 2.0, 0.1, 1.0, 1.0}.validate()), InvalidParameter);
  CHECK_THROWS_AS((CasimirParams{1.0, 2.0, 0.1, -1.0, 1.0}.validate()), InvalidParameter);
  CHECK_THROWS_AS((CasimirParams{1.0, 2.0, NAN, 1.0, 1.0}.validate()), InvalidParameter);
  CHECK((CasimirParams{1.0, 2.0, 0.2, 1.0, 1.0}.warnings().size()) == 1);
}

TEST_CASE("unbroken spectrum against a dense eigensolver") {
  const CasimirParams p = CasimirParams::from_rwa(1.0, 0.25);
  const Index dim = 64;
  const SpectralResult s = spectral_solve(p, dim);
  CHECK(s.dense_check_error() <= 1e-8);
  for (Index n = 0; n < 5; ++n)
    CHECK(s.eigenvalues()[n].real() == doctest::Approx(0.8660254038 * (n + 0.5)).epsilon(1e-9));

  Eigen::ComplexEigenSolver<Matrix> es(rwa_hamiltonian(p, dim).matrix());
  std::vector<double> ev;
  for (Index k = 0; k < dim; ++k) ev.push_back(es.eigenvalues()(k).real());
  std::sort(ev.begin(), ev.end());
  for (Index n = 0; n <= dim / 4; ++n) CHECK(std::abs(ev[n] - std::sqrt(0.75) * (n + 0.5)) <= 1e-8);

  // S carries eigenvectors: V S|n> = eps_n S|n>
  const Matrix v = rwa_hamiltonian(p, dim).matrix();
  for (Index n = 0; n <= 8; ++n) {
    const Vector x = s.squeeze().matrix().col(n);
    CHECK((v * x - s.eigenvalues()[n] * x).norm() <= 1e-8 * x.norm());
  }
}

TEST_CASE("broken spectrum is purely imaginary with conjugate partners") {
  const CasimirParams p = CasimirParams::from_rwa(0.5, 0.5);
  CHECK(closed_form_eigenvalue(p, 0).real() == 0.0);
  CHECK(closed_form_eigenvalue(p, 0).imag() == doctest::Approx(0.5 * 0.8660254038).epsilon(1e-9));
  const SpectralResult s = spectral_solve(p, 64);
  CHECK(s.dense_check_error() <= 1e-10);
  CHECK(std::abs(s.eigenvalues()[1].real()) < 1e-12);
  CHECK(std::abs(std::abs(s.eigenvalues()[1].imag()) - 1.5 * std::sqrt(0.75)) < 1e-12);
  const ModeSpectrum ms = mode_spectrum(p);
  CHECK(std::abs(ms.eigenvalues[0] + ms.eigenvalues[1]) < 1e-12);
  CHECK(std::abs(std::abs(ms.eigenvalues[0].imag()) - std::sqrt(0.75)) < 1e-12);
}

TEST_CASE("free oscillator eigenvectors") {
  const CasimirParams p = CasimirParams::from_rwa(0.8, 0.0);
  const SpectralResult s = spectral_solve(p, 16);
  for (Index n = 0; n < 4; ++n) {
    CHECK(std::abs(s.eigenvalues()[n] - Complex(0.8 * (n + 0.5))) < 1e-14);
    const double t = 1.3;
    const Vector expect = std::polar(1.0, -xi_phase(p, t) * (n + 0.5)) * FockState::basis(16, n).amplitudes();
    CHECK((s.eigenvector(n, t).amplitudes() - expect).norm() < 1e-14);
  }
}

TEST_CASE("eigenvector overlap at the exceptional point") {
  const CasimirParams near = CasimirParams::from_rwa(1.0, 0.2499999, 1.0, 4.0);
  const CasimirParams far = CasimirParams::from_rwa(1.0, 0.1, 1.0, 4.0);
  CHECK(mode_spectrum(near).eigenvector_overlap > mode_spectrum(far).eigenvector_overlap);
  CHECK(mode_spectrum(near).eigenvector_overlap > 0.999);
}
