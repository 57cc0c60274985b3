#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "ptdyn/casimir_model.hpp"
#include "ptdyn/metric_dyson.hpp"

using namespace ptdyn;

TEST_CASE("pseudo inner product reduces to the standard one") {
  const Metric m = Metric::identity(4);
  const FockState v = FockState::basis(4, 0);
  CHECK(std::abs(pseudo_inner(v, v, m) - Complex(1.0)) == 0.0);
  CHECK(std::abs(pseudo_norm(v, m) - 1.0) == 0.0);
}

TEST_CASE("pseudo-unitary squeezing keeps rho-orthogonality") {
  const CasimirParams p = CasimirParams::from_rwa(1.0, 0.25, 1.0, 2.0);
  const Index dim = 48;
  const FockOperator s = squeeze_operator(p, dim);
  const Metric m = casimir_metric(p, dim);
  const FockState u = s * FockState::basis(dim, 0);
  const FockState v = s * FockState::basis(dim, 1);
  CHECK(std::abs(pseudo_inner(u, v, m)) < 1e-10);
  CHECK(std::abs(pseudo_inner(u, u, m) - pseudo_inner(FockState::basis(dim, 0), FockState::basis(dim, 0), m)) < 1e-10);
}

TEST_CASE("metric validation") {
  Matrix nh = Matrix::Identity(3, 3);
  nh(0, 2) = 0.5;
  CHECK_THROWS_AS(Metric(FockOperator(nh)), MetricViolation);
  Vector d(3);
  d << 1.0, 0.0, 2.0;
  CHECK_THROWS_AS(Metric(FockOperator::diagonal(d)), MetricViolation);
  CHECK_THROWS_AS(metric_diagonal(CasimirParams::from_rwa(1.0, 0.1, 0.0, 1.0), 4), MetricViolation);
}

TEST_CASE("dyson map of the Casimir metric") {
  CasimirParams p = CasimirParams::from_rwa(1.0, 0.1, 4.0, 1.0);
  const DysonMap d = DysonMap::from_metric(casimir_metric(p, 8));
  for (Index n = 0; n < 8; ++n) {
    const double expect = std::pow(0.25, (double(n) + 0.5) / 4.0);
    CHECK(std::abs(d.eta()(n, n) - expect) < 1e-14);
  }
  CHECK(((d.eta() * d.eta_inv()).matrix() - Matrix::Identity(8, 8)).norm() < 1e-13);
  CHECK_THROWS_AS(DysonMap(FockOperator::identity(3), 2.0 * FockOperator::identity(3)), NumericError);
}

TEST_CASE("pseudo-hermiticity of the Casimir Hamiltonian") {
  const Index dim = 40;
  SUBCASE("hermitian case with identity metric") {
    const OperatorFn h = [](double) { return shifted_number_op(dim); };
    CHECK(pseudo_hermiticity_residual(h, Metric::identity(dim), 0.3) == 0.0);
  }
  SUBCASE("full Hamiltonian with its metric") {
    const CasimirParams p{1.0, 2.0, 0.05, 1.0, 3.0};
    const OperatorFn h = [&p](double t) { return hamiltonian(p, t, dim); };
    for (double t : {0.0, 0.4, 1.7, -2.2}) CHECK(pseudo_hermiticity_residual(h, casimir_metric(p, dim), t, 30) <= 1e-10);
  }
  SUBCASE("wrong metric, alpha != beta") {
    const CasimirParams p{1.0, 2.0, 0.05, 1.0, 3.0};
    const OperatorFn h = [&p](double t) { return hamiltonian(p, t, dim); };
    CHECK(pseudo_hermiticity_residual(h, Metric::identity(dim), 0.4, 30) > 1e-3);
  }
}

TEST_CASE("hermitian counterpart") {
  const Index dim = 24;
  SUBCASE("trivial dyson map") {
    const Matrix herm = Matrix::Random(dim, dim);
    const FockOperator hm(herm + herm.adjoint());
    const OperatorFn h = [&hm](double) { return hm; };
    const DysonMap d(FockOperator::identity(dim), FockOperator::identity(dim));
    CHECK((hermitian_counterpart(h, d, FockOperator::zero(dim), 0.0).matrix() - hm.matrix()).norm() == 0.0);
  }
  SUBCASE("unit alpha and beta leave H unchanged") {
    const CasimirParams p{1.0, 2.0, 0.05, 1.0, 1.0};
    const OperatorFn h = [&p](double t) { return hamiltonian(p, t, dim); };
    const FockOperator hc = hermitian_counterpart(h, casimir_dyson(p, dim), FockOperator::zero(dim), 0.6);
    CHECK((hc.matrix() - h(0.6).matrix()).norm() == 0.0);
  }
  SUBCASE("alpha != beta gives a hermitian counterpart") {
    const CasimirParams p{1.0, 2.0, 0.05, 2.0, 0.5};
    const OperatorFn h = [&p](double t) { return hamiltonian(p, t, dim); };
    const Matrix hc = hermitian_counterpart(h, casimir_dyson(p, dim), FockOperator::zero(dim), 0.6).matrix();
    CHECK((hc - hc.adjoint()).norm() <= 1e-12 * hc.norm());
  }
}

TEST_CASE("pseudo-unitarity residual") {
  const Index dim = 64;
  const Ladder l = ladder_ops(dim);
  const Matrix x = l.a.matrix() + l.a_dagger.matrix();
  const FockOperator u = matrix_exp(FockOperator(I1 * 0.3 * x));
  CHECK(pseudo_unitarity_residual(u, Metric::identity(dim)) <= 1e-12);

  const CasimirParams p = CasimirParams::from_rwa(1.0, 0.2, 1.0, 2.0);
  const FockOperator s = squeeze_operator(p, Complex(0.2), dim);
  CHECK(pseudo_unitarity_residual(s, casimir_metric(p, dim), dim / 4) <= 1e-8);
  CHECK(pseudo_unitarity_residual(s, Metric::identity(dim), dim / 4) > 1e-3);
}

TEST_CASE("schrodinger-operator pseudo-hermiticity on moving eigenvectors") {
  const Index dim = 64;
  auto run = [&](const CasimirParams& p, const Metric& m) {
    const SpectralResult s = spectral_solve(p, dim);
    const OperatorFn h = [&p, dim](double t) { return hamiltonian(p, t, dim); };
    std::vector<Trajectory> trs;
    for (Index n = 0; n < 4; ++n) {
      Trajectory tr;
      tr.times = {0.5 - 1e-6, 0.5, 0.5 + 1e-6};
      for (double t : tr.times) tr.states.push_back(s.eigenvector(n, t));
      trs.push_back(tr);
    }
    return schrodinger_op_pseudo_hermiticity_residual(h, m, trs);
  };
  const CasimirParams p = CasimirParams::from_rwa(1.0, 0.25, 1.0, 2.0);
  CHECK(run(p, casimir_metric(p, dim)) <= 1e-6);
  CHECK(run(p, Metric::identity(dim)) > 1e-2);
}

TEST_CASE("time derivative of an operator function") {
  const OperatorFn f = [](double t) { return Complex(t * t) * FockOperator::identity(3); };
  CHECK(std::abs(time_derivative(f, 1.5, 1e-3)(0, 0) - 3.0) < 1e-10);
}
