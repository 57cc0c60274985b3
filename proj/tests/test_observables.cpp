#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "ptdyn/dynamics.hpp"
#include "ptdyn/observables.hpp"

using namespace ptdyn;

TEST_CASE("no coupling creates no photons") {
  const CasimirParams p = CasimirParams::from_rwa(1.0, 0.0);
  for (double t : {0.0, 1.0, 7.5}) {
    const PhotonRecord r = photon_closed_form(p, t);
    CHECK(r.N == 0.0);
    CHECK(std::abs(r.A) == 0.0);
    CHECK(std::abs(r.B) == 0.0);
  }
  for (const auto& r : photon_ode_solve(p, uniform_grid(0.0, 5.0, 50))) CHECK(r.N == 0.0);
}

TEST_CASE("closed-form photon number") {
  const CasimirParams p = CasimirParams::from_rwa(1.0, 0.25);
  const PhotonRecord r0 = photon_closed_form(p, 0.0);
  CHECK(r0.N == 0.0);
  CHECK(std::abs(r0.A) == 0.0);

  const double omega = std::sqrt(p.omega_sq());
  const PhotonRecord r = photon_closed_form(p, std::acos(-1.0) / omega);
  CHECK(r.N == doctest::Approx(1.0 / 3.0).epsilon(1e-12));
  CHECK(r.A.real() == doctest::Approx(2.0 / 3.0).epsilon(1e-12));
  CHECK(std::abs(r.A.imag()) < 1e-12);
  CHECK(oscillation_amplitude(p) == doctest::Approx(1.0 / 3.0).epsilon(1e-14));

  // exceptional point: series limit
  const CasimirParams ep = CasimirParams::from_rwa(0.5, 0.25);
  CHECK(photon_closed_form(ep, 1.0).N == doctest::Approx(0.25).epsilon(1e-12));
}

TEST_CASE("photon ODE against the closed form") {
  for (const CasimirParams& p : {CasimirParams::from_rwa(1.0, 0.25), CasimirParams::from_rwa(1.0, 0.2, 1.0, 3.0),
                                 CasimirParams::from_rwa(0.5, 0.5)}) {
    const double scale = std::sqrt(std::abs(p.omega_sq()));
    const auto grid = uniform_grid(0.0, 6.0 / scale, 600);
    const auto recs = photon_ode_solve(p, grid);
    REQUIRE(recs.size() == grid.size());
    for (const auto& r : recs) {
      const PhotonRecord c = photon_closed_form(p, r.t);
      CHECK(std::abs(r.N - c.N) <= 1e-8 * std::max(1.0, c.N));
      CHECK(std::abs(r.A - c.A) <= 1e-8 * std::max(1.0, std::abs(c.A)));
    }
  }
}

TEST_CASE("second-order equation for the photon number") {
  const CasimirParams p = CasimirParams::from_rwa(1.0, 0.25);
  const auto grid = uniform_grid(0.0, 10.0, 10000);
  std::vector<PhotonRecord> closed;
  for (double t : grid) closed.push_back(photon_closed_form(p, t));
  CHECK(photon_second_order_residual(closed, p) <= 1e-6);
  CHECK(photon_second_order_residual(photon_ode_solve(p, grid), p) <= 1e-6);
  CHECK(photon_second_order_residual(closed, p.with_g(0.4)) > 0.1);
}

TEST_CASE("constant of motion") {
  const CasimirParams p = CasimirParams::from_rwa(1.0, 0.2, 1.0, 2.0);
  for (double t : {0.0, 0.9, 3.3, 12.0}) CHECK(std::abs(constant_of_motion(photon_closed_form(p, t), p)) < 1e-12);
  CHECK_THROWS_AS(constant_of_motion(photon_closed_form(CasimirParams::from_rwa(0.0, 0.2), 1.0),
                                     CasimirParams::from_rwa(0.0, 0.2)),
                  InvalidParameter);
}

TEST_CASE("oscillation amplitude band") {
  CHECK_FALSE(in_amplitude_band(CasimirParams::from_rwa(1.0, 0.25)));
  CHECK(in_amplitude_band(CasimirParams::from_rwa(1.0, 0.4)));
  CHECK(oscillation_amplitude(CasimirParams::from_rwa(1.0, 0.4)) > 1.0);
  CHECK_FALSE(in_amplitude_band(CasimirParams::from_rwa(0.5, 0.5)));
}

TEST_CASE("vacuum quadratures") {
  const CasimirParams p = CasimirParams::from_rwa(1.0, 0.0);
  const QuadratureRecord q = quadrature_closed_form(p, 2.0);
  CHECK(q.var_X1 == doctest::Approx(0.25));
  CHECK(q.var_X2 == doctest::Approx(0.25));
  CHECK(q.squeeze_degree == doctest::Approx(0.0));
}

TEST_CASE("broken-regime squeezing") {
  const CasimirParams p = CasimirParams::from_rwa(0.0, 0.25);
  const QuadratureRecord q = quadrature_closed_form(p, 2.0);
  CHECK(std::sqrt(q.var_Y1) == doctest::Approx(std::exp(1.0) / 2.0).epsilon(1e-12));
  CHECK(std::sqrt(q.var_Y2) == doctest::Approx(std::exp(-1.0) / 2.0).epsilon(1e-12));
  CHECK(q.squeeze_degree == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(std::sqrt(q.var_Y1 * q.var_Y2) == doctest::Approx(0.25).epsilon(1e-12));
}

TEST_CASE("quadrature sum rule") {
  const CasimirParams p = CasimirParams::from_rwa(1.0, 0.2, 1.0, 3.0);
  for (double t : {0.5, 2.0, 6.0}) {
    const QuadratureRecord q = quadrature_closed_form(p, t);
    CHECK(q.var_X1 + q.var_X2 == doctest::Approx(photon_closed_form(p, t).N + 0.5).epsilon(1e-12));
  }
}

TEST_CASE("moments of the integrated state match the closed form") {
  const CasimirParams p = CasimirParams::from_rwa(1.0, 0.3, 1.0, 2.0);
  const Index dim = 200;
  const Vector rho = metric_diagonal(p, dim);
  IntegrateOptions o;
  o.rho_diagonal = rho;
  const auto grid = uniform_grid(0.0, 4.0, 8);
  const Trajectory tr =
      integrate(QuadraticFn([&p](double) { return rwa_form(p); }), FockState::basis(dim, 0), grid, o);
  const auto stats = quadrature_stats(tr, p, rho, Frame::Rotating);
  for (std::size_t k = 0; k < grid.size(); ++k) {
    const QuadratureRecord c = quadrature_closed_form(p, grid[k]);
    CHECK(std::abs(stats[k].var_Y1 - c.var_Y1) < 1e-8);
    CHECK(std::abs(stats[k].var_Y2 - c.var_Y2) < 1e-8);
    CHECK(std::abs(stats[k].cov_X - c.cov_X) < 1e-8);
    const Moments m = state_moments(tr.states[k].amplitudes(), rho);
    CHECK(std::abs(m.N - photon_closed_form(p, grid[k]).N) < 1e-8);
  }
}

namespace {

// max deviation of an approximation for Delta Y1 - 1/2, relative to the exact swing
double approx_error(const CasimirParams& p, double (*approx)(const CasimirParams&, double)) {
  const double omega = std::sqrt(p.omega_sq());
  double worst = 0.0, swing = 0.0;
  for (int k = 0; k <= 400; ++k) {
    const double t = 4.0 * std::acos(-1.0) / omega * k / 400.0;
    const double exact = std::sqrt(quadrature_closed_form(p, t).var_Y1) - 0.5;
    swing = std::max(swing, std::abs(exact));
    worst = std::max(worst, std::abs(exact - approx(p, t)));
  }
  return worst / swing;
}

double first_order(const CasimirParams& p, double t) {
  return std::sqrt(p.alpha * p.beta) * p.g() / (2.0 * p.delta()) * std::sin(std::sqrt(p.omega_sq()) * t);
}

double quarter_delta(const CasimirParams& p, double t) {
  return std::sqrt(p.alpha * p.beta) * p.g() / (4.0 * p.delta()) * std::sin(p.delta() * t / 2.0);
}

}  // namespace

TEST_CASE("weak-coupling squeezing follows the first-order formula") {
  CHECK(approx_error(CasimirParams::from_rwa(1.0, 0.01), first_order) < 0.1);
}

TEST_CASE("weak-coupling squeezing with quarter amplitude at half detuning" * doctest::should_fail()) {
  CHECK(approx_error(CasimirParams::from_rwa(1.0, 0.01), quarter_delta) < 0.1);
}
