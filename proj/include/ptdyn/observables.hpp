#pragma once

#include <vector>

#include "ptdyn/casimir_model.hpp"
#include "ptdyn/trajectory.hpp"

namespace ptdyn {

struct PhotonRecord {
  double t = 0.0;
  double N = 0.0;
  Complex A;
  Complex B;
};

struct PhotonOdeOptions {
  // RK4 substep bound, in units of 1/max(|Delta|, g)
  double max_step = 0.01;
  double cap = 1e6;
};

// vacuum initial conditions; stops at the cap (records up to there)
std::vector<PhotonRecord> photon_ode_solve(const CasimirParams& p, const std::vector<double>& grid,
                                           const PhotonOdeOptions& opts = {});
PhotonRecord photon_closed_form(const CasimirParams& p, double t);
// max |N'' + Omega^2 N - 8 g^2 alpha beta| on a uniform grid
double photon_second_order_residual(const std::vector<PhotonRecord>& records, const CasimirParams& p);
// N - g (alpha B + beta A) / Delta; needs Delta > 0
double constant_of_motion(const PhotonRecord& r, const CasimirParams& p);

// 16 g^2 alpha beta / Omega^2
double oscillation_amplitude(const CasimirParams& p);
// unbroken yet amplitude >= 1: 4 g^2 alpha beta < Delta^2 <= 8 g^2 alpha beta
bool in_amplitude_band(const CasimirParams& p);

struct Moments {
  double N = 0.0;
  Complex a;      // <a>
  Complex a_dag;  // <a^dagger>
  Complex A;      // <a^2>
  Complex B;      // <a^dagger^2>
};

// rho-expectations with diagonal rho
Moments state_moments(const Vector& psi, const Vector& rho_diag);

struct QuadratureRecord {
  double t = 0.0;
  double mean_X1 = 0.0;
  double mean_X2 = 0.0;
  double var_X1 = 0.0;
  double var_X2 = 0.0;
  double cov_X = 0.0;
  double var_Y1 = 0.0;
  double var_Y2 = 0.0;
  // (1/4) ln(var_Y1 / var_Y2)
  double squeeze_degree = 0.0;
};

// frame of the moments passed in: Lab, or rotating at kappa/2 (interaction picture of the reduced model)
enum class Frame { Lab, Rotating };

QuadratureRecord quadrature_from_moments(const CasimirParams& p, double t, const Moments& m, Frame frame);
// closed-form moments, rotating frame
QuadratureRecord quadrature_closed_form(const CasimirParams& p, double t);
std::vector<QuadratureRecord> quadrature_stats(const Trajectory& traj, const CasimirParams& p,
                                               const Vector& rho_diag, Frame frame);

}  // namespace ptdyn
