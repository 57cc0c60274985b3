#pragma once

#include <array>
#include <string>
#include <vector>

#include "ptdyn/fock_algebra.hpp"
#include "ptdyn/metric_dyson.hpp"

namespace ptdyn {

enum class Regime { Unbroken, ExceptionalPoint, Broken };

const char* regime_name(Regime r);

struct CasimirParams {
  double omega0 = 1.0;
  double kappa = 2.0;
  double epsilon = 0.0;
  double alpha = 1.0;
  double beta = 1.0;

  double delta() const { return omega0 - 0.5 * kappa; }
  double g() const { return epsilon * kappa / 8.0; }
  // 4 (Delta^2 - 4 g^2 alpha beta)
  double omega_sq() const;
  // sqrt(Delta^2 - 4 g^2 alpha beta), imaginary past the EP
  Complex rate() const;
  double omega_at(double t) const;
  double chi_at(double t) const;

  // throws InvalidParameter on Delta < 0, alpha/beta < 0, epsilon outside [0, 1), omega0 <= 0
  void validate() const;
  std::vector<std::string> warnings() const;

  // effective (Delta, g) at modulation depth epsilon; kappa follows from g
  static CasimirParams from_rwa(double delta, double g, double alpha = 1.0, double beta = 1.0,
                                double epsilon = 0.1);
  CasimirParams with_g(double g) const;
  CasimirParams with_delta(double delta) const;
};

// relative tolerance on |Delta - 2 g sqrt(alpha beta)| deciding the EP
Regime regime_of(const CasimirParams& p, double tol = 1e-12);

struct SqueezeParams {
  Complex r;
  Regime regime;
};

SqueezeParams squeeze_params(const CasimirParams& p);

double xi_phase(const CasimirParams& p, double t);
double xi_rate(const CasimirParams& p, double t);

QuadraticOperator hamiltonian_form(const CasimirParams& p, double t);
QuadraticOperator interaction_form(const CasimirParams& p, double t);
QuadraticOperator rwa_form(const CasimirParams& p);
QuadraticOperator rwa_lab_form(const CasimirParams& p, double t);

FockOperator hamiltonian(const CasimirParams& p, double t, Index dim);
FockOperator interaction_hamiltonian(const CasimirParams& p, double t, Index dim);
FockOperator rwa_hamiltonian(const CasimirParams& p, Index dim);
// U^dagger V_rwa U + xi_dot (N + 1/2): the lab-frame generator of the RWA dynamics
FockOperator rwa_lab_hamiltonian(const CasimirParams& p, double t, Index dim);
// U(t) = exp[i xi(t) (N + 1/2)]
FockOperator interaction_frame(const CasimirParams& p, double t, Index dim);

Vector metric_diagonal(const CasimirParams& p, Index dim);
Metric casimir_metric(const CasimirParams& p, Index dim);
DysonMap casimir_dyson(const CasimirParams& p, Index dim);

FockOperator squeeze_operator(const CasimirParams& p, Index dim, Index pad = 4);
FockOperator squeeze_operator(const CasimirParams& p, Complex r, Index dim, Index pad = 4);

// Bogoliubov matrix of V_rwa acting on (a, a^dagger)
Eigen::Matrix2cd mode_matrix(const CasimirParams& p);

struct ModeSpectrum {
  std::array<Complex, 2> eigenvalues;
  // |<v1|v2>| of normalized eigenvectors, -> 1 at the EP
  double eigenvector_overlap;
};

ModeSpectrum mode_spectrum(const CasimirParams& p);

class SpectralResult {
 public:
  SpectralResult(CasimirParams p, Index dim, SqueezeParams sq, FockOperator s, std::vector<Complex> eigenvalues,
                 double dense_check_error);

  const CasimirParams& params() const { return p_; }
  Index dim() const { return dim_; }
  Complex r() const { return sq_.r; }
  Regime regime_hint() const { return sq_.regime; }
  const std::vector<Complex>& eigenvalues() const { return eps_; }
  const FockOperator& squeeze() const { return s_; }
  // largest deviation from a direct eigensolver on the trusted window
  double dense_check_error() const { return dense_err_; }

  // |n,t> = U^dagger(t) S |n> / sqrt(rho_n)
  FockState eigenvector(Index n, double t) const;
  std::vector<FockState> eigenvectors(double t, Index count) const;
  // U^dagger(t) |n>: reference functionals for component pairing
  FockState reference(Index n, double t) const;

 private:
  CasimirParams p_;
  Index dim_;
  SqueezeParams sq_;
  FockOperator s_;
  std::vector<Complex> eps_;
  double dense_err_;
  Vector rho_diag_;
};

SpectralResult spectral_solve(const CasimirParams& p, Index dim, Index pad = 4);

// closed-form eigenvalue of the Schroedinger operator for level n (principal root)
Complex closed_form_eigenvalue(const CasimirParams& p, Index n);
// level spacing carried by S(r): Delta cosh(2 sqrt(ab) r) - 2 g sqrt(ab) sinh(2 sqrt(ab) r);
// past the EP the +i pi/2 branch gives -i |Omega|/2
Complex branch_rate(const CasimirParams& p, Complex r);

}  // namespace ptdyn
