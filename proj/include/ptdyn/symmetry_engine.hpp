#pragma once

#include <functional>
#include <optional>
#include <utility>
#include <vector>

#include "ptdyn/casimir_model.hpp"
#include "ptdyn/fock_algebra.hpp"
#include "ptdyn/metric_dyson.hpp"

namespace ptdyn {

using AntilinearFn = std::function<AntilinearOperator(double)>;
using StateFn = std::function<FockState(double)>;

struct LRInvariant {
  OperatorFn I_fn;
};

struct SymmetryVerdict {
  Regime regime = Regime::Unbroken;
  std::vector<std::pair<Complex, Complex>> eigenvalue_pairs;
  std::vector<double> unbroken_residuals;
  std::optional<double> ep_parameter;
  // <n,-t|rho I(t)|n,t> / <n,-t|rho|n,-t>, at the first sampled t
  std::vector<Complex> lambdas;
  // max over t of |lambda_n(t) - lambda_n(t_first)|
  double lambda_drift = 0.0;
  // distance of the eigenvalue multiset from its image under eps -> conj(eps(-t))
  double pairing_error = 0.0;
};

// ||i d_t M + H(-t) M - M conj(H(t))||_F for I = M K
double antilinear_symmetry_residual(const AntilinearFn& I, const OperatorFn& h, double t, double dt,
                                    std::optional<Index> levels = std::nullopt);
// ||i d_t I + I H - H I||_F
double linear_invariant_residual(const LRInvariant& inv, const OperatorFn& h, double t, double dt,
                                 std::optional<Index> levels = std::nullopt);

// max over grid and tests of |L(-t) I(t) chi - I(t) L(t) chi|, L(t) = H(t) - i d_t, L(-t) = H(-t) + i d_t
double schrodinger_symmetry_residual(const AntilinearFn& I, const OperatorFn& h, const std::vector<StateFn>& tests,
                                     const std::vector<double>& grid, double dt);
// same with a linear candidate
double schrodinger_symmetry_residual(const OperatorFn& I, const OperatorFn& h, const std::vector<StateFn>& tests,
                                     const std::vector<double>& grid, double dt);

struct EigenSample {
  double t = 0.0;
  std::vector<Complex> eigenvalues;
  std::vector<FockState> states;
};

// samples must come in +-t pairs; criticality (distance from the EP, when known) enables the EP verdict
SymmetryVerdict classify_regime(const std::vector<EigenSample>& data, const AntilinearFn& I, const Metric& m,
                                double tol = 1e-6, double im_tol = 1e-8,
                                std::optional<double> criticality = std::nullopt);

struct CParams {
  Complex phi;
  Complex mu;
};

CParams c_operator_params(const CasimirParams& p);

// C(t) = exp[i phi (N + 1/2) - i mu (alpha a^dagger^2 e^{i theta} + beta a^2 e^{-i theta})], theta = 2 xi(t)
class COperatorFactory {
 public:
  COperatorFactory(const CasimirParams& p, Index dim, Index pad = 4, double mu_sign = 1.0);

  FockOperator at(double t) const;
  AntilinearOperator cpt(double t) const;
  const CParams& params() const { return c_; }

 private:
  CasimirParams p_;
  Index dim_;
  CParams c_;
  FockOperator c0_;
};

FockOperator build_C_operator(const CasimirParams& p, double t, Index dim, Index pad = 4);

// I(t) = U^-1(t) S e^{i pi (N + 1/2)} S^-1 U(t)
class InvariantFactory {
 public:
  InvariantFactory(const CasimirParams& p, Index dim, Index pad = 4);
  FockOperator at(double t) const;

 private:
  CasimirParams p_;
  Index dim_;
  FockOperator x0_;
};

// Xi(t) = rho C(t) P T against the reduced lab-frame Hamiltonian
double antilinear_metric_residual(const CasimirParams& p, double t, double dt, Index dim, double mu_sign = 1.0,
                                  std::optional<Index> levels = std::nullopt, Index pad = 4);

// ||P T |n,t> - (-1)^n |n,-t>||
double parity_eigenvector_residual(const SpectralResult& s, Index n, double t);

SymmetryVerdict classify_casimir(const CasimirParams& p, Index dim, const std::vector<double>& times,
                                 Index levels = 8, double tol = 1e-6);

enum class SweepParameter { G, Delta };

struct EpLocation {
  double value = 0.0;
  double eigenvector_overlap = 0.0;
  int iterations = 0;
};

CasimirParams with_parameter(const CasimirParams& p, SweepParameter which, double value);
// bisection on the real -> complex transition of the mode spectrum
EpLocation locate_exceptional_point(const CasimirParams& p, SweepParameter which, double lo, double hi,
                                    double tol = 1e-10);
bool mode_spectrum_complex(const CasimirParams& p);

}  // namespace ptdyn
