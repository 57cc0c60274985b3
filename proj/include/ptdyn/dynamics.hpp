#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "ptdyn/fock_algebra.hpp"
#include "ptdyn/metric_dyson.hpp"
#include "ptdyn/trajectory.hpp"

namespace ptdyn {

using QuadraticFn = std::function<QuadraticOperator(double)>;
using BasisFn = std::function<std::vector<FockState>(double)>;

enum class Integrator { Magnus4, Rk4 };

struct IntegrateOptions {
  Integrator method = Integrator::Magnus4;
  // local error per step, relative to max(1, |psi|)
  double tol = 1e-10;
  bool adaptive = true;
  // upper bound on internal steps; 0 means the grid spacing
  double max_step = 0.0;
  // integration stops once the Euclidean norm exceeds this
  double norm_cap = 1e6;
  bool normalize = true;
  // rho used for initial normalization and recorded norms; identity when empty
  std::optional<Vector> rho_diagonal;
  std::optional<Metric> metric;
};

// i d_t psi = H(t) psi on the given grid; grid may run backwards
Trajectory integrate(const OperatorFn& h, const FockState& psi0, const std::vector<double>& grid,
                     const IntegrateOptions& opts = {});
Trajectory integrate(const QuadraticFn& h, const FockState& psi0, const std::vector<double>& grid,
                     const IntegrateOptions& opts = {});

// grid t_k = -T + 2Tk/(2n), integrated outward from t = 0
std::vector<double> symmetric_grid(double t_max, std::size_t half_steps);
std::vector<double> uniform_grid(double t0, double t1, std::size_t steps);
Trajectory integrate_symmetric(const OperatorFn& h, const FockState& psi0, const std::vector<double>& grid,
                               const IntegrateOptions& opts = {});
Trajectory integrate_symmetric(const QuadraticFn& h, const FockState& psi0, const std::vector<double>& grid,
                               const IntegrateOptions& opts = {});

struct PhaseTable {
  std::vector<double> times;
  // [n][k]
  std::vector<std::vector<Complex>> total;
  std::vector<std::vector<Complex>> dynamical;
  std::vector<std::vector<Complex>> geometric;
  std::vector<std::vector<Complex>> rates;
  double max_offdiag = 0.0;

  std::vector<Complex> at(std::size_t k) const;
};

struct PhaseOptions {
  // step of the five-point stencil for d_t |n,t>
  double fd_step = 3e-5;
  double offdiag_tol = 1e-6;
  bool check_offdiag = true;
  // pair with these functionals instead of rho |n,t>
  std::optional<BasisFn> duals;
};

// alpha_n(t) = int_0^t <n|H|n>_rho - i <n|d_tau|n>_rho, trapezoid from t = 0; grid must contain 0
PhaseTable lr_phase_extract(const BasisFn& basis, const OperatorFn& h, const Metric& m,
                            const std::vector<double>& grid, const PhaseOptions& opts = {});
// same with grid derivatives of precomputed basis trajectories
PhaseTable lr_phase_extract(const std::vector<Trajectory>& basis, const OperatorFn& h, const Metric& m);

// c_n = <n,0|rho|psi0>; throws IncompleteBasis when the remainder exceeds tol
std::vector<Complex> projection_coefficients(const std::vector<FockState>& basis0, const FockState& psi0,
                                             const Metric& m, double tol = 1e-8);

FockState assemble_solution(const std::vector<Complex>& coeffs, const std::vector<Complex>& phases,
                            const BasisFn& basis, double t);

// max |conj(alpha_n(-t)) + alpha_n(t)|
double phase_parity_check(const PhaseTable& phases);
double max_imag_phase(const PhaseTable& phases);

}  // namespace ptdyn
