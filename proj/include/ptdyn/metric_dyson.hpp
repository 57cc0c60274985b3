#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "ptdyn/fock_algebra.hpp"
#include "ptdyn/trajectory.hpp"

namespace ptdyn {

using OperatorFn = std::function<FockOperator(double)>;

class Metric {
 public:
  explicit Metric(FockOperator rho, std::optional<FockOperator> rho_dot = std::nullopt);

  static Metric identity(Index dim);

  Index dim() const { return rho_.dim(); }
  const FockOperator& rho() const { return rho_; }
  const std::optional<FockOperator>& rho_dot() const { return rho_dot_; }
  // true when rho is diagonal, used for cheap products on large states
  bool is_diagonal() const { return diagonal_; }
  Vector apply(const Vector& v) const;

 private:
  FockOperator rho_;
  std::optional<FockOperator> rho_dot_;
  bool diagonal_ = false;
};

class DysonMap {
 public:
  DysonMap(FockOperator eta, FockOperator eta_inv);

  static DysonMap from_metric(const Metric& m);

  const FockOperator& eta() const { return eta_; }
  const FockOperator& eta_inv() const { return eta_inv_; }

 private:
  FockOperator eta_;
  FockOperator eta_inv_;
};

Complex pseudo_inner(const FockState& u, const FockState& v, const Metric& m);
Complex pseudo_inner(const Vector& u, const Vector& v, const Metric& m);
double pseudo_norm(const FockState& v, const Metric& m);

// ||H^dagger rho - rho H - i d_t rho||_F / ||rho||_F
double pseudo_hermiticity_residual(const OperatorFn& h, const Metric& m, double t,
                                   std::optional<Index> levels = std::nullopt);

// max |<u| rho L - L^dagger rho |v>| over interior grid points, L = H - i d_t
double schrodinger_op_pseudo_hermiticity_residual(const OperatorFn& h, const Metric& m,
                                                  const std::vector<Trajectory>& states);

// eta H eta^-1 - i eta d_t(eta^-1)
FockOperator hermitian_counterpart(const OperatorFn& h, const DysonMap& d, const FockOperator& eta_inv_dot, double t);

// ||S^dagger rho S - rho||_F / ||rho||_F
double pseudo_unitarity_residual(const FockOperator& s, const Metric& m, std::optional<Index> levels = std::nullopt);

// central difference of an operator-valued function
FockOperator time_derivative(const OperatorFn& f, double t, double dt);

}  // namespace ptdyn
