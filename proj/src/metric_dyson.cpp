#include "ptdyn/metric_dyson.hpp"

#include <cmath>

namespace ptdyn {

namespace {

bool off_diagonal_zero(const Matrix& m) {
  for (Index j = 0; j < m.cols(); ++j)
    for (Index i = 0; i < m.rows(); ++i)
      if (i != j && m(i, j) != Complex(0.0)) return false;
  return true;
}

}  // namespace

Metric::Metric(FockOperator rho, std::optional<FockOperator> rho_dot)
    : rho_(std::move(rho)), rho_dot_(std::move(rho_dot)) {
  const Matrix& m = rho_.matrix();
  if (!m.allFinite()) throw MetricViolation("metric has non-finite entries");
  double scale = m.norm();
  if ((m - m.adjoint()).norm() > 1e-12 * scale) throw MetricViolation("metric is not Hermitian");
  if (rho_dot_ && rho_dot_->dim() != rho_.dim()) throw DimensionMismatch("metric derivative dimension");
  diagonal_ = off_diagonal_zero(m);
  if (diagonal_) {
    for (Index n = 0; n < m.rows(); ++n)
      if (!(m(n, n).real() > 0.0)) throw MetricViolation("metric is not positive definite");
  } else {
    Eigen::LLT<Matrix> llt(m);
    if (llt.info() != Eigen::Success) throw MetricViolation("metric is not positive definite");
  }
}

Metric Metric::identity(Index dim) { return Metric(FockOperator::identity(dim)); }

Vector Metric::apply(const Vector& v) const {
  if (v.size() != dim()) throw DimensionMismatch("metric on state");
  if (diagonal_) return rho_.matrix().diagonal().cwiseProduct(v);
  return rho_.matrix() * v;
}

DysonMap::DysonMap(FockOperator eta, FockOperator eta_inv) : eta_(std::move(eta)), eta_inv_(std::move(eta_inv)) {
  if (eta_.dim() != eta_inv_.dim()) throw DimensionMismatch("Dyson map and inverse");
  const Index d = eta_.dim();
  double err = (eta_.matrix() * eta_inv_.matrix() - Matrix::Identity(d, d)).norm() / std::sqrt(double(d));
  if (err > 1e-10) throw NumericError("Dyson map inverse mismatch");
}

DysonMap DysonMap::from_metric(const Metric& m) {
  FockOperator eta = hermitian_sqrt(m.rho());
  FockOperator inv = eta.inverse();
  return DysonMap(std::move(eta), std::move(inv));
}

Complex pseudo_inner(const Vector& u, const Vector& v, const Metric& m) {
  if (u.size() != v.size()) throw DimensionMismatch("pseudo_inner");
  return u.dot(m.apply(v));
}

Complex pseudo_inner(const FockState& u, const FockState& v, const Metric& m) {
  return pseudo_inner(u.amplitudes(), v.amplitudes(), m);
}

double pseudo_norm(const FockState& v, const Metric& m) { return std::sqrt(std::abs(pseudo_inner(v, v, m))); }

double pseudo_hermiticity_residual(const OperatorFn& h, const Metric& m, double t, std::optional<Index> levels) {
  const Matrix hm = h(t).matrix();
  const Matrix& rho = m.rho().matrix();
  if (hm.rows() != rho.rows()) throw DimensionMismatch("Hamiltonian vs metric");
  Matrix r = hm.adjoint() * rho - rho * hm;
  if (m.rho_dot()) r -= I1 * m.rho_dot()->matrix();
  return block_residual(r, rho, levels);
}

double schrodinger_op_pseudo_hermiticity_residual(const OperatorFn& h, const Metric& m,
                                                  const std::vector<Trajectory>& states) {
  if (states.empty()) return 0.0;
  const auto& grid = states.front().times;
  if (grid.size() < 3) throw GridError("need at least 3 grid points");
  for (const auto& s : states)
    if (s.times != grid || s.states.size() != grid.size()) throw GridError("trajectories on different grids");

  double worst = 0.0;
  for (std::size_t k = 1; k + 1 < grid.size(); ++k) {
    const double span = grid[k + 1] - grid[k - 1];
    const Matrix hm = h(grid[k]).matrix();
    std::vector<Vector> x, hx, dx;
    for (const auto& s : states) {
      x.push_back(s.states[k].amplitudes());
      hx.push_back(hm * x.back());
      dx.push_back((s.states[k + 1].amplitudes() - s.states[k - 1].amplitudes()) / span);
    }
    for (std::size_t i = 0; i < states.size(); ++i) {
      for (std::size_t j = 0; j < states.size(); ++j) {
        // <u|rho L v> - <L u|rho v>
        Complex r = pseudo_inner(x[i], hx[j], m) - pseudo_inner(hx[i], x[j], m) -
                    I1 * (pseudo_inner(x[i], dx[j], m) + pseudo_inner(dx[i], x[j], m));
        worst = std::max(worst, std::abs(r));
      }
    }
  }
  return worst;
}

FockOperator hermitian_counterpart(const OperatorFn& h, const DysonMap& d, const FockOperator& eta_inv_dot, double t) {
  return d.eta() * h(t) * d.eta_inv() - I1 * (d.eta() * eta_inv_dot);
}

double pseudo_unitarity_residual(const FockOperator& s, const Metric& m, std::optional<Index> levels) {
  const Matrix& rho = m.rho().matrix();
  if (s.dim() != m.dim()) throw DimensionMismatch("pseudo_unitarity_residual");
  Matrix r = s.matrix().adjoint() * rho * s.matrix() - rho;
  return block_residual(r, rho, levels);
}

FockOperator time_derivative(const OperatorFn& f, double t, double dt) {
  if (!(dt > 0.0)) throw InvalidParameter("finite-difference step must be positive");
  return Complex(1.0 / (2.0 * dt)) * (f(t + dt) - f(t - dt));
}

}  // namespace ptdyn
