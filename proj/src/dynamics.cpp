#include "ptdyn/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace ptdyn {

namespace {

struct DenseSnap {
  Matrix m;
  double bound;
  void apply(const Vector& in, Vector& out) const { out.noalias() = m * in; }
};

struct QuadSnap {
  QuadraticOperator q;
  double bound;
  void apply(const Vector& in, Vector& out) const { q.apply(in, out); }
};

double norm_sq(const Vector& v, const IntegrateOptions& o) {
  if (o.metric) return std::abs(pseudo_inner(v, v, *o.metric));
  if (o.rho_diagonal) return std::abs(o.rho_diagonal->cwiseProduct(v.cwiseAbs2()).sum());
  return v.squaredNorm();
}

template <class Snap>
class Stepper {
 public:
  Stepper(std::function<Snap(double)> eval, Integrator method) : eval_(std::move(eval)), method_(method) {}

  // largest |h| for which the step is well inside its stability region
  double stable_step(double t) const {
    double b = eval_(t).bound;
    double lim = method_ == Integrator::Magnus4 ? 3.0 : 2.0;
    return b > 0.0 ? lim / b : 1e300;
  }

  Vector step(double t, double h, const Vector& psi) const {
    return method_ == Integrator::Magnus4 ? magnus(t, h, psi) : rk4(t, h, psi);
  }

 private:
  Vector magnus(double t, double h, const Vector& psi) const {
    static const double c = std::sqrt(3.0) / 6.0;
    const Snap h1 = eval_(t + (0.5 - c) * h);
    const Snap h2 = eval_(t + (0.5 + c) * h);
    const Complex a = -0.5 * I1 * h;
    const double b = std::sqrt(3.0) * h * h / 12.0;
    Vector x1, x2, y1, y2;
    auto omega = [&](const Vector& v, Vector& out) {
      h1.apply(v, x1);
      h2.apply(v, x2);
      h2.apply(x1, y1);
      h1.apply(x2, y2);
      out = a * (x1 + x2) + b * (y2 - y1);
    };
    Vector sum = psi, term = psi, next;
    const double scale = std::max(psi.norm(), 1e-300);
    int small = 0;
    for (int k = 1; k < 200; ++k) {
      omega(term, next);
      term = next / double(k);
      sum += term;
      if (term.norm() <= 1e-17 * scale) {
        if (++small == 2) break;
      } else {
        small = 0;
      }
    }
    return sum;
  }

  Vector rk4(double t, double h, const Vector& psi) const {
    const Snap s0 = eval_(t);
    const Snap sm = eval_(t + 0.5 * h);
    const Snap s1 = eval_(t + h);
    Vector k1, k2, k3, k4;
    s0.apply(psi, k1);
    k1 *= -I1;
    sm.apply(psi + 0.5 * h * k1, k2);
    k2 *= -I1;
    sm.apply(psi + 0.5 * h * k2, k3);
    k3 *= -I1;
    s1.apply(psi + h * k3, k4);
    k4 *= -I1;
    return psi + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
  }

  std::function<Snap(double)> eval_;
  Integrator method_;
};

template <class Snap>
Trajectory run(std::function<Snap(double)> eval, const FockState& psi0, const std::vector<double>& grid,
               const IntegrateOptions& opts) {
  if (grid.size() < 2) throw GridError("integration grid needs at least 2 points");
  if (!(opts.tol > 0.0)) throw InvalidParameter("tolerance must be positive");
  const bool forward = grid[1] > grid[0];
  for (std::size_t k = 1; k < grid.size(); ++k)
    if ((grid[k] > grid[k - 1]) != forward || grid[k] == grid[k - 1])
      throw GridError("integration grid must be strictly monotone");
  if (opts.metric && opts.metric->dim() != psi0.dim()) throw DimensionMismatch("metric vs initial state");
  if (opts.rho_diagonal && opts.rho_diagonal->size() != psi0.dim())
    throw DimensionMismatch("metric vs initial state");

  Stepper<Snap> stepper(std::move(eval), opts.method);
  Vector psi = psi0.amplitudes();
  double n0 = norm_sq(psi, opts);
  if (!(n0 > 0.0)) throw NumericError("initial state has zero norm");
  if (opts.normalize) psi /= std::sqrt(n0);

  Trajectory tr;
  tr.times.push_back(grid[0]);
  tr.states.emplace_back(psi);
  tr.rho_norms.push_back(norm_sq(psi, opts));

  const double sgn = forward ? 1.0 : -1.0;
  double h = 0.0;
  for (std::size_t k = 1; k < grid.size(); ++k) {
    double t = grid[k - 1];
    const double t_end = grid[k];
    double hmax = std::abs(t_end - t);
    if (opts.max_step > 0.0) hmax = std::min(hmax, opts.max_step);
    if (h == 0.0) h = hmax;
    h = std::min(h, hmax);

    if (!opts.adaptive) {
      double hs = std::min(hmax, stepper.stable_step(t));
      std::size_t n = std::size_t(std::ceil(std::abs(t_end - t) / hs - 1e-12));
      n = std::max<std::size_t>(n, 1);
      const double hh = (t_end - t) / double(n);
      for (std::size_t j = 0; j < n; ++j) {
        psi = stepper.step(t, hh, psi);
        t = (j + 1 == n) ? t_end : t + hh;
      }
    } else {
      while (sgn * (t_end - t) > 0.0) {
        const double remaining = std::abs(t_end - t);
        const double h_try = std::min(h, stepper.stable_step(t));
        double hs = std::min(h_try, remaining);
        const bool last = hs >= remaining * (1.0 - 1e-12);
        const double step = last ? (t_end - t) : sgn * hs;
        Vector y1 = stepper.step(t, step, psi);
        Vector mid = stepper.step(t, 0.5 * step, psi);
        Vector y2 = stepper.step(t + 0.5 * step, 0.5 * step, mid);
        const double scale = std::max(1.0, psi.norm());
        const double err = (y2 - y1).norm() / 15.0 / scale;
        if (!std::isfinite(err)) {
          tr.status = IntegrationStatus::StepUnderflow;
          tr.message = "non-finite state at t=" + std::to_string(t);
          return tr;
        }
        if (err <= opts.tol) {
          psi = std::move(y2);
          t = last ? t_end : t + step;
          const double f = err > 0.0 ? 0.9 * std::pow(opts.tol / err, 0.2) : 2.0;
          h = std::min(hmax, std::abs(step) * std::clamp(f, 0.2, 2.0));
          if (last && !(f < 1.0)) h = std::max(h, h_try);
        } else {
          h = std::abs(step) * std::clamp(0.9 * std::pow(opts.tol / err, 0.2), 0.1, 0.5);
          if (h < 1e-13 * std::max(1.0, std::abs(t))) {
            tr.status = IntegrationStatus::StepUnderflow;
            tr.message = "step size underflow at t=" + std::to_string(t);
            return tr;
          }
        }
        if (psi.norm() > opts.norm_cap) break;
      }
    }
    const double nrm = psi.norm();
    if (!std::isfinite(nrm) || nrm > opts.norm_cap) {
      tr.status = IntegrationStatus::Capped;
      tr.message = "norm cap exceeded before t=" + std::to_string(t_end);
      return tr;
    }
    tr.times.push_back(t_end);
    tr.states.emplace_back(psi);
    tr.rho_norms.push_back(norm_sq(psi, opts));
  }
  return tr;
}

std::function<DenseSnap(double)> dense_eval(const OperatorFn& h) {
  return [h](double t) {
    Matrix m = h(t).matrix();
    double b = m.cwiseAbs().rowwise().sum().maxCoeff();
    return DenseSnap{std::move(m), b};
  };
}

std::function<QuadSnap(double)> quad_eval(const QuadraticFn& h, Index dim) {
  return [h, dim](double t) {
    QuadraticOperator q = h(t);
    return QuadSnap{q, q.norm_bound(dim)};
  };
}

std::size_t zero_index(const std::vector<double>& grid) {
  double scale = 0.0;
  for (double t : grid) scale = std::max(scale, std::abs(t));
  for (std::size_t k = 0; k < grid.size(); ++k)
    if (std::abs(grid[k]) <= 1e-14 * std::max(scale, 1.0)) return k;
  throw GridError("grid does not contain t = 0");
}

template <class Fn>
Trajectory symmetric(const Fn& h, const FockState& psi0, const std::vector<double>& grid,
                     const IntegrateOptions& opts) {
  for (std::size_t k = 1; k < grid.size(); ++k)
    if (!(grid[k] > grid[k - 1])) throw GridError("grid must be increasing");
  const std::size_t z = zero_index(grid);
  std::vector<double> fwd(grid.begin() + z, grid.end());
  std::vector<double> bwd(grid.begin(), grid.begin() + z + 1);
  std::reverse(bwd.begin(), bwd.end());

  Trajectory out;
  Trajectory b, f;
  if (bwd.size() >= 2) b = integrate(h, psi0, bwd, opts);
  if (fwd.size() >= 2) f = integrate(h, psi0, fwd, opts);
  if (bwd.size() < 2 && fwd.size() < 2) throw GridError("symmetric grid needs at least 2 points");
  for (std::size_t k = b.size(); k-- > 1;) {
    out.times.push_back(b.times[k]);
    out.states.push_back(b.states[k]);
    out.rho_norms.push_back(b.rho_norms[k]);
  }
  if (f.size() > 0) {
    out.times.insert(out.times.end(), f.times.begin(), f.times.end());
    out.states.insert(out.states.end(), f.states.begin(), f.states.end());
    out.rho_norms.insert(out.rho_norms.end(), f.rho_norms.begin(), f.rho_norms.end());
  } else {
    out.times.push_back(b.times[0]);
    out.states.push_back(b.states[0]);
    out.rho_norms.push_back(b.rho_norms[0]);
  }
  for (const Trajectory* t : {&b, &f}) {
    if (t->size() > 0 && !t->complete()) {
      out.status = t->status;
      out.message = t->message;
    }
  }
  return out;
}

// d_t f at grid[k] from three neighbouring samples (Lagrange)
template <class V>
V three_point_derivative(const std::vector<double>& t, const std::vector<V>& f, std::size_t k) {
  std::size_t i0 = k == 0 ? 0 : (k + 1 == t.size() ? k - 2 : k - 1);
  const double x0 = t[i0], x1 = t[i0 + 1], x2 = t[i0 + 2], x = t[k];
  const double w0 = ((x - x1) + (x - x2)) / ((x0 - x1) * (x0 - x2));
  const double w1 = ((x - x0) + (x - x2)) / ((x1 - x0) * (x1 - x2));
  const double w2 = ((x - x0) + (x - x1)) / ((x2 - x0) * (x2 - x1));
  return w0 * f[i0] + w1 * f[i0 + 1] + w2 * f[i0 + 2];
}

void accumulate(PhaseTable& tab) {
  const std::size_t z = zero_index(tab.times);
  const std::size_t nk = tab.times.size();
  const std::size_t nn = tab.rates.size();
  tab.total.assign(nn, std::vector<Complex>(nk, 0.0));
  auto integ = [&](std::vector<std::vector<Complex>>& out, const std::vector<std::vector<Complex>>& rate) {
    out.assign(nn, std::vector<Complex>(nk, 0.0));
    for (std::size_t n = 0; n < nn; ++n) {
      for (std::size_t k = z + 1; k < nk; ++k)
        out[n][k] = out[n][k - 1] + 0.5 * (tab.times[k] - tab.times[k - 1]) * (rate[n][k] + rate[n][k - 1]);
      for (std::size_t k = z; k-- > 0;)
        out[n][k] = out[n][k + 1] + 0.5 * (tab.times[k] - tab.times[k + 1]) * (rate[n][k] + rate[n][k + 1]);
    }
  };
  std::vector<std::vector<Complex>> dyn_rate = tab.dynamical, geo_rate = tab.geometric;
  integ(tab.dynamical, dyn_rate);
  integ(tab.geometric, geo_rate);
  for (std::size_t n = 0; n < nn; ++n)
    for (std::size_t k = 0; k < nk; ++k) tab.total[n][k] = tab.dynamical[n][k] + tab.geometric[n][k];
}

}  // namespace

Trajectory integrate(const OperatorFn& h, const FockState& psi0, const std::vector<double>& grid,
                     const IntegrateOptions& opts) {
  return run<DenseSnap>(dense_eval(h), psi0, grid, opts);
}

Trajectory integrate(const QuadraticFn& h, const FockState& psi0, const std::vector<double>& grid,
                     const IntegrateOptions& opts) {
  return run<QuadSnap>(quad_eval(h, psi0.dim()), psi0, grid, opts);
}

std::vector<double> uniform_grid(double t0, double t1, std::size_t steps) {
  if (steps < 1) throw GridError("grid needs at least one step");
  std::vector<double> g(steps + 1);
  for (std::size_t k = 0; k <= steps; ++k) g[k] = t0 + (t1 - t0) * double(k) / double(steps);
  g.back() = t1;
  return g;
}

std::vector<double> symmetric_grid(double t_max, std::size_t half_steps) {
  if (half_steps < 1 || !(t_max > 0.0)) throw GridError("symmetric grid needs t_max > 0 and steps >= 1");
  std::vector<double> g(2 * half_steps + 1);
  for (std::size_t k = 0; k <= half_steps; ++k) {
    const double t = t_max * double(k) / double(half_steps);
    g[half_steps + k] = t;
    g[half_steps - k] = -t;
  }
  return g;
}

Trajectory integrate_symmetric(const OperatorFn& h, const FockState& psi0, const std::vector<double>& grid,
                               const IntegrateOptions& opts) {
  return symmetric(h, psi0, grid, opts);
}

Trajectory integrate_symmetric(const QuadraticFn& h, const FockState& psi0, const std::vector<double>& grid,
                               const IntegrateOptions& opts) {
  return symmetric(h, psi0, grid, opts);
}

std::vector<Complex> PhaseTable::at(std::size_t k) const {
  std::vector<Complex> out;
  for (const auto& row : total) out.push_back(row.at(k));
  return out;
}

PhaseTable lr_phase_extract(const BasisFn& basis, const OperatorFn& h, const Metric& m,
                            const std::vector<double>& grid, const PhaseOptions& opts) {
  if (grid.empty()) throw GridError("empty grid");
  if (!(opts.fd_step > 0.0)) throw InvalidParameter("finite-difference step must be positive");
  PhaseTable tab;
  tab.times = grid;
  const double d = opts.fd_step;
  std::size_t count = 0;

  for (std::size_t k = 0; k < grid.size(); ++k) {
    const double t = grid[k];
    const std::vector<FockState> b = basis(t);
    const std::vector<FockState> bp1 = basis(t + d), bm1 = basis(t - d), bp2 = basis(t + 2 * d),
                                 bm2 = basis(t - 2 * d);
    if (k == 0) {
      count = b.size();
      tab.dynamical.assign(count, std::vector<Complex>(grid.size()));
      tab.geometric.assign(count, std::vector<Complex>(grid.size()));
      tab.rates.assign(count, std::vector<Complex>(grid.size()));
    }
    if (b.size() != count) throw InvalidDimension("basis size changed along the grid");
    const Matrix hm = h(t).matrix();
    std::vector<Vector> lv(count), x(count);
    std::vector<Complex> geo_raw(count);
    for (std::size_t n = 0; n < count; ++n) {
      x[n] = b[n].amplitudes();
      Vector dx = (8.0 * (bp1[n].amplitudes() - bm1[n].amplitudes()) -
                   (bp2[n].amplitudes() - bm2[n].amplitudes())) /
                  (12.0 * d);
      Vector hx = hm * x[n];
      lv[n] = hx - I1 * dx;
      Complex dyn, geo;
      if (opts.duals) {
        const std::vector<FockState> du = (*opts.duals)(t);
        const Vector& w = du.at(n).amplitudes();
        const Complex norm = w.dot(x[n]);
        dyn = w.dot(hx) / norm;
        geo = -I1 * w.dot(dx) / norm;
      } else {
        const Complex norm = pseudo_inner(x[n], x[n], m);
        dyn = pseudo_inner(x[n], hx, m) / norm;
        geo = -I1 * pseudo_inner(x[n], dx, m) / norm;
      }
      tab.dynamical[n][k] = dyn;
      tab.geometric[n][k] = geo;
      tab.rates[n][k] = dyn + geo;
    }
    if (!opts.duals) {
      for (std::size_t i = 0; i < count; ++i)
        for (std::size_t j = 0; j < count; ++j)
          if (i != j) tab.max_offdiag = std::max(tab.max_offdiag, std::abs(pseudo_inner(x[i], lv[j], m)));
    }
  }
  if (opts.check_offdiag && !opts.duals && tab.max_offdiag > opts.offdiag_tol)
    throw NotInvariantBasis("off-diagonal element " + std::to_string(tab.max_offdiag) + " exceeds tolerance");
  accumulate(tab);
  return tab;
}

PhaseTable lr_phase_extract(const std::vector<Trajectory>& basis, const OperatorFn& h, const Metric& m) {
  if (basis.empty()) throw InvalidDimension("empty basis");
  const auto& grid = basis.front().times;
  if (grid.size() < 3) throw GridError("need at least 3 grid points");
  for (const auto& b : basis)
    if (b.times != grid || b.states.size() != grid.size()) throw GridError("basis trajectories on different grids");
  const std::size_t count = basis.size();
  PhaseTable tab;
  tab.times = grid;
  tab.dynamical.assign(count, std::vector<Complex>(grid.size()));
  tab.geometric.assign(count, std::vector<Complex>(grid.size()));
  tab.rates.assign(count, std::vector<Complex>(grid.size()));

  std::vector<std::vector<Vector>> series(count);
  for (std::size_t n = 0; n < count; ++n)
    for (const auto& s : basis[n].states) series[n].push_back(s.amplitudes());

  for (std::size_t k = 0; k < grid.size(); ++k) {
    const Matrix hm = h(grid[k]).matrix();
    std::vector<Vector> x(count), lv(count);
    for (std::size_t n = 0; n < count; ++n) {
      x[n] = series[n][k];
      Vector dx = three_point_derivative(grid, series[n], k);
      Vector hx = hm * x[n];
      lv[n] = hx - I1 * dx;
      const Complex norm = pseudo_inner(x[n], x[n], m);
      tab.dynamical[n][k] = pseudo_inner(x[n], hx, m) / norm;
      tab.geometric[n][k] = -I1 * pseudo_inner(x[n], dx, m) / norm;
      tab.rates[n][k] = tab.dynamical[n][k] + tab.geometric[n][k];
    }
    for (std::size_t i = 0; i < count; ++i)
      for (std::size_t j = 0; j < count; ++j)
        if (i != j) tab.max_offdiag = std::max(tab.max_offdiag, std::abs(pseudo_inner(x[i], lv[j], m)));
  }
  accumulate(tab);
  return tab;
}

std::vector<Complex> projection_coefficients(const std::vector<FockState>& basis0, const FockState& psi0,
                                             const Metric& m, double tol) {
  std::vector<Complex> c;
  Vector rest = psi0.amplitudes();
  for (const auto& b : basis0) {
    c.push_back(pseudo_inner(b, psi0, m));
    rest -= c.back() * b.amplitudes();
  }
  const double deficit = std::sqrt(std::abs(pseudo_inner(rest, rest, m)));
  if (deficit > tol) throw IncompleteBasis("projection deficit " + std::to_string(deficit));
  return c;
}

FockState assemble_solution(const std::vector<Complex>& coeffs, const std::vector<Complex>& phases,
                            const BasisFn& basis, double t) {
  const std::vector<FockState> b = basis(t);
  if (coeffs.size() > b.size() || phases.size() < coeffs.size())
    throw DimensionMismatch("coefficients, phases and basis differ in length");
  Vector out = Vector::Zero(b.front().dim());
  for (std::size_t n = 0; n < coeffs.size(); ++n)
    out += coeffs[n] * std::exp(-I1 * phases[n]) * b[n].amplitudes();
  return FockState(std::move(out));
}

double phase_parity_check(const PhaseTable& phases) {
  const auto& t = phases.times;
  const std::size_t nk = t.size();
  double scale = 1.0;
  for (double x : t) scale = std::max(scale, std::abs(x));
  for (std::size_t k = 0; k < nk; ++k)
    if (std::abs(t[k] + t[nk - 1 - k]) > 1e-12 * scale) throw GridError("grid is not symmetric about 0");
  double worst = 0.0;
  for (const auto& row : phases.total)
    for (std::size_t k = 0; k < nk; ++k) worst = std::max(worst, std::abs(std::conj(row[nk - 1 - k]) + row[k]));
  return worst;
}

double max_imag_phase(const PhaseTable& phases) {
  double worst = 0.0;
  for (const auto& row : phases.total)
    for (Complex a : row) worst = std::max(worst, std::abs(a.imag()));
  return worst;
}

}  // namespace ptdyn
