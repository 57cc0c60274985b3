#include "ptdyn/symmetry_engine.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>

namespace ptdyn {

namespace {

double block_norm(const Matrix& m, std::optional<Index> levels) {
  const Index k = std::min(levels.value_or(m.rows()), m.rows());
  return m.topLeftCorner(k, k).norm();
}

void require_symmetric(const std::vector<double>& grid) {
  const std::size_t n = grid.size();
  double scale = 1.0;
  for (double t : grid) scale = std::max(scale, std::abs(t));
  for (std::size_t k = 0; k < n; ++k)
    if (std::abs(grid[k] + grid[n - 1 - k]) > 1e-12 * scale) throw GridError("grid is not symmetric about 0");
}

// E X E^dagger with E = diag(e^{i xi n})
Matrix rotate(const Matrix& x, double xi) {
  const Index d = x.rows();
  Vector e(d);
  for (Index n = 0; n < d; ++n) e(n) = std::polar(1.0, xi * double(n));
  return e.asDiagonal() * x * e.conjugate().asDiagonal();
}

}  // namespace

double antilinear_symmetry_residual(const AntilinearFn& I, const OperatorFn& h, double t, double dt,
                                    std::optional<Index> levels) {
  if (!(dt > 0.0)) throw InvalidParameter("finite-difference step must be positive");
  const Matrix m = I(t).linear_part().matrix();
  const Matrix mdot = (I(t + dt).linear_part().matrix() - I(t - dt).linear_part().matrix()) / (2.0 * dt);
  const Matrix r = I1 * mdot + h(-t).matrix() * m - m * h(t).matrix().conjugate();
  return block_norm(r, levels);
}

double linear_invariant_residual(const LRInvariant& inv, const OperatorFn& h, double t, double dt,
                                 std::optional<Index> levels) {
  if (!(dt > 0.0)) throw InvalidParameter("finite-difference step must be positive");
  const Matrix x = inv.I_fn(t).matrix();
  const Matrix xdot = (inv.I_fn(t + dt).matrix() - inv.I_fn(t - dt).matrix()) / (2.0 * dt);
  const Matrix hm = h(t).matrix();
  const Matrix r = I1 * xdot + x * hm - hm * x;
  return block_norm(r, levels);
}

namespace {

template <class Apply>
double schrodinger_residual(Apply apply, const OperatorFn& h, const std::vector<StateFn>& tests,
                            const std::vector<double>& grid, double dt) {
  if (!(dt > 0.0)) throw InvalidParameter("finite-difference step must be positive");
  require_symmetric(grid);
  double worst = 0.0;
  for (double t : grid) {
    const Matrix hp = h(t).matrix();
    const Matrix hm = h(-t).matrix();
    for (const auto& chi : tests) {
      const Vector c0 = chi(t).amplitudes();
      const Vector cp = chi(t + dt).amplitudes(), cm = chi(t - dt).amplitudes();
      const Vector cdot = (cp - cm) / (2.0 * dt);
      const Vector u0 = apply(t, c0);
      const Vector udot = (apply(t + dt, cp) - apply(t - dt, cm)) / (2.0 * dt);
      const Vector lhs = hm * u0 + I1 * udot;
      const Vector rhs = apply(t, Vector(hp * c0 - I1 * cdot));
      worst = std::max(worst, (lhs - rhs).norm());
    }
  }
  return worst;
}

}  // namespace

double schrodinger_symmetry_residual(const AntilinearFn& I, const OperatorFn& h, const std::vector<StateFn>& tests,
                                     const std::vector<double>& grid, double dt) {
  auto apply = [&](double s, const Vector& v) -> Vector { return I(s).linear_part().matrix() * v.conjugate(); };
  return schrodinger_residual(apply, h, tests, grid, dt);
}

double schrodinger_symmetry_residual(const OperatorFn& I, const OperatorFn& h, const std::vector<StateFn>& tests,
                                     const std::vector<double>& grid, double dt) {
  auto apply = [&](double s, const Vector& v) -> Vector { return I(s).matrix() * v; };
  return schrodinger_residual(apply, h, tests, grid, dt);
}

SymmetryVerdict classify_regime(const std::vector<EigenSample>& data, const AntilinearFn& I, const Metric& m,
                                double tol, double im_tol, std::optional<double> criticality) {
  if (data.empty()) throw GridError("no eigen data");
  double scale = 1.0;
  for (const auto& s : data) scale = std::max(scale, std::abs(s.t));
  auto partner = [&](double t) -> const EigenSample& {
    for (const auto& s : data)
      if (std::abs(s.t + t) <= 1e-12 * scale) return s;
    throw GridError("eigen data lacks the sample at -t for t=" + std::to_string(t));
  };

  SymmetryVerdict v;
  const std::size_t count = data.front().states.size();
  v.unbroken_residuals.assign(count, 0.0);
  v.lambdas.assign(count, 0.0);
  double max_im = 0.0;

  for (std::size_t k = 0; k < data.size(); ++k) {
    const EigenSample& s = data[k];
    const EigenSample& q = partner(s.t);
    if (s.states.size() != count || q.states.size() != count || s.eigenvalues.size() != count ||
        q.eigenvalues.size() != count)
      throw InvalidDimension("eigen samples differ in size");
    const AntilinearOperator it = I(s.t);
    for (std::size_t n = 0; n < count; ++n) {
      max_im = std::max(max_im, std::abs(s.eigenvalues[n].imag()));
      const Vector u = (it * s.states[n]).amplitudes();
      const Vector& w = q.states[n].amplitudes();
      const Complex lambda = pseudo_inner(w, u, m) / pseudo_inner(w, w, m);
      if (k == 0) v.lambdas[n] = lambda;
      v.lambda_drift = std::max(v.lambda_drift, std::abs(lambda - v.lambdas[n]));

      const Vector uh = u / std::sqrt(std::abs(pseudo_inner(u, u, m)));
      const Vector wh = w / std::sqrt(std::abs(pseudo_inner(w, w, m)));
      const Complex ov = pseudo_inner(wh, uh, m);
      const Complex phase = std::abs(ov) > 0.0 ? ov / std::abs(ov) : Complex(1.0);
      const Vector d = uh - phase * wh;
      const double r = std::sqrt(std::abs(pseudo_inner(d, d, m)));
      v.unbroken_residuals[n] = std::max(v.unbroken_residuals[n], r);
      if (k == 0) v.eigenvalue_pairs.emplace_back(s.eigenvalues[n], std::conj(q.eigenvalues[n]));
    }
    for (Complex a : s.eigenvalues) {
      double best = 1e300;
      for (Complex b : q.eigenvalues) best = std::min(best, std::abs(a - std::conj(b)));
      v.pairing_error = std::max(v.pairing_error, best);
    }
  }

  const double max_res = *std::max_element(v.unbroken_residuals.begin(), v.unbroken_residuals.end());
  if (criticality && *criticality <= tol)
    v.regime = Regime::ExceptionalPoint;
  else if (max_im > im_tol)
    v.regime = Regime::Broken;
  else if (max_res <= tol)
    v.regime = Regime::Unbroken;
  else
    v.regime = Regime::Broken;
  return v;
}

CParams c_operator_params(const CasimirParams& p) {
  const double ab = std::sqrt(p.alpha * p.beta);
  const Complex r = squeeze_params(p).r;
  if (ab == 0.0) return {std::numbers::pi, -std::numbers::pi * r};
  const Complex x = 2.0 * ab * r;
  return {std::numbers::pi * std::cosh(x), -std::numbers::pi * std::sinh(x) / (2.0 * ab)};
}

COperatorFactory::COperatorFactory(const CasimirParams& p, Index dim, Index pad, double mu_sign)
    : p_(p), dim_(dim), c_(c_operator_params(p)), c0_(FockOperator::identity(dim)) {
  const Complex mu = mu_sign * c_.mu;
  c0_ = truncated_exp(QuadraticOperator(I1 * c_.phi, -I1 * mu * p.alpha, -I1 * mu * p.beta), dim, pad);
}

FockOperator COperatorFactory::at(double t) const { return FockOperator(rotate(c0_.matrix(), xi_phase(p_, t))); }

AntilinearOperator COperatorFactory::cpt(double t) const { return AntilinearOperator(at(t) * parity(dim_)); }

FockOperator build_C_operator(const CasimirParams& p, double t, Index dim, Index pad) {
  return COperatorFactory(p, dim, pad).at(t);
}

InvariantFactory::InvariantFactory(const CasimirParams& p, Index dim, Index pad)
    : p_(p), dim_(dim), x0_(FockOperator::identity(dim)) {
  const Complex r = squeeze_params(p).r;
  const QuadraticOperator gen(0.0, 0.5 * r * p.alpha, -0.5 * r * p.beta);
  const Index big = dim * pad;
  const Matrix s = matrix_exp(gen.dense(big)).matrix();
  const Matrix sinv = matrix_exp(gen.scaled(-1.0).dense(big)).matrix();
  Vector d(big);
  for (Index n = 0; n < big; ++n) d(n) = (n % 2 == 0) ? I1 : -I1;
  x0_ = crop(FockOperator(s * d.asDiagonal() * sinv), dim);
}

FockOperator InvariantFactory::at(double t) const { return FockOperator(rotate(x0_.matrix(), -xi_phase(p_, t))); }

double antilinear_metric_residual(const CasimirParams& p, double t, double dt, Index dim, double mu_sign,
                                  std::optional<Index> levels, Index pad) {
  if (!(dt > 0.0)) throw InvalidParameter("finite-difference step must be positive");
  const COperatorFactory cf(p, dim, pad, mu_sign);
  const Matrix rho = casimir_metric(p, dim).rho().matrix();
  const Matrix par = parity(dim).matrix();
  auto xi = [&](double s) -> Matrix { return rho * cf.at(s).matrix() * par; };
  const Matrix x = xi(t);
  const Matrix xdot = (xi(t + dt) - xi(t - dt)) / (2.0 * dt);
  const Matrix hp = rwa_lab_hamiltonian(p, t, dim).matrix();
  const Matrix hm = rwa_lab_hamiltonian(p, -t, dim).matrix();
  const Matrix r = I1 * xdot - x * hp.conjugate() + hm.adjoint() * x;
  return block_norm(r, levels);
}

double parity_eigenvector_residual(const SpectralResult& s, Index n, double t) {
  const FockState lhs = parity_time(s.dim()) * s.eigenvector(n, t);
  const double sign = (n % 2 == 0) ? 1.0 : -1.0;
  return (lhs.amplitudes() - sign * s.eigenvector(n, -t).amplitudes()).norm();
}

SymmetryVerdict classify_casimir(const CasimirParams& p, Index dim, const std::vector<double>& times, Index levels,
                                 double tol) {
  const double ab = std::sqrt(p.alpha * p.beta);
  const double c = 2.0 * p.g() * ab;
  const double crit = std::abs(p.delta() - c) / std::max({p.delta(), c, 1e-300});
  if (p.g() > 0.0 && crit <= tol) {
    SymmetryVerdict v;
    v.regime = Regime::ExceptionalPoint;
    v.ep_parameter = ab > 0.0 ? p.delta() / (2.0 * ab) : 0.0;
    return v;
  }

  const SpectralResult s = spectral_solve(p, dim);
  const bool complex_r = s.r().imag() != 0.0;
  std::optional<SpectralResult> other;
  if (complex_r) {
    const SqueezeParams sq{std::conj(s.r()), s.regime_hint()};
    std::vector<Complex> eps;
    for (Complex e : s.eigenvalues()) eps.push_back(std::conj(e));
    other.emplace(p, dim, sq, squeeze_operator(p, sq.r, dim), std::move(eps), s.dense_check_error());
  }

  std::vector<double> ts;
  for (double t : times) {
    ts.push_back(t);
    if (t != 0.0) ts.push_back(-t);
  }
  std::vector<EigenSample> data;
  for (double t : ts) {
    EigenSample e;
    e.t = t;
    for (Index n = 0; n < levels; ++n) {
      e.eigenvalues.push_back(s.eigenvalues()[n]);
      e.states.push_back(s.eigenvector(n, t));
    }
    if (other) {
      for (Index n = 0; n < levels; ++n) {
        e.eigenvalues.push_back(other->eigenvalues()[n]);
        e.states.push_back(other->eigenvector(n, t));
      }
    }
    data.push_back(std::move(e));
  }
  const AntilinearFn pt = [dim](double) { return parity_time(dim); };
  SymmetryVerdict v = classify_regime(data, pt, casimir_metric(p, dim), tol, 1e-8, crit);
  if (v.regime == Regime::ExceptionalPoint) v.ep_parameter = ab > 0.0 ? p.delta() / (2.0 * ab) : 0.0;
  return v;
}

CasimirParams with_parameter(const CasimirParams& p, SweepParameter which, double value) {
  return which == SweepParameter::G ? p.with_g(value) : p.with_delta(value);
}

bool mode_spectrum_complex(const CasimirParams& p) {
  const Eigen::Matrix2cd m = mode_matrix(p);
  const Complex tr = m.trace();
  const Complex det = m.determinant();
  const Complex disc = tr * tr - 4.0 * det;
  // real 2x2 matrix: complex pair iff the discriminant is negative
  return disc.real() < 0.0;
}

EpLocation locate_exceptional_point(const CasimirParams& p, SweepParameter which, double lo, double hi, double tol) {
  if (!(hi > lo)) throw InvalidParameter("empty bracket");
  const bool blo = mode_spectrum_complex(with_parameter(p, which, lo));
  const bool bhi = mode_spectrum_complex(with_parameter(p, which, hi));
  if (blo == bhi) throw InvalidParameter("bracket does not contain a real-to-complex transition");
  EpLocation out;
  while (hi - lo > tol && out.iterations < 200) {
    const double mid = 0.5 * (lo + hi);
    if (mode_spectrum_complex(with_parameter(p, which, mid)) == blo)
      lo = mid;
    else
      hi = mid;
    ++out.iterations;
  }
  out.value = 0.5 * (lo + hi);
  out.eigenvector_overlap = mode_spectrum(with_parameter(p, which, out.value)).eigenvector_overlap;
  return out;
}

}  // namespace ptdyn
