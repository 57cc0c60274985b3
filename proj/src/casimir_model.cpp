#include "ptdyn/casimir_model.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace ptdyn {

const char* regime_name(Regime r) {
  switch (r) {
    case Regime::Unbroken: return "unbroken";
    case Regime::ExceptionalPoint: return "exceptional_point";
    case Regime::Broken: return "broken";
  }
  return "unknown";
}

double CasimirParams::omega_sq() const {
  const double d = delta(), gg = g();
  return 4.0 * (d * d - 4.0 * gg * gg * alpha * beta);
}

Complex CasimirParams::rate() const { return std::sqrt(Complex(0.25 * omega_sq(), 0.0)); }

double CasimirParams::omega_at(double t) const { return omega0 * (1.0 - epsilon * std::cos(kappa * t)); }

double CasimirParams::chi_at(double t) const {
  return omega0 * epsilon * kappa * std::sin(kappa * t) / (4.0 * omega_at(t));
}

void CasimirParams::validate() const {
  auto finite = [](double x) { return std::isfinite(x); };
  if (!finite(omega0) || !finite(kappa) || !finite(epsilon) || !finite(alpha) || !finite(beta))
    throw InvalidParameter("parameters must be finite");
  if (!(omega0 > 0.0)) throw InvalidParameter("omega0 must be positive");
  if (!(kappa > 0.0)) throw InvalidParameter("kappa must be positive");
  if (!(epsilon >= 0.0 && epsilon < 1.0)) throw InvalidParameter("epsilon must lie in [0, 1)");
  if (!(alpha >= 0.0) || !(beta >= 0.0)) throw InvalidParameter("alpha and beta must be non-negative");
  if (!(delta() >= 0.0)) throw InvalidParameter("detuning omega0 - kappa/2 must be non-negative");
}

std::vector<std::string> CasimirParams::warnings() const {
  std::vector<std::string> w;
  if (epsilon > 0.1) w.push_back("epsilon > 0.1: modulation is not small");
  if (alpha == 0.0 || beta == 0.0) w.push_back("alpha or beta is zero: no positive-definite metric");
  return w;
}

CasimirParams CasimirParams::from_rwa(double delta, double g, double alpha, double beta, double epsilon) {
  CasimirParams p;
  p.alpha = alpha;
  p.beta = beta;
  if (g > 0.0) {
    p.epsilon = epsilon;
    p.kappa = 8.0 * g / epsilon;
  } else {
    p.epsilon = 0.0;
    p.kappa = 2.0;
  }
  p.omega0 = delta + 0.5 * p.kappa;
  return p;
}

CasimirParams CasimirParams::with_g(double gval) const {
  CasimirParams p = *this;
  p.epsilon = 8.0 * gval / kappa;
  return p;
}

CasimirParams CasimirParams::with_delta(double d) const {
  CasimirParams p = *this;
  p.omega0 = d + 0.5 * kappa;
  return p;
}

Regime regime_of(const CasimirParams& p, double tol) {
  const double gg = p.g();
  if (gg == 0.0) return Regime::Unbroken;
  const double c = 2.0 * gg * std::sqrt(p.alpha * p.beta);
  const double d = p.delta();
  const double scale = std::max({d, c, 1e-300});
  if (std::abs(d - c) <= tol * scale) return Regime::ExceptionalPoint;
  return d > c ? Regime::Unbroken : Regime::Broken;
}

SqueezeParams squeeze_params(const CasimirParams& p) {
  const Regime reg = regime_of(p);
  const double gg = p.g();
  if (gg == 0.0) return {0.0, Regime::Unbroken};
  if (reg == Regime::ExceptionalPoint)
    throw ExceptionalPointError("squeezing strength diverges at Delta = 2 g sqrt(alpha beta)");
  const double d = p.delta();
  const double ab = std::sqrt(p.alpha * p.beta);
  if (ab == 0.0) return {gg / d, reg};
  if (reg == Regime::Unbroken) return {std::atanh(2.0 * gg * ab / d) / (2.0 * ab), reg};
  // principal branch: atanh(x) = atanh(1/x) + i pi/2 for x > 1
  const double inv = d / (2.0 * gg * ab);
  return {Complex(std::atanh(inv), 0.5 * std::numbers::pi) / (2.0 * ab), reg};
}

double xi_phase(const CasimirParams& p, double t) {
  if (t == 0.0) return 0.0;
  return 0.5 * p.kappa * t - p.omega0 * p.epsilon * std::sin(p.kappa * t) / p.kappa;
}

double xi_rate(const CasimirParams& p, double t) { return p.omega_at(t) - p.delta(); }

QuadraticOperator hamiltonian_form(const CasimirParams& p, double t) {
  const double chi = p.chi_at(t);
  return {p.omega_at(t), I1 * chi * p.alpha, -I1 * chi * p.beta};
}

QuadraticOperator interaction_form(const CasimirParams& p, double t) {
  const double chi = p.chi_at(t);
  const Complex ph = std::polar(1.0, 2.0 * xi_phase(p, t));
  return {p.delta(), I1 * chi * p.alpha * ph, -I1 * chi * p.beta * std::conj(ph)};
}

QuadraticOperator rwa_form(const CasimirParams& p) {
  const double gg = p.g();
  return {p.delta(), -gg * p.alpha, -gg * p.beta};
}

QuadraticOperator rwa_lab_form(const CasimirParams& p, double t) {
  const double gg = p.g();
  const Complex ph = std::polar(1.0, 2.0 * xi_phase(p, t));
  return {p.omega_at(t), -gg * p.alpha * std::conj(ph), -gg * p.beta * ph};
}

FockOperator hamiltonian(const CasimirParams& p, double t, Index dim) { return hamiltonian_form(p, t).dense(dim); }

FockOperator interaction_hamiltonian(const CasimirParams& p, double t, Index dim) {
  return interaction_form(p, t).dense(dim);
}

FockOperator rwa_hamiltonian(const CasimirParams& p, Index dim) { return rwa_form(p).dense(dim); }

FockOperator rwa_lab_hamiltonian(const CasimirParams& p, double t, Index dim) {
  return rwa_lab_form(p, t).dense(dim);
}

FockOperator interaction_frame(const CasimirParams& p, double t, Index dim) {
  const double xi = xi_phase(p, t);
  Vector d(dim);
  for (Index n = 0; n < dim; ++n) d(n) = std::polar(1.0, xi * (double(n) + 0.5));
  return FockOperator::diagonal(d);
}

Vector metric_diagonal(const CasimirParams& p, Index dim) {
  if (!(p.alpha > 0.0) || !(p.beta > 0.0)) throw MetricViolation("metric needs alpha > 0 and beta > 0");
  const double l = 0.5 * std::log(p.beta / p.alpha);
  Vector d(dim);
  for (Index n = 0; n < dim; ++n) d(n) = std::exp(l * (double(n) + 0.5));
  return d;
}

Metric casimir_metric(const CasimirParams& p, Index dim) {
  return Metric(FockOperator::diagonal(metric_diagonal(p, dim)));
}

DysonMap casimir_dyson(const CasimirParams& p, Index dim) {
  Vector d = metric_diagonal(p, dim).cwiseSqrt();
  Vector inv = d.cwiseInverse();
  return DysonMap(FockOperator::diagonal(d), FockOperator::diagonal(inv));
}

FockOperator squeeze_operator(const CasimirParams& p, Complex r, Index dim, Index pad) {
  return truncated_exp(QuadraticOperator(0.0, 0.5 * r * p.alpha, -0.5 * r * p.beta), dim, pad);
}

FockOperator squeeze_operator(const CasimirParams& p, Index dim, Index pad) {
  return squeeze_operator(p, squeeze_params(p).r, dim, pad);
}

Eigen::Matrix2cd mode_matrix(const CasimirParams& p) {
  const double gg = p.g(), d = p.delta();
  Eigen::Matrix2cd m;
  m << d, -2.0 * gg * p.alpha, 2.0 * gg * p.beta, -d;
  return m;
}

ModeSpectrum mode_spectrum(const CasimirParams& p) {
  Eigen::ComplexEigenSolver<Eigen::Matrix2cd> es(mode_matrix(p));
  ModeSpectrum out;
  out.eigenvalues = {es.eigenvalues()(0), es.eigenvalues()(1)};
  Eigen::Vector2cd v1 = es.eigenvectors().col(0).normalized();
  Eigen::Vector2cd v2 = es.eigenvectors().col(1).normalized();
  out.eigenvector_overlap = std::abs(v1.dot(v2));
  return out;
}

Complex closed_form_eigenvalue(const CasimirParams& p, Index n) { return p.rate() * (double(n) + 0.5); }

Complex branch_rate(const CasimirParams& p, Complex r) {
  const double ab = std::sqrt(p.alpha * p.beta);
  if (regime_of(p) == Regime::Unbroken) return p.rate();
  const Complex x = 2.0 * ab * r;
  return p.delta() * std::cosh(x) - 2.0 * p.g() * ab * std::sinh(x);
}

SpectralResult::SpectralResult(CasimirParams p, Index dim, SqueezeParams sq, FockOperator s,
                               std::vector<Complex> eigenvalues, double dense_check_error)
    : p_(p), dim_(dim), sq_(sq), s_(std::move(s)), eps_(std::move(eigenvalues)), dense_err_(dense_check_error) {
  rho_diag_ = (p_.alpha > 0.0 && p_.beta > 0.0) ? metric_diagonal(p_, dim_) : Vector::Ones(dim_);
}

FockState SpectralResult::eigenvector(Index n, double t) const {
  if (n < 0 || n >= dim_) throw InvalidDimension("eigenvector index outside truncation");
  const double xi = xi_phase(p_, t);
  Vector v = s_.matrix().col(n) / std::sqrt(rho_diag_(n).real());
  for (Index k = 0; k < dim_; ++k) v(k) *= std::polar(1.0, -xi * (double(k) + 0.5));
  return FockState(std::move(v));
}

std::vector<FockState> SpectralResult::eigenvectors(double t, Index count) const {
  std::vector<FockState> out;
  out.reserve(count);
  for (Index n = 0; n < count; ++n) out.push_back(eigenvector(n, t));
  return out;
}

FockState SpectralResult::reference(Index n, double t) const {
  FockState e = FockState::basis(dim_, n);
  return std::polar(1.0, -xi_phase(p_, t) * (double(n) + 0.5)) * e;
}

SpectralResult spectral_solve(const CasimirParams& p, Index dim, Index pad) {
  const SqueezeParams sq = squeeze_params(p);
  const Complex w = branch_rate(p, sq.r);
  std::vector<Complex> eps(dim);
  for (Index n = 0; n < dim; ++n) eps[n] = w * (double(n) + 0.5);

  double err = 0.0;
  if (sq.regime == Regime::Unbroken) {
    Eigen::ComplexEigenSolver<Matrix> es(rwa_hamiltonian(p, dim).matrix(), false);
    std::vector<Complex> ev(es.eigenvalues().data(), es.eigenvalues().data() + dim);
    std::sort(ev.begin(), ev.end(), [](Complex a, Complex b) { return a.real() < b.real(); });
    for (Index n = 0; n <= dim / 4; ++n) err = std::max(err, std::abs(ev[n] - eps[n]));
  } else {
    // the truncated Fock matrix stays diagonalizable with real spectrum; the pair shows in the mode matrix
    const ModeSpectrum ms = mode_spectrum(p);
    const double e1 = std::abs(ms.eigenvalues[0] - w) + std::abs(ms.eigenvalues[1] + w);
    const double e2 = std::abs(ms.eigenvalues[0] + w) + std::abs(ms.eigenvalues[1] - w);
    err = std::min(e1, e2);
  }
  return SpectralResult(p, dim, sq, squeeze_operator(p, sq.r, dim, pad), std::move(eps), err);
}

}  // namespace ptdyn
