#include "ptdyn/observables.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace ptdyn {

namespace {

// sin(Omega t)/Omega and (1 - cos(Omega t))/Omega^2 as functions of w = Omega^2, continued through w <= 0
void kernels(double w, double t, double& s1, double& c1) {
  const double x = w * t * t;
  if (std::abs(x) < 1e-6) {
    s1 = t * (1.0 - x / 6.0 + x * x / 120.0);
    c1 = 0.5 * t * t * (1.0 - x / 12.0 + x * x / 360.0);
  } else if (w > 0.0) {
    const double o = std::sqrt(w);
    const double sh = std::sin(0.5 * o * t);
    s1 = std::sin(o * t) / o;
    c1 = 2.0 * sh * sh / w;
  } else {
    const double q = std::sqrt(-w);
    const double sh = std::sinh(0.5 * q * t);
    s1 = std::sinh(q * t) / q;
    c1 = 2.0 * sh * sh / (q * q);
  }
}

using State3 = Eigen::Vector3cd;

State3 photon_rhs(const CasimirParams& p, const State3& y) {
  const double g = p.g(), d = p.delta();
  State3 f;
  f(0) = -I1 * 2.0 * g * (p.beta * y(1) - p.alpha * y(2));
  f(1) = -I1 * (2.0 * d * y(1) - 4.0 * p.alpha * g * (y(0) + 0.5));
  f(2) = -I1 * (-2.0 * d * y(2) + 4.0 * p.beta * g * (y(0) + 0.5));
  return f;
}

}  // namespace

std::vector<PhotonRecord> photon_ode_solve(const CasimirParams& p, const std::vector<double>& grid,
                                           const PhotonOdeOptions& opts) {
  if (grid.empty()) throw GridError("empty grid");
  for (std::size_t k = 1; k < grid.size(); ++k)
    if (!(grid[k] > grid[k - 1])) throw GridError("grid must be increasing");
  const double g = p.g();
  const double scale = std::max({2.0 * std::abs(p.delta()), 4.0 * g * std::max(p.alpha, p.beta),
                                 std::sqrt(std::abs(p.omega_sq())), 1e-12});
  const double hmax = opts.max_step / scale;

  std::vector<PhotonRecord> out;
  State3 y = State3::Zero();
  double t = 0.0;
  auto advance = [&](double t_end) {
    const double span = t_end - t;
    if (span == 0.0) return;
    const int n = std::max(1, int(std::ceil(std::abs(span) / hmax)));
    const double h = span / n;
    for (int j = 0; j < n; ++j) {
      State3 k1 = photon_rhs(p, y);
      State3 k2 = photon_rhs(p, y + 0.5 * h * k1);
      State3 k3 = photon_rhs(p, y + 0.5 * h * k2);
      State3 k4 = photon_rhs(p, y + h * k3);
      y += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    }
    t = t_end;
  };
  for (double tk : grid) {
    advance(tk);
    if (!y.allFinite() || std::abs(y(0)) > opts.cap) break;
    out.push_back({tk, y(0).real(), y(1), y(2)});
  }
  return out;
}

PhotonRecord photon_closed_form(const CasimirParams& p, double t) {
  const double g = p.g(), d = p.delta();
  double s1, c1;
  kernels(p.omega_sq(), t, s1, c1);
  PhotonRecord r;
  r.t = t;
  r.N = 8.0 * g * g * p.alpha * p.beta * c1;
  r.A = 2.0 * p.alpha * g * Complex(2.0 * d * c1, s1);
  r.B = 2.0 * p.beta * g * Complex(2.0 * d * c1, -s1);
  return r;
}

double photon_second_order_residual(const std::vector<PhotonRecord>& records, const CasimirParams& p) {
  if (records.size() < 5) throw GridError("need at least 5 records");
  const double dt = records[1].t - records[0].t;
  if (!(dt > 0.0)) throw GridError("records must be increasing in time");
  for (std::size_t k = 1; k < records.size(); ++k)
    if (std::abs(records[k].t - records[k - 1].t - dt) > 1e-9 * std::max(1.0, std::abs(records[k].t)))
      throw GridError("records must lie on a uniform grid");
  const double g = p.g();
  const double rhs = 8.0 * g * g * p.alpha * p.beta;
  double worst = 0.0;
  for (std::size_t k = 1; k + 1 < records.size(); ++k) {
    const double nd = (records[k + 1].N - 2.0 * records[k].N + records[k - 1].N) / (dt * dt);
    worst = std::max(worst, std::abs(nd + p.omega_sq() * records[k].N - rhs));
  }
  return worst;
}

double constant_of_motion(const PhotonRecord& r, const CasimirParams& p) {
  const double d = p.delta();
  if (!(d > 0.0)) throw InvalidParameter("constant of motion needs Delta > 0");
  return r.N - (p.g() * (p.alpha * r.B + p.beta * r.A) / d).real();
}

double oscillation_amplitude(const CasimirParams& p) {
  const double g = p.g();
  return 16.0 * g * g * p.alpha * p.beta / p.omega_sq();
}

bool in_amplitude_band(const CasimirParams& p) {
  const double g = p.g(), d2 = p.delta() * p.delta();
  const double c = g * g * p.alpha * p.beta;
  return 4.0 * c < d2 && d2 <= 8.0 * c;
}

Moments state_moments(const Vector& psi, const Vector& rho_diag) {
  const Index dim = psi.size();
  if (rho_diag.size() != dim) throw DimensionMismatch("state vs metric");
  Moments m;
  Complex norm = 0.0, n = 0.0;
  for (Index k = 0; k < dim; ++k) {
    const Complex w = std::conj(psi(k)) * rho_diag(k);
    norm += w * psi(k);
    n += w * double(k) * psi(k);
    if (k + 1 < dim) m.a += w * std::sqrt(double(k + 1)) * psi(k + 1);
    if (k >= 1) m.a_dag += w * std::sqrt(double(k)) * psi(k - 1);
    if (k + 2 < dim) m.A += w * std::sqrt(double(k + 1) * double(k + 2)) * psi(k + 2);
    if (k >= 2) m.B += w * std::sqrt(double(k) * double(k - 1)) * psi(k - 2);
  }
  m.N = (n / norm).real();
  m.a /= norm;
  m.a_dag /= norm;
  m.A /= norm;
  m.B /= norm;
  return m;
}

QuadratureRecord quadrature_from_moments(const CasimirParams& p, double t, const Moments& m, Frame frame) {
  Complex a = m.a, ad = m.a_dag, A = m.A, B = m.B;
  if (frame == Frame::Rotating) {
    const Complex ph = std::polar(1.0, -0.5 * p.kappa * t);
    a *= ph;
    ad *= std::conj(ph);
    A *= ph * ph;
    B *= std::conj(ph * ph);
  }
  const double c2 = std::sqrt(p.beta / p.alpha);
  const double c = std::sqrt(c2);
  QuadratureRecord q;
  q.t = t;
  q.mean_X1 = (0.5 * (c * a + ad / c)).real();
  q.mean_X2 = ((c * a - ad / c) / (2.0 * I1)).real();
  const double x1sq = (0.25 * (c2 * A + B / c2 + 2.0 * m.N + 1.0)).real();
  const double x2sq = (0.25 * (2.0 * m.N + 1.0 - c2 * A - B / c2)).real();
  const double sym = ((c2 * A - B / c2) / (4.0 * I1)).real();
  q.var_X1 = x1sq - q.mean_X1 * q.mean_X1;
  q.var_X2 = x2sq - q.mean_X2 * q.mean_X2;
  q.cov_X = sym - q.mean_X1 * q.mean_X2;
  const double th = 0.5 * (0.5 * std::numbers::pi - p.kappa * t);
  const double cs = std::cos(th), sn = std::sin(th);
  q.var_Y1 = cs * cs * q.var_X1 + sn * sn * q.var_X2 + 2.0 * sn * cs * q.cov_X;
  q.var_Y2 = sn * sn * q.var_X1 + cs * cs * q.var_X2 - 2.0 * sn * cs * q.cov_X;
  q.squeeze_degree = 0.25 * std::log(q.var_Y1 / q.var_Y2);
  return q;
}

QuadratureRecord quadrature_closed_form(const CasimirParams& p, double t) {
  const PhotonRecord r = photon_closed_form(p, t);
  Moments m;
  m.N = r.N;
  m.A = r.A;
  m.B = r.B;
  return quadrature_from_moments(p, t, m, Frame::Rotating);
}

std::vector<QuadratureRecord> quadrature_stats(const Trajectory& traj, const CasimirParams& p,
                                               const Vector& rho_diag, Frame frame) {
  std::vector<QuadratureRecord> out;
  out.reserve(traj.size());
  for (std::size_t k = 0; k < traj.size(); ++k)
    out.push_back(quadrature_from_moments(p, traj.times[k], state_moments(traj.states[k].amplitudes(), rho_diag), frame));
  return out;
}

}  // namespace ptdyn
