#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <thread>
#include <variant>

#include "json.hpp"

#include "ptdyn/cli.hpp"
#include "ptdyn/dynamics.hpp"
#include "ptdyn/observables.hpp"
#include "ptdyn/symmetry_engine.hpp"

namespace ptdyn::cli {

namespace {

using json = nlohmann::ordered_json;
using Cell = std::variant<double, long, std::string>;

std::string g17(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

json config_json(const RunConfig& c) {
  json j;
  j["omega0"] = c.omega0;
  j["kappa"] = c.kappa;
  j["epsilon"] = c.epsilon;
  j["alpha"] = c.alpha;
  j["beta"] = c.beta;
  j["dim"] = c.dim;
  j["tmax"] = c.tmax;
  j["dt"] = c.dt;
  j["sweep_param"] = c.sweep_param;
  j["sweep_min"] = c.sweep_min;
  j["sweep_max"] = c.sweep_max;
  j["sweep_steps"] = c.sweep_steps;
  j["out"] = c.out;
  j["format"] = c.format;
  j["allow_ep"] = c.allow_ep;
  j["threads"] = c.threads;
  j["corrupt_metric"] = c.corrupt_metric;
  j["mu_sign"] = c.mu_sign;
  return j;
}

struct Table {
  std::string command;
  std::vector<std::pair<std::string, Cell>> meta;
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;
};

std::string cell_text(const Cell& c) {
  if (auto d = std::get_if<double>(&c)) return g17(*d);
  if (auto l = std::get_if<long>(&c)) return std::to_string(*l);
  return std::get<std::string>(c);
}

json cell_json(const Cell& c) {
  if (auto d = std::get_if<double>(&c)) return std::isfinite(*d) ? json(*d) : json(g17(*d));
  if (auto l = std::get_if<long>(&c)) return json(*l);
  return json(std::get<std::string>(c));
}

void add_model_meta(Table& t, const RunConfig& c) {
  const CasimirParams p = params_of(c);
  t.meta.emplace_back("delta", p.delta());
  t.meta.emplace_back("g", p.g());
  t.meta.emplace_back("regime", std::string(regime_name(regime_of(p))));
  for (const auto& w : p.warnings()) t.meta.emplace_back("warning", w);
}

std::string render(const Table& t, const RunConfig& c) {
  if (c.format == "json") {
    json j;
    j["metadata"]["tool"] = kToolVersion;
    j["metadata"]["command"] = t.command;
    j["metadata"]["config"] = config_json(c);
    json extra = json::array();
    for (const auto& [k, v] : t.meta) extra.push_back(json{{"key", k}, {"value", cell_json(v)}});
    j["metadata"]["derived"] = extra;
    j["columns"] = t.columns;
    json rows = json::array();
    for (const auto& r : t.rows) {
      json row = json::array();
      for (const auto& x : r) row.push_back(cell_json(x));
      rows.push_back(std::move(row));
    }
    j["rows"] = std::move(rows);
    return j.dump(1) + "\n";
  }
  std::ostringstream o;
  o << "# tool=" << kToolVersion << "\n# command=" << t.command << "\n";
  std::istringstream cfg(canonical(c));
  std::string line;
  while (std::getline(cfg, line)) o << "# " << line << "\n";
  for (const auto& [k, v] : t.meta) o << "# " << k << "=" << cell_text(v) << "\n";
  for (std::size_t i = 0; i < t.columns.size(); ++i) o << (i ? "," : "") << t.columns[i];
  o << "\n";
  for (const auto& r : t.rows) {
    for (std::size_t i = 0; i < r.size(); ++i) o << (i ? "," : "") << cell_text(r[i]);
    o << "\n";
  }
  return o.str();
}

std::vector<double> time_grid(const RunConfig& c) {
  const auto steps = static_cast<std::size_t>(std::llround(c.tmax / c.dt));
  std::vector<double> g(steps + 1);
  for (std::size_t k = 0; k <= steps; ++k) g[k] = std::min(double(k) * c.dt, c.tmax);
  g.back() = c.tmax;
  return g;
}

CommandResult singular(const std::string& what) {
  return {kSingular, "", what + ": parameters sit on the exceptional point (pass --allow-ep to proceed)"};
}

}  // namespace

CommandResult cmd_spectrum(const RunConfig& c) {
  validate(c);
  const CasimirParams p = params_of(c);
  const Regime reg = regime_of(p);
  if (reg == Regime::ExceptionalPoint && !c.allow_ep) return singular("spectrum");
  Table t;
  t.command = "spectrum";
  add_model_meta(t, c);
  t.columns = {"n", "re_eps", "im_eps", "regime"};
  for (long n = 0; n < c.dim; ++n) {
    const Complex e = reg == Regime::ExceptionalPoint ? Complex(0.0) : closed_form_eigenvalue(p, n);
    t.rows.push_back({n, e.real(), e.imag(), std::string(regime_name(reg))});
  }
  return {kOk, render(t, c), ""};
}

CommandResult cmd_sweep(const RunConfig& c) {
  validate(c);
  if (!(c.sweep_min < c.sweep_max) || c.sweep_steps < 1) throw ConfigError("empty sweep range");
  const SweepParameter which = c.sweep_param == "g" ? SweepParameter::G : SweepParameter::Delta;
  const CasimirParams base = params_of(c);
  const long npts = c.sweep_steps + 1;
  std::vector<double> values(npts);
  for (long k = 0; k < npts; ++k)
    values[k] = k == c.sweep_steps ? c.sweep_max
                                   : c.sweep_min + (c.sweep_max - c.sweep_min) * double(k) / double(c.sweep_steps);
  for (double v : values) {
    try {
      with_parameter(base, which, v).validate();
    } catch (const InvalidParameter& e) {
      throw ConfigError("sweep value " + g17(v) + ": " + e.what());
    }
  }

  const Index levels = std::min<Index>(4, c.dim);
  const std::vector<double> tg = time_grid(c);
  std::vector<std::vector<Cell>> rows(npts);
  auto work = [&](long begin, long end) {
    for (long k = begin; k < end; ++k) {
      const CasimirParams p = with_parameter(base, which, values[k]);
      const Regime reg = regime_of(p);
      std::vector<Cell> row{values[k]};
      for (Index n = 0; n < levels; ++n) {
        const Complex e = closed_form_eigenvalue(p, n);
        row.emplace_back(e.real());
        row.emplace_back(e.imag());
      }
      row.emplace_back(std::string(regime_name(reg)));
      double nmax = 0.0;
      for (double t : tg) nmax = std::max(nmax, photon_closed_form(p, t).N);
      row.emplace_back(nmax);
      rows[k] = std::move(row);
    }
  };
  const long nthreads = std::min<long>(c.threads, npts);
  if (nthreads <= 1) {
    work(0, npts);
  } else {
    std::vector<std::thread> pool;
    const long chunk = (npts + nthreads - 1) / nthreads;
    for (long b = 0; b < npts; b += chunk) pool.emplace_back(work, b, std::min(npts, b + chunk));
    for (auto& th : pool) th.join();
  }

  Table t;
  t.command = "sweep";
  add_model_meta(t, c);
  const bool lo = mode_spectrum_complex(with_parameter(base, which, c.sweep_min));
  const bool hi = mode_spectrum_complex(with_parameter(base, which, c.sweep_max));
  if (lo != hi) {
    const EpLocation ep = locate_exceptional_point(base, which, c.sweep_min, c.sweep_max, 1e-10);
    t.meta.emplace_back("ep", ep.value);
    t.meta.emplace_back("ep_eigenvector_overlap", ep.eigenvector_overlap);
  } else {
    t.meta.emplace_back("ep", std::string("none"));
  }
  t.columns = {"sweep_value"};
  for (Index n = 0; n < levels; ++n) {
    t.columns.push_back("re_eps" + std::to_string(n));
    t.columns.push_back("im_eps" + std::to_string(n));
  }
  t.columns.push_back("regime");
  t.columns.push_back("N_max");
  t.rows = std::move(rows);
  return {kOk, render(t, c), ""};
}

CommandResult cmd_evolve(const RunConfig& c) {
  validate(c);
  const CasimirParams p = params_of(c);
  const Regime reg = regime_of(p);
  if (reg == Regime::ExceptionalPoint && !c.allow_ep) return singular("evolve");
  const Index dim = c.dim;
  const std::vector<double> grid = time_grid(c);
  const double nan = std::numeric_limits<double>::quiet_NaN();

  const std::vector<PhotonRecord> ode = photon_ode_solve(p, grid);

  IntegrateOptions io;
  io.rho_diagonal = metric_diagonal(p, dim);
  const Trajectory traj =
      integrate(QuadraticFn([&p](double t) { return hamiltonian_form(p, t); }), FockState::basis(dim, 0), grid, io);

  std::vector<Complex> alpha0(grid.size(), Complex(nan, nan));
  if (reg != Regime::ExceptionalPoint) {
    const SpectralResult s = spectral_solve(p, dim);
    const OperatorFn h = [&p, dim](double t) { return rwa_lab_hamiltonian(p, t, dim); };
    const BasisFn basis = [&s](double t) { return s.eigenvectors(t, 1); };
    PhaseOptions po;
    po.check_offdiag = false;
    if (reg == Regime::Broken) po.duals = BasisFn([&s](double t) { return std::vector<FockState>{s.reference(0, t)}; });
    const PhaseTable tab = lr_phase_extract(basis, h, casimir_metric(p, dim), grid, po);
    for (std::size_t k = 0; k < grid.size(); ++k) alpha0[k] = tab.total[0][k];
  }

  Table t;
  t.command = "evolve";
  add_model_meta(t, c);
  t.meta.emplace_back("oscillation_amplitude", reg == Regime::Unbroken ? oscillation_amplitude(p) : nan);
  if (ode.size() < grid.size()) t.meta.emplace_back("photon_cap_reached_at", grid[ode.size()]);
  if (!traj.complete()) t.meta.emplace_back("state_integration", traj.message);
  t.columns = {"t", "N_ode", "N_closed", "norm_rho", "var_Y1", "var_Y2", "phase_alpha0_re", "phase_alpha0_im"};
  for (std::size_t k = 0; k < grid.size(); ++k) {
    const double tk = grid[k];
    double n_ode = nan, vy1 = nan, vy2 = nan;
    if (k < ode.size()) {
      n_ode = ode[k].N;
      Moments m;
      m.N = ode[k].N;
      m.A = ode[k].A;
      m.B = ode[k].B;
      const QuadratureRecord q = quadrature_from_moments(p, tk, m, Frame::Rotating);
      vy1 = q.var_Y1;
      vy2 = q.var_Y2;
    }
    const double norm = k < traj.size() ? traj.rho_norms[k] : nan;
    t.rows.push_back({tk, n_ode, photon_closed_form(p, tk).N, norm, vy1, vy2, alpha0[k].real(), alpha0[k].imag()});
  }
  return {kOk, render(t, c), ""};
}

namespace {

enum class Expect { Pass, Fail, Info };

struct Check {
  std::string name;
  double residual = 0.0;
  double tolerance = 0.0;
  std::string status;
  std::string note;
  json extra = json::object();
};

Check make_check(std::string name, double residual, double tol, Expect e, std::string note = "") {
  Check k{std::move(name), residual, tol, "", std::move(note)};
  const bool ok = std::isfinite(residual) && residual <= tol;
  switch (e) {
    case Expect::Pass: k.status = ok ? "pass" : "fail"; break;
    case Expect::Fail: k.status = ok ? "unexpected_pass" : "expected_fail"; break;
    case Expect::Info: k.status = "info"; break;
  }
  return k;
}

Check skipped(std::string name, std::string note) {
  Check k{std::move(name), std::numeric_limits<double>::quiet_NaN(), 0.0, "skipped", std::move(note)};
  return k;
}

}  // namespace

CommandResult cmd_verify(const RunConfig& c) {
  validate(c);
  const CasimirParams p = params_of(c);
  const Regime reg = regime_of(p);
  if (reg == Regime::ExceptionalPoint && !c.allow_ep) return singular("verify");
  const Index dim = c.dim;
  const Index lv = trusted_levels(dim);
  const Index nlev = std::min<Index>(9, dim / 4 + 1);
  const Metric m = c.corrupt_metric ? Metric::identity(dim) : casimir_metric(p, dim);
  const std::vector<double> times{0.37, 1.1, 2.3};
  const double dt = 1e-5;
  const bool unbroken = reg == Regime::Unbroken;
  const Expect regime_expect = unbroken ? Expect::Pass : Expect::Fail;

  const OperatorFn h_full = [&p, dim](double t) { return hamiltonian(p, t, dim); };
  const OperatorFn h_rwa = [&p, dim](double t) { return rwa_lab_hamiltonian(p, t, dim); };
  const AntilinearFn pt = [dim](double) { return parity_time(dim); };

  std::vector<Check> checks;
  auto max_over = [&](auto&& f) {
    double w = 0.0;
    for (double t : times) w = std::max(w, f(t));
    return w;
  };

  checks.push_back(make_check("pseudo_hermiticity",
                              max_over([&](double t) { return pseudo_hermiticity_residual(h_full, m, t, lv); }), 1e-10,
                              Expect::Pass));
  {
    const DysonMap d = DysonMap::from_metric(m);
    const FockOperator zero = FockOperator::zero(dim);
    const double r = max_over([&](double t) {
      const Matrix hm = hermitian_counterpart(h_full, d, zero, t).matrix();
      return block_residual(hm - hm.adjoint(), hm, lv);
    });
    checks.push_back(make_check("hermitian_counterpart", r, 1e-8, Expect::Pass));
  }
  checks.push_back(make_check("pt_symmetry",
                              max_over([&](double t) { return antilinear_symmetry_residual(pt, h_full, t, 1e-4, lv); }),
                              1e-6, Expect::Pass));

  // rotating Fock states: smooth, rho-orthogonal tests in every regime
  std::vector<StateFn> tests;
  for (Index n = 0; n < std::min<Index>(4, dim); ++n)
    tests.push_back([&p, dim, n](double t) {
      FockState e = FockState::basis(dim, n);
      return std::polar(1.0, -xi_phase(p, t) * (double(n) + 0.5)) * e;
    });
  {
    std::vector<double> grid{-times[2], -times[1], -times[0], 0.0, times[0], times[1], times[2]};
    checks.push_back(make_check("schrodinger_symmetry", schrodinger_symmetry_residual(pt, h_full, tests, grid, dt),
                                1e-6, Expect::Pass));
  }

  std::optional<SpectralResult> sol;
  if (reg != Regime::ExceptionalPoint) sol.emplace(spectral_solve(p, dim));

  {
    std::vector<StateFn> ph_tests = tests;
    if (unbroken) {
      ph_tests.clear();
      for (Index n = 0; n < std::min<Index>(4, dim); ++n)
        ph_tests.push_back([&sol, n](double t) { return sol->eigenvector(n, t); });
    }
    const double r = max_over([&](double t) {
      std::vector<Trajectory> trs;
      for (const auto& f : ph_tests) {
        Trajectory tr;
        tr.times = {t - 0.1 * dt, t, t + 0.1 * dt};
        for (double s : tr.times) tr.states.push_back(f(s));
        trs.push_back(std::move(tr));
      }
      return schrodinger_op_pseudo_hermiticity_residual(h_full, m, trs);
    });
    checks.push_back(make_check("schrodinger_pseudo_hermiticity", r, 1e-6, Expect::Pass));
  }

  if (sol) {
    double w = 0.0;
    for (Index n = 0; n < nlev; ++n)
      for (double t : times) w = std::max(w, parity_eigenvector_residual(*sol, n, t));
    checks.push_back(make_check("parity_eigenvectors", w, 1e-6, regime_expect));

    const SymmetryVerdict v = classify_casimir(p, dim, times, nlev, 1e-6);
    double res = v.unbroken_residuals.empty() ? std::numeric_limits<double>::infinity() : 0.0;
    for (double x : v.unbroken_residuals) res = std::max(res, x);
    if (v.regime != Regime::Unbroken) res = std::max(res, 1.0);
    Check k = make_check("shared_eigenvectors", res, 1e-6, regime_expect);
    k.extra["classified_regime"] = regime_name(v.regime);
    k.extra["pairing_error"] = v.pairing_error;
    checks.push_back(k);
  } else {
    checks.push_back(skipped("parity_eigenvectors", "no eigenbasis at the exceptional point"));
    checks.push_back(skipped("shared_eigenvectors", "no eigenbasis at the exceptional point"));
  }

  if (unbroken) {
    // S and C are built by padded exponentiation and cropped; only the leading quarter is converged
    const Index cw = std::max<Index>(2, dim / 4);
    checks.push_back(make_check("pseudo_unitarity", pseudo_unitarity_residual(sol->squeeze(), m, cw), 1e-6,
                                Expect::Pass));

    const COperatorFactory cf(p, dim, 4, c.mu_sign);
    const AntilinearFn cpt = [&cf](double t) { return cf.cpt(t); };
    checks.push_back(make_check(
        "cpt_symmetry", max_over([&](double t) { return antilinear_symmetry_residual(cpt, h_rwa, t, 1e-4, cw); }),
        1e-6, Expect::Pass, "reduced lab-frame Hamiltonian"));
    checks.push_back(make_check(
        "cpt_symmetry_full", max_over([&](double t) { return antilinear_symmetry_residual(cpt, h_full, t, 1e-4, cw); }),
        1e-6, Expect::Info, "full Hamiltonian; not required"));

    const InvariantFactory inv(p, dim);
    const LRInvariant li{[&inv](double t) { return inv.at(t); }};
    checks.push_back(make_check("lr_invariant",
                                max_over([&](double t) { return linear_invariant_residual(li, h_rwa, t, 1e-4, cw); }),
                                1e-6, Expect::Pass));

    checks.push_back(make_check(
        "antilinear_metric",
        max_over([&](double t) { return antilinear_metric_residual(p, t, 1e-4, dim, c.mu_sign, cw); }), 1e-6,
        Expect::Pass));

    // CPT |n,t> = lambda |n,-t>, lambda measured from the rho-overlap
    double res = 0.0, res_one = 0.0, sq = 0.0;
    Complex lambda0;
    for (Index n = 0; n < nlev; ++n) {
      for (double t : times) {
        const AntilinearOperator op = cf.cpt(t);
        const FockState u = sol->eigenvector(n, t);
        const FockState w = sol->eigenvector(n, -t);
        const Vector cu = apply_antilinear(op, u).amplitudes();
        const Complex lam = pseudo_inner(w.amplitudes(), cu, m) / pseudo_inner(w.amplitudes(), w.amplitudes(), m);
        if (n == 0 && t == times[0]) lambda0 = lam;
        const double scale = u.norm();
        res = std::max(res, (cu - lam * w.amplitudes()).norm() / scale);
        res_one = std::max(res_one, (cu - w.amplitudes()).norm() / scale);
        const Vector back = apply_antilinear(cf.cpt(-t), FockState(cu)).amplitudes();
        sq = std::max(sq, (back - u.amplitudes()).norm() / scale);
      }
    }
    Check k = make_check("cpt_eigenvectors", res, 1e-6, Expect::Pass);
    k.extra["lambda_re"] = lambda0.real();
    k.extra["lambda_im"] = lambda0.imag();
    checks.push_back(k);
    checks.push_back(make_check("cpt_eigenvectors_unit_eigenvalue", res_one, 1e-6, Expect::Info,
                                "eigenvalue fixed to +1; measured value is reported by cpt_eigenvectors"));
    checks.push_back(make_check("cpt_square", sq, 1e-6, Expect::Pass));
  } else {
    for (const char* name : {"pseudo_unitarity", "cpt_symmetry", "lr_invariant", "antilinear_metric",
                             "cpt_eigenvectors", "cpt_square"})
      checks.push_back(skipped(name, "defined through a real squeezing strength; unbroken regime only"));
  }

  if (sol) {
    const std::vector<double> grid = symmetric_grid(times[1], 22);
    const Index nph = std::min<Index>(5, dim / 4 + 1);
    const BasisFn basis = [&sol, nph](double t) { return sol->eigenvectors(t, nph); };
    PhaseOptions po;
    po.check_offdiag = false;
    if (!unbroken)
      po.duals = BasisFn([&sol, nph](double t) {
        std::vector<FockState> o;
        for (Index n = 0; n < nph; ++n) o.push_back(sol->reference(n, t));
        return o;
      });
    const PhaseTable tab = lr_phase_extract(basis, h_rwa, m, grid, po);
    checks.push_back(make_check("phase_parity", phase_parity_check(tab), 1e-6, regime_expect));
    checks.push_back(make_check("phase_reality", max_imag_phase(tab), 1e-8, regime_expect));
    if (unbroken) checks.push_back(make_check("basis_orthogonality", tab.max_offdiag, 1e-6, Expect::Pass));
  } else {
    checks.push_back(skipped("phase_parity", "no eigenbasis at the exceptional point"));
    checks.push_back(skipped("phase_reality", "no eigenbasis at the exceptional point"));
  }

  {
    IntegrateOptions io;
    io.rho_diagonal = m.rho().matrix().diagonal();
    const Trajectory tr = integrate(QuadraticFn([&p](double t) { return hamiltonian_form(p, t); }),
                                    FockState::basis(dim, 0), uniform_grid(0.0, c.tmax, 20), io);
    double w = tr.complete() ? 0.0 : std::numeric_limits<double>::infinity();
    for (double x : tr.rho_norms) w = std::max(w, std::abs(x - 1.0));
    checks.push_back(make_check("norm_conservation", w, 1e-8, Expect::Pass));
  }

  bool failed = false;
  json report;
  report["tool"] = kToolVersion;
  report["command"] = "verify";
  report["config"] = config_json(c);
  report["delta"] = p.delta();
  report["g"] = p.g();
  report["regime"] = regime_name(reg);
  json arr = json::array();
  for (const auto& k : checks) {
    failed = failed || k.status == "fail" || k.status == "unexpected_pass";
    json j;
    j["name"] = k.name;
    j["residual"] = std::isfinite(k.residual) ? json(k.residual) : json(g17(k.residual));
    j["tolerance"] = k.tolerance;
    j["status"] = k.status;
    if (!k.note.empty()) j["note"] = k.note;
    for (auto it = k.extra.begin(); it != k.extra.end(); ++it) j[it.key()] = it.value();
    arr.push_back(std::move(j));
  }
  report["checks"] = std::move(arr);
  report["passed"] = !failed;
  return {failed ? kVerifyFailed : kOk, report.dump(1) + "\n", failed ? "verification failed" : ""};
}

CommandResult run_command(const std::string& name, const RunConfig& c) {
  try {
    if (name == "spectrum") return cmd_spectrum(c);
    if (name == "sweep") return cmd_sweep(c);
    if (name == "evolve") return cmd_evolve(c);
    if (name == "verify") return cmd_verify(c);
    return {kConfigError, "", "unknown command '" + name + "'"};
  } catch (const ConfigError& e) {
    return {kConfigError, "", e.what()};
  } catch (const ExceptionalPointError& e) {
    return {kSingular, "", e.what()};
  }
}

}  // namespace ptdyn::cli
