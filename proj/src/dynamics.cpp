#include "msdd/dynamics.hpp"

#include <algorithm>
#include <cmath>

#include "msdd/gauge.hpp"
#include "msdd/operators.hpp"
#include "msdd/rng.hpp"

namespace msdd {

namespace {

bool finite(const State& s) {
  for (int c = 0; c < 3; ++c) {
    if (!s.A[c].allFinite() || !s.Pi[c].allFinite()) return false;
  }
  return s.psi.coeffs().allFinite();
}

RealVectorField total_potential(const State& s, const Model& m) {
  if (m.pump.empty()) return s.A;
  return s.A + m.pump.eval(s.t).A;
}

State axpy(const State& s, const Derivative& k, double h) {
  return State(s.A + h * k.dA, s.Pi + h * k.dPi, s.psi + Complex(h) * k.dpsi, s.t + h);
}

MatterTerms matter_terms(const State& s, const Model& m, bool want_current) {
  MatterOptions opt;
  opt.coulomb = m.params.coulomb;
  opt.want_current = want_current;
  opt.dealias = m.params.dealias;
  return evaluate_matter(s.psi, total_potential(s, m), m.potential, opt);
}

double curl_norm2(const RealVectorField& A) {
  const double n = norm(curl(A), NormKind::L2);
  return n * n;
}

double sq(double x) { return x * x; }

}  // namespace

Derivative rhs(const State& s, const Model& m) {
  if (!finite(s)) throw DivergenceError("non-finite state entering the right-hand side", s.t);
  const Params& p = m.params;
  const MatterTerms mt = matter_terms(s, m, true);
  Derivative d{s.Pi, laplacian(s.A) - p.sigma * s.Pi, s.psi, 0.0};
  d.dPi -= leray_project(mt.current);
  d.dpsi.coeffs() = Complex(-p.eps, -1.0) * mt.H_psi.coeffs() - (p.gamma * mt.energy) * s.psi.coeffs();
  d.dissipation = 2.0 * p.eps * mt.energy + 2.0 * p.gamma * mt.energy * mt.charge;
  if (!std::isfinite(d.dissipation) || !d.dpsi.coeffs().allFinite() || !d.dPi[0].allFinite() ||
      !d.dPi[1].allFinite() || !d.dPi[2].allFinite()) {
    throw DivergenceError("non-finite right-hand side", s.t);
  }
  return d;
}

State step_rk4(const State& s, const Model& m, double dt, double* dissipated) {
  const Derivative k1 = rhs(s, m);
  const Derivative k2 = rhs(axpy(s, k1, 0.5 * dt), m);
  const Derivative k3 = rhs(axpy(s, k2, 0.5 * dt), m);
  const Derivative k4 = rhs(axpy(s, k3, dt), m);
  const double w = dt / 6.0;
  State out(leray_project(s.A + w * (k1.dA + 2.0 * k2.dA + 2.0 * k3.dA + k4.dA)),
            leray_project(s.Pi + w * (k1.dPi + 2.0 * k2.dPi + 2.0 * k3.dPi + k4.dPi)),
            s.psi + Complex(w) * (k1.dpsi + 2.0 * k2.dpsi + 2.0 * k3.dpsi + k4.dpsi), s.t + dt);
  if (dissipated != nullptr) {
    *dissipated += w * (k1.dissipation + 2.0 * k2.dissipation + 2.0 * k3.dissipation + k4.dissipation);
  }
  if (!finite(out)) throw DivergenceError("non-finite state after step", out.t);
  return out;
}

double stability_limit(const BoxDomain& d, const Params& p) {
  const double k2 = d.max_kappa_squared();
  return 0.5 * 2.8 / std::max(0.5 * k2 * (1.0 + p.eps), std::sqrt(k2));
}

const std::vector<std::string>& diagnostics_columns() {
  static const std::vector<std::string> cols{"t",      "Q",       "E",      "Ec",    "H_alt",           "Phi",
                                             "grad_A", "Pi_norm", "psi_H1", "div_A", "boundary_residual", "X_norm2"};
  return cols;
}

std::vector<double> to_values(const DiagnosticsRow& r) {
  return {r.t, r.Q, r.E, r.Ec, r.H_alt, r.Phi, r.grad_A, r.Pi_norm, r.psi_H1, r.div_A, r.boundary_residual,
          r.X_norm2};
}

namespace {

struct Functionals {
  double canonical = 0.0;
  double alternative = 0.0;
  double energy = 0.0;
  double charge = 0.0;
};

Functionals functionals(const State& s, const Model& m) {
  const MatterTerms mt = matter_terms(s, m, false);
  const double field = 0.5 * sq(norm(s.Pi, NormKind::L2)) + 0.5 * curl_norm2(s.A);
  Functionals f;
  f.canonical = field + mt.kinetic + mt.potential + 0.5 * mt.coulomb;
  f.alternative = field + 0.5 * mt.kinetic + 0.5 * mt.potential + 0.25 * mt.coulomb;
  f.energy = mt.energy;
  f.charge = mt.charge;
  return f;
}

double phi_from(const Functionals& f, const State& s, const Model& m) {
  const double base = m.params.phi_uses_paper_hamiltonian ? f.alternative : f.canonical;
  return base + m.params.eta * inner(s.Pi, s.A);
}

}  // namespace

double canonical_energy(const State& s, const Model& m) { return functionals(s, m).canonical; }

double hamiltonian_paper(const State& s, const Model& m) { return functionals(s, m).alternative; }

double lyapunov_phi(const State& s, const Model& m) { return phi_from(functionals(s, m), s, m); }

double state_norm2(const State& s) {
  return sq(norm(s.A, NormKind::H1)) + sq(norm(s.Pi, NormKind::L2)) + sq(norm(s.psi, NormKind::H1));
}

DiagnosticsRow diagnostics(const State& s, const Model& m) {
  const Functionals f = functionals(s, m);
  DiagnosticsRow r;
  r.t = s.t;
  r.Q = f.charge;
  r.E = f.energy;
  r.Ec = f.canonical;
  r.H_alt = f.alternative;
  r.Phi = phi_from(f, s, m);
  r.grad_A = std::sqrt(gradient_norm_squared(s.A));
  r.Pi_norm = norm(s.Pi, NormKind::L2);
  r.psi_H1 = norm(s.psi, NormKind::H1);
  r.div_A = norm(divergence(s.A), NormKind::L2);
  r.boundary_residual = std::max({boundary_residual(s.A), boundary_residual(s.Pi), boundary_residual(s.psi)});
  r.X_norm2 = state_norm2(s);
  return r;
}

RunResult run(const State& initial, const Model& m, int record_every, const SnapshotHook& hook, int snapshot_every) {
  const double dt = m.params.dt;
  const long steps = m.params.T > 0.0 ? std::lround(m.params.T / dt) : 0;
  const int every = std::max(record_every, 1);
  RunResult res(initial);
  double dissipated = 0.0;
  State s = initial;
  try {
    res.rows.push_back(diagnostics(s, m));
    res.dissipated.push_back(0.0);
    if (hook && snapshot_every > 0) hook(s, 0);
    for (long n = 1; n <= steps; ++n) {
      State next = step_rk4(s, m, dt, &dissipated);
      // keep t an exact multiple of dt
      next.t = initial.t + static_cast<double>(n) * dt;
      s = std::move(next);
      if (n % every == 0 || n == steps) {
        res.rows.push_back(diagnostics(s, m));
        res.dissipated.push_back(dissipated);
      }
      if (hook && snapshot_every > 0 && n % snapshot_every == 0) hook(s, n);
    }
  } catch (const DivergenceError& e) {
    res.diverged = true;
    res.diverged_at = e.time();
    res.message = e.what();
  }
  res.final_state = s;
  return res;
}

// ---------------------------------------------------------------------------
// Gradient self-check

namespace {

Eigen::VectorXd pack(const State& s) {
  const Index na = s.A.size(), np = s.psi.coeffs().size();
  Eigen::VectorXd x(2 * na + 2 * np);
  Index o = 0;
  for (const RealVectorField* v : {&s.A, &s.Pi}) {
    for (int c = 0; c < 3; ++c) {
      x.segment(o, (*v)[c].size()) = (*v)[c].matrix();
      o += (*v)[c].size();
    }
  }
  x.segment(o, np) = s.psi.coeffs().real().matrix();
  x.segment(o + np, np) = s.psi.coeffs().imag().matrix();
  return x;
}

State unpack(const State& like, const Eigen::VectorXd& x) {
  State s = like;
  Index o = 0;
  for (RealVectorField* v : {&s.A, &s.Pi}) {
    for (int c = 0; c < 3; ++c) {
      (*v)[c] = x.segment(o, (*v)[c].size()).array();
      o += (*v)[c].size();
    }
  }
  const Index np = s.psi.coeffs().size();
  s.psi.coeffs().real() = x.segment(o, np).array();
  s.psi.coeffs().imag() = x.segment(o + np, np).array();
  return s;
}

/// Directions move A and Pi only inside the divergence-free subspace.
Eigen::VectorXd project_direction(const State& like, const Eigen::VectorXd& d) {
  State s = unpack(like, d);
  s.A = leray_project(s.A);
  s.Pi = leray_project(s.Pi);
  return pack(s);
}

/// dE/dA, dE/dPi and (dE/dRe psi) + i (dE/dIm psi) packed as a State.
State analytic_gradient(const State& s, const Model& m) {
  const MatterTerms mt = matter_terms(s, m, true);
  State g = s;
  g.A = curl(curl(s.A)) + mt.current;
  g.Pi = s.Pi;
  g.psi = Complex(2.0) * mt.H_psi;
  return g;
}

double fd_error(const State& s, const Model& m, const Eigen::VectorXd& grad, double h, int directions,
                std::uint64_t seed) {
  const Eigen::VectorXd x = pack(s);
  NamedStream rng(seed, "grad-check");
  std::vector<Eigen::VectorXd> dirs;
  for (int k = 0; k < directions; ++k) {
    Eigen::VectorXd d(x.size());
    for (Index i = 0; i < d.size(); ++i) d(i) = rng.normal();
    dirs.push_back(project_direction(s, d));
  }
  dirs.push_back(project_direction(s, grad));
  double worst = 0.0;
  for (Eigen::VectorXd d : dirs) {
    const double dn = d.norm();
    if (dn == 0.0) continue;
    d /= dn;
    const double fp = canonical_energy(unpack(s, x + h * d), m);
    const double fm = canonical_energy(unpack(s, x - h * d), m);
    const double fd = (fp - fm) / (2.0 * h);
    const double an = grad.dot(d);
    const double scale = std::max(project_direction(s, grad).norm(), 1e-300);
    worst = std::max(worst, std::abs(fd - an) / scale);
  }
  return worst;
}

/// sum_k ||d_k A||^2 by nodal quadrature of every partial derivative.
double gradient_energy_quadrature(const RealVectorField& A) {
  const BoxDomain& d = A.domain();
  double s = 0.0;
  for (int c = 0; c < 3; ++c) {
    for (int axis = 0; axis < 3; ++axis) {
      const auto [lay, coeffs] = partial_derivative<double>(d, A.layout(c), A[c], axis);
      s += d.cell_volume() * synthesize<double>(d, lay, coeffs).square().sum();
    }
  }
  return s;
}

double relative(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
  return (a - b).norm() / std::max(b.norm(), 1e-300);
}

}  // namespace

double GradCheckReport::max() const { return std::max({quadratic, full, laplacian, rhs_form}); }

GradCheckReport grad_check(const State& s, const Model& m, double step, int directions) {
  GradCheckReport rep;
  const std::uint64_t seed = m.params.seed;

  State quad = s;
  quad.psi.coeffs().setZero();
  rep.quadratic = fd_error(quad, m, pack(analytic_gradient(quad, m)), step, directions, seed);
  rep.full = fd_error(s, m, pack(analytic_gradient(s, m)), step, directions, seed + 1);

  {
    const RealVectorField& A = s.A;
    RealVectorField g = laplacian(A);
    g *= -2.0;
    NamedStream rng(seed, "grad-check-laplacian");
    double worst = 0.0;
    for (int k = 0; k <= directions; ++k) {
      RealVectorField dir(A.domain_ptr(), Basis::MaxwellVector);
      if (k == directions) {
        dir = g;
      } else {
        for (int c = 0; c < 3; ++c) {
          for (Index i = 0; i < dir[c].size(); ++i) dir[c](i) = rng.normal();
        }
      }
      dir *= 1.0 / norm(dir, NormKind::L2);
      const double fd =
          (gradient_energy_quadrature(A + step * dir) - gradient_energy_quadrature(A - step * dir)) / (2.0 * step);
      worst = std::max(worst, std::abs(fd - inner(g, dir)) / std::max(norm(g, NormKind::L2), 1e-300));
    }
    rep.laplacian = worst;
  }

  {
    const Params& p = m.params;
    const State g = analytic_gradient(s, m);
    const Derivative d = rhs(s, m);
    const MatterTerms mt = matter_terms(s, m, false);
    State expect = s;
    expect.A = g.Pi;
    expect.Pi = -1.0 * leray_project(g.A) - p.sigma * s.Pi;
    expect.psi.coeffs() =
        Complex(-p.eps, -1.0) * 0.5 * g.psi.coeffs() - (p.gamma * mt.energy) * s.psi.coeffs();
    State got(d.dA, d.dPi, d.dpsi, s.t);
    rep.rhs_form = relative(pack(got), pack(expect));
  }
  return rep;
}

// ---------------------------------------------------------------------------
// Initial data

RealVectorField random_solenoidal(const DomainPtr& d, std::uint64_t seed, const std::string& stream, int max_mode) {
  NamedStream rng(seed, stream);
  RealVectorField v(d, Basis::MaxwellVector);
  for (int c = 0; c < 3; ++c) {
    detail::for_each_mode(v.layout(c), [&](Index n, const std::array<int, 3>& k) {
      const double r = rng.normal();
      if (std::max({k[0], k[1], k[2]}) <= max_mode) v[c](n) = r / (1.0 + k[0] * k[0] + k[1] * k[1] + k[2] * k[2]);
    });
  }
  v = leray_project(v);
  const double n = norm(v, NormKind::L2);
  if (n > 0.0) v *= 1.0 / n;
  return v;
}

ComplexScalarField random_wave(const DomainPtr& d, std::uint64_t seed, const std::string& stream, int max_mode) {
  NamedStream rng(seed, stream);
  ComplexScalarField f(d);
  detail::for_each_mode(f.layout(), [&](Index n, const std::array<int, 3>& k) {
    const double re = rng.normal(), im = rng.normal();
    if (std::max({k[0], k[1], k[2]}) <= max_mode) {
      f.coeffs()(n) = Complex(re, im) / (1.0 + k[0] * k[0] + k[1] * k[1] + k[2] * k[2]);
    }
  });
  const double n = norm(f, NormKind::L2);
  if (n > 0.0) f *= Complex(1.0 / n);
  return f;
}

State make_initial(const DomainPtr& d, const InitialSpec& spec, std::uint64_t seed) {
  for (double v : {spec.charge, spec.A_norm, spec.Pi_norm, spec.scale}) {
    if (!std::isfinite(v)) throw ConfigError("initial-data targets must be finite");
  }
  if (spec.charge < 0.0) throw ConfigError("initial charge must be >= 0");
  const int max_mode = std::max(spec.max_mode, 1);
  State s(d);
  if (spec.A_norm != 0.0) s.A = spec.A_norm * random_solenoidal(d, seed, "initial-A", max_mode);
  if (spec.Pi_norm != 0.0) s.Pi = spec.Pi_norm * random_solenoidal(d, seed, "initial-Pi", max_mode);
  const double amp = std::sqrt(spec.charge);
  if (spec.kind == InitialKind::Ground) {
    s.psi = ComplexScalarField::mode(d, 1, 1, 1, Complex(amp));
  } else {
    s.psi = Complex(amp) * random_wave(d, seed, "initial-psi", max_mode);
  }
  if (spec.kind == InitialKind::Scaled) {
    s.A *= spec.scale;
    s.Pi *= spec.scale;
    s.psi *= Complex(spec.scale);
  }
  return s;
}

}  // namespace msdd
