#include "msdd/estimates.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "msdd/operators.hpp"

namespace msdd {

PchConstants pch_constants(double lambda_min, double eta) {
  if (!(lambda_min > 0.0)) throw RangeError("lambda_min must be positive");
  PchConstants p;
  p.C_Lambda = 1.0 / std::sqrt(lambda_min);
  p.c = 1.0 - eta * p.C_Lambda;
  p.C = 1.0 + eta * p.C_Lambda;
  return p;
}

double LyapunovFit::envelope(double t) const { return phi0 * std::exp(-beta * (t - t0)) + plateau; }

LyapunovFit lyapunov_fit(const std::vector<double>& t, const std::vector<double>& phi) {
  if (t.size() != phi.size()) throw DimensionError("time and Phi series differ in length");
  if (t.size() < 10) {
    throw InsufficientData("Lyapunov fit needs at least 10 samples, got " + std::to_string(t.size()));
  }
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (!std::isfinite(t[i]) || !std::isfinite(phi[i])) throw NumericalError("non-finite sample in the Phi series");
  }
  const double t0 = t.front(), T = t.back();
  LyapunovFit f;
  f.phi0 = phi.front();
  f.t0 = t0;
  double tail = -std::numeric_limits<double>::infinity(), peak = phi.front();
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (t[i] >= t0 + 0.75 * (T - t0)) tail = std::max(tail, phi[i]);
    peak = std::max(peak, phi[i]);
  }
  const double B = std::max({0.0, tail, peak - f.phi0});
  f.plateau = B;

  const double slack = 1e-12 * std::max(std::abs(f.phi0), B);
  auto holds = [&](double beta) {
    for (std::size_t i = 0; i < t.size(); ++i) {
      if (phi[i] > f.phi0 * std::exp(-beta * (t[i] - t0)) + B + slack) return false;
    }
    return true;
  };
  if (f.phi0 <= B) {
    f.degenerate = true;
    f.envelope_ok = holds(0.0);
    return f;
  }
  double lo = 0.0, hi = 1.0;
  while (holds(hi) && hi < 1e8) {
    lo = hi;
    hi *= 2.0;
  }
  for (int it = 0; it < 200 && hi - lo > 1e-13 * hi; ++it) {
    const double mid = 0.5 * (lo + hi);
    (holds(mid) ? lo : hi) = mid;
  }
  f.beta = lo;
  f.Cp = lo * B;
  f.envelope_ok = holds(lo);
  return f;
}

LyapunovFit lyapunov_fit(const std::vector<DiagnosticsRow>& rows) {
  std::vector<double> t, phi;
  t.reserve(rows.size());
  phi.reserve(rows.size());
  for (const DiagnosticsRow& r : rows) {
    t.push_back(r.t);
    phi.push_back(r.Phi);
  }
  return lyapunov_fit(t, phi);
}

LyapunovParameters lyapunov_parameters(double sigma, double gamma, double C2) {
  if (!std::isfinite(sigma) || !std::isfinite(gamma) || !std::isfinite(C2) || C2 < 0.0) {
    throw RangeError("sigma, gamma and C2 must be finite with C2 >= 0");
  }
  LyapunovParameters best;
  const int samples = 20000;
  for (int i = 1; i < samples; ++i) {
    const double delta = (1.0 / 3.0) * static_cast<double>(i) / samples;
    // the first term grows with eta and the other two shrink: the optimum is
    // where the first meets the smaller of the others
    const double e1 = sigma / (2.0 - 3.0 * delta + 1.0 / delta);
    const double e2 = gamma / (1.0 - 3.0 * delta + C2 / delta);
    const double eta = std::min(e1, e2);
    if (!(eta > 0.0)) continue;
    const double margin =
        std::min({eta * (1.0 - 3.0 * delta), sigma - eta - eta / delta, gamma - C2 * eta / delta});
    if (margin > best.margin) best = {true, eta, delta, margin};
  }
  return best;
}

CurrentTermConstants current_term_constants(const std::vector<State>& states, const Model& m) {
  CurrentTermConstants out;
  MatterOptions opt;
  opt.coulomb = m.params.coulomb;
  opt.dealias = m.params.dealias;
  for (const State& s : states) {
    const RealVectorField Atot = m.pump.empty() ? s.A : s.A + m.pump.eval(s.t).A;
    const MatterTerms mt = evaluate_matter(s.psi, Atot, m.potential, opt);
    const double denom = std::sqrt(gradient_norm_squared(s.A)) * std::sqrt(mt.energy) * std::sqrt(2.0 * mt.kinetic);
    if (!(denom > 0.0)) continue;
    out.C1 = std::max(out.C1, std::abs(inner(mt.current, s.A)) / denom);
    ++out.samples;
  }
  out.C2 = 0.5 * out.C1 * out.C1;
  return out;
}

double embedding_ratio(const RealVectorField& A, const PotentialSet& potential, double p, int samples,
                       std::uint64_t seed, bool coulomb) {
  detail::check_lp_exponent(p);
  const DomainPtr& d = A.domain_ptr();
  const int top = std::min({d->modes(0), d->modes(1), d->modes(2)});
  MatterOptions opt;
  opt.coulomb = coulomb;
  opt.want_current = false;
  double best = 0.0;
  for (int i = 0; i < samples; ++i) {
    const int max_mode = 1 + i % top;
    const ComplexScalarField psi = random_wave(d, seed, "embedding-" + std::to_string(i), max_mode);
    const MatterTerms mt = evaluate_matter(psi, A, potential, opt);
    const double lp = norm(psi, NormKind::Lp, p);
    best = std::max(best, lp * lp / mt.energy);
  }
  return best;
}

double linear_growth_constant(const std::vector<DiagnosticsRow>& rows) {
  double c = 0.0;
  for (const DiagnosticsRow& r : rows) c = std::max(c, r.Ec / (r.t + 1.0));
  return c;
}

AbsorbingReport absorbing_experiment(const std::vector<double>& R_list, const Model& m, const InitialSpec& shape,
                                     std::uint64_t seed, int record_every) {
  if (R_list.empty()) throw InsufficientData("absorbing experiment needs at least one radius");
  AbsorbingReport rep;
  const double T = m.params.T;
  for (double R : R_list) {
    if (!(R > 0.0) || !std::isfinite(R)) throw RangeError("radii must be positive and finite");
    State s = make_initial(m.domain, shape, seed);
    const double x0 = std::sqrt(state_norm2(s));
    if (!(x0 > 0.0)) throw RangeError("initial shape has zero norm");
    const double f = R / x0;
    s.A *= f;
    s.Pi *= f;
    s.psi *= Complex(f);
    const RunResult run_res = run(s, m, record_every);
    AbsorbingTrajectory tr;
    tr.R = R;
    tr.diverged = run_res.diverged;
    tr.message = run_res.message;
    for (const DiagnosticsRow& row : run_res.rows) {
      tr.t.push_back(row.t);
      tr.x2.push_back(row.X_norm2);
    }
    tr.tail_bound = 0.0;
    for (std::size_t i = 0; i < tr.t.size(); ++i) {
      if (tr.t[i] >= 0.75 * T) tr.tail_bound = std::max(tr.tail_bound, tr.x2[i]);
    }
    rep.any_diverged = rep.any_diverged || tr.diverged;
    rep.runs.push_back(std::move(tr));
  }
  std::sort(rep.runs.begin(), rep.runs.end(), [](const auto& a, const auto& b) { return a.R < b.R; });

  double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
  for (const auto& r : rep.runs) {
    lo = std::min(lo, r.tail_bound);
    hi = std::max(hi, r.tail_bound);
  }
  rep.B_hat = hi;
  rep.spread = hi > 0.0 ? (hi - lo) / hi : 0.0;

  const double ball = 2.0 * rep.B_hat;
  rep.all_stay = !rep.any_diverged;
  rep.entry_monotone = true;
  double prev = -1.0;
  for (auto& r : rep.runs) {
    // entry: first sample after which the trajectory never leaves the ball
    std::ptrdiff_t last_out = -1;
    for (std::size_t i = 0; i < r.x2.size(); ++i) {
      if (!(r.x2[i] <= ball)) last_out = static_cast<std::ptrdiff_t>(i);
    }
    const std::size_t first_in = static_cast<std::size_t>(last_out + 1);
    if (first_in < r.t.size() && !r.diverged) {
      r.entry_time = r.t[first_in];
      r.stays_inside = r.entry_time <= 0.5 * T;
    }
    rep.all_stay = rep.all_stay && r.stays_inside;
    if (r.entry_time < prev) rep.entry_monotone = false;
    prev = r.entry_time;
  }
  return rep;
}

ChargeLawCheck charge_law_check(const State& initial, const Model& m, double T, long steps) {
  if (steps < 1 || !(T > 0.0)) throw RangeError("charge-law check needs T > 0 and at least one step");
  const double dt = T / static_cast<double>(steps);
  const double q0 = charge(initial.psi);
  ChargeLawCheck out;
  State s = initial;
  double lost = 0.0, q_prev = q0;
  for (long n = 0; n < steps; ++n) {
    s = step_rk4(s, m, dt, &lost);
    const double q = charge(s.psi);
    out.worst_increase = std::max(out.worst_increase, q - q_prev);
    out.residual = std::max(out.residual, std::abs(q - q0 + lost));
    q_prev = q;
  }
  return out;
}

double ChargeOracle::operator()(double t) const {
  if (eps == 0.0) return Q0 / (1.0 + 2.0 * mu * gamma * Q0 * t);
  const double e = std::exp(-2.0 * mu * eps * t);
  return eps * Q0 * e / (eps + gamma * Q0 * (1.0 - e));
}

ChargeOracle charge_ode_oracle(const State& initial, const Model& m) {
  const BoxDomain& d = *m.domain;
  if (norm(initial.A, NormKind::L2) != 0.0 || norm(initial.Pi, NormKind::L2) != 0.0) {
    throw OracleInvalid("charge oracle needs A = Pi = 0");
  }
  if (!m.pump.empty()) throw OracleInvalid("charge oracle needs no pump");
  if (m.params.coulomb) throw OracleInvalid("charge oracle needs the Coulomb term off");
  const double pmax = m.potential.phi.maxCoeff(), pmin = m.potential.phi.minCoeff();
  if (pmax - pmin > 1e-14 * std::abs(pmax)) throw OracleInvalid("charge oracle needs a constant phi");
  const double Q0 = charge(initial.psi);
  const double ground = std::norm(initial.psi.at(1, 1, 1));
  if (Q0 - ground > 1e-14 * Q0) throw OracleInvalid("charge oracle needs psi in the (1,1,1) mode");
  ChargeOracle o;
  o.Q0 = Q0;
  o.mu = 0.5 * d.kappa_squared(Basis::DirichletScalar, 0)(0) + pmin;
  o.eps = m.params.eps;
  o.gamma = m.params.gamma;
  return o;
}

}  // namespace msdd
