#include <cmath>
#include <numbers>

#include <unsupported/Eigen/MatrixFunctions>

#include "doctest.h"
#include "msdd/dynamics.hpp"
#include "msdd/gauge.hpp"
#include "msdd/operators.hpp"
#include "support.hpp"

using namespace msdd;
using msdd::testing::max_abs;

namespace {

constexpr double pi = std::numbers::pi;

Model make_model(const DomainPtr& d, Params p, PumpSpec pump = {}, double phi = 1.0) {
  return Model(d, p, Pump(d, pump), PotentialSet::constant(*d, phi));
}

PumpSpec static_pump() {
  PumpSpec s;
  s.terms.push_back(PumpTerm{{0, 1, 1}, {1, 0, 0}, 0.7, 0.0, 0.0});
  return s;
}

PumpSpec moving_pump() {
  PumpSpec s;
  s.terms.push_back(PumpTerm{{0, 1, 1}, {1, 0, 0}, 0.7, 3.0, 0.2});
  s.terms.push_back(PumpTerm{{1, 1, 2}, {0.2, 1, 0.4}, 0.4, std::sqrt(5.0), 0.0});
  return s;
}

State coupled_state(const DomainPtr& d, std::uint64_t seed, double scale = 1.0) {
  InitialSpec spec;
  spec.kind = InitialKind::Random;
  spec.charge = 1.0;
  spec.A_norm = 0.5 * scale;
  spec.Pi_norm = 0.3 * scale;
  spec.max_mode = 2;
  return make_initial(d, spec, seed);
}

State evolve(State s, const Model& m, double dt, long steps, double* dissipated = nullptr) {
  for (long n = 0; n < steps; ++n) s = step_rk4(s, m, dt, dissipated);
  return s;
}

}  // namespace

TEST_CASE("rhs reductions") {
  auto d = BoxDomain::make({1, 1, 1}, {5, 5, 5});
  Params p;
  p.sigma = 0.3;
  const Model m = make_model(d, p);
  State s(d);
  s.A = random_solenoidal(d, 1, "a", 3);
  s.Pi = random_solenoidal(d, 1, "pi", 3);
  const Derivative r = rhs(s, m);
  const RealVectorField expect = laplacian(s.A) - 0.3 * s.Pi;
  for (int c = 0; c < 3; ++c) {
    CHECK(max_abs(r.dPi[c] - expect[c]) < 1e-12 * max_abs(expect[c]));
    CHECK(max_abs(r.dA[c] - s.Pi[c]) == 0.0);
  }
  CHECK(max_abs(r.dpsi.coeffs()) == 0.0);

  Params q;
  q.coulomb = false;
  const Model lin = make_model(d, q, {}, 2.0);
  State w(d);
  w.psi = random_wave(d, 2, "psi", 3);
  const Derivative rw = rhs(w, lin);
  const Nodal<Complex> expect_psi =
      Complex(0, -1) * (0.5 * d->kappa_squared(Basis::DirichletScalar, 0) + 2.0).cast<Complex>() * w.psi.coeffs();
  CHECK(max_abs(rw.dpsi.coeffs() - expect_psi) < 1e-12 * max_abs(expect_psi));

  State coupled = coupled_state(d, 3);
  const Derivative rc = rhs(coupled, make_model(d, Params{}, moving_pump()));
  CHECK(norm(divergence(rc.dPi), NormKind::L2) < 1e-10);

  State bad(d);
  bad.psi.coeffs()(0) = Complex(std::nan(""), 0.0);
  CHECK_THROWS_AS(rhs(bad, m), DivergenceError);
}

TEST_CASE("single-mode Schroedinger oscillator converges at fourth order") {
  auto d = BoxDomain::make({1, 1, 1}, {4, 4, 4});
  Params p;
  p.coulomb = false;
  const double kap = 1.0;
  const Model m = make_model(d, p, {}, kap);
  const double omega = 1.5 * pi * pi + kap;
  State s0(d);
  s0.psi = ComplexScalarField::mode(d, 1, 1, 1);
  const double T = 0.5;
  std::vector<double> errs;
  for (long steps : {50, 100, 200}) {
    const State s = evolve(s0, m, T / static_cast<double>(steps), steps);
    errs.push_back(std::abs(s.psi.at(1, 1, 1) - std::polar(1.0, -omega * T)));
  }
  CHECK(errs[0] / errs[1] == doctest::Approx(16.0).epsilon(0.125));
  CHECK(errs[1] / errs[2] == doctest::Approx(16.0).epsilon(0.125));
}

TEST_CASE("damped wave mode matches the matrix exponential") {
  auto d = BoxDomain::make({1, 1, 1}, {4, 4, 4});
  Params p;
  p.sigma = 0.4;
  const Model m = make_model(d, p);
  State s0(d);
  s0.A = RealVectorField::mode(d, Basis::MaxwellVector, 0, 0, 1, 1, 0.8);
  s0.Pi = RealVectorField::mode(d, Basis::MaxwellVector, 0, 0, 1, 1, -0.3);
  const double k2 = 2 * pi * pi, T = 1.0;
  Eigen::Matrix2d G;
  G << 0.0, 1.0, -k2, -0.4;
  const Eigen::Vector2d exact = (G * T).exp() * Eigen::Vector2d(0.8, -0.3);
  std::vector<double> errs;
  for (long steps : {40, 80, 160}) {
    const State s = evolve(s0, m, T / static_cast<double>(steps), steps);
    errs.push_back(std::hypot(s.A.at(0, 0, 1, 1) - exact(0), s.Pi.at(0, 0, 1, 1) - exact(1)));
  }
  CHECK(errs[0] / errs[1] == doctest::Approx(16.0).epsilon(0.125));
  CHECK(errs[1] / errs[2] == doctest::Approx(16.0).epsilon(0.125));
}

TEST_CASE("zero step is the identity") {
  auto d = BoxDomain::make({1, 1, 1}, {4, 4, 4});
  const State s = coupled_state(d, 4);
  const State t = step_rk4(s, make_model(d, Params{}, moving_pump()), 0.0);
  CHECK(max_abs(t.psi.coeffs() - s.psi.coeffs()) == 0.0);
  for (int c = 0; c < 3; ++c) CHECK(max_abs(t.A[c] - s.A[c]) < 1e-15);
  CHECK(t.t == s.t);
}

TEST_CASE("functionals on simple states") {
  auto d = BoxDomain::make({1, 1, 1}, {4, 4, 4});
  Params p;
  p.eta = 0.3;
  const Model m = make_model(d, p);
  const State vac(d);
  CHECK(canonical_energy(vac, m) == 0.0);
  CHECK(hamiltonian_paper(vac, m) == 0.0);
  State s(d);
  s.A = RealVectorField::mode(d, Basis::MaxwellVector, 0, 0, 1, 1, 1.3);
  CHECK(canonical_energy(s, m) == doctest::Approx(0.5 * 2 * pi * pi * 1.69).epsilon(1e-13));
  s.Pi = random_solenoidal(d, 5, "pi", 2);
  CHECK(hamiltonian_paper(s, m) == doctest::Approx(canonical_energy(s, m)).epsilon(1e-14));
  CHECK(lyapunov_phi(s, m) == doctest::Approx(canonical_energy(s, m) + 0.3 * inner(s.Pi, s.A)).epsilon(1e-14));
  Params q;
  const Model m0 = make_model(d, q);
  const State c = coupled_state(d, 6);
  CHECK(lyapunov_phi(c, m0) == doctest::Approx(canonical_energy(c, m0)).epsilon(1e-15));
  State nopi = c;
  nopi.Pi = RealVectorField(d, Basis::MaxwellVector);
  CHECK(lyapunov_phi(nopi, m) == doctest::Approx(canonical_energy(nopi, m)).epsilon(1e-15));
}

TEST_CASE("undamped coupled run conserves the canonical energy") {
  auto d = BoxDomain::make({1, 1, 1}, {5, 5, 5});
  // RK4 damps the stiffest Schroedinger modes at O(dt^5); dt = 5e-4 keeps that far below 1e-6
  Params p;
  p.dt = 5e-4;
  p.T = 0.5;
  const Model m = make_model(d, p, static_pump());
  const RunResult r = run(coupled_state(d, 7), m, 100);
  REQUIRE_FALSE(r.diverged);
  const double e0 = r.rows.front().Ec;
  for (const DiagnosticsRow& row : r.rows) {
    CHECK(std::abs(row.Ec - e0) < 1e-6 * std::abs(e0));
    CHECK(row.div_A < 1e-10);
    CHECK(row.boundary_residual < 1e-10);
  }
}

TEST_CASE("charge decays monotonically and the charge law holds at fourth order") {
  auto d = BoxDomain::make({1, 1, 1}, {4, 4, 4});
  Params p;
  p.sigma = 0.1;
  p.eps = 0.1;
  p.gamma = 0.1;
  const Model m = make_model(d, p, moving_pump());
  const State s0 = coupled_state(d, 8);
  const double T = 0.4;
  std::vector<double> residual;
  for (long steps : {100, 200}) {
    const double dt = T / static_cast<double>(steps);
    State s = s0;
    double lost = 0.0;
    double worst = 0.0;
    double q_prev = charge(s.psi);
    for (long n = 0; n < steps; ++n) {
      s = step_rk4(s, m, dt, &lost);
      const double q = charge(s.psi);
      CHECK(q <= q_prev + 1e-10);
      q_prev = q;
      worst = std::max(worst, std::abs(q - charge(s0.psi) + lost));
    }
    residual.push_back(worst);
  }
  const double order = std::log2(residual[0] / residual[1]);
  MESSAGE("charge-law residuals " << residual[0] << ", " << residual[1] << " order " << order);
  CHECK(order >= 3.5);
}

TEST_CASE("run records rows and handles T = 0") {
  auto d = BoxDomain::make({1, 1, 1}, {4, 4, 4});
  Params p;
  p.T = 0.0;
  const RunResult r = run(coupled_state(d, 9), make_model(d, p));
  CHECK(r.rows.size() == 1);
  CHECK(r.rows[0].t == 0.0);
  p.T = 0.05;
  p.dt = 1e-3;
  long snaps = 0;
  const RunResult q = run(coupled_state(d, 9), make_model(d, p), 10, [&](const State&, long) { ++snaps; }, 25);
  CHECK(q.rows.size() == 6);
  CHECK(q.rows.back().t == doctest::Approx(0.05).epsilon(1e-14));
  CHECK(snaps == 3);
  CHECK(diagnostics_columns().size() == to_values(q.rows[0]).size());
}

TEST_CASE("phase rotation leaves the diagnostics unchanged") {
  auto d = BoxDomain::make({1, 1, 1}, {4, 4, 4});
  Params p;
  p.sigma = p.eps = p.gamma = 0.1;
  p.eta = 0.05;
  p.T = 0.1;
  p.dt = 2e-3;
  const Model m = make_model(d, p, moving_pump());
  const State s = coupled_state(d, 10);
  State r = s;
  r.psi *= std::polar(1.0, 1.234);
  const RunResult a = run(s, m, 10), b = run(r, m, 10);
  REQUIRE(a.rows.size() == b.rows.size());
  for (size_t i = 0; i < a.rows.size(); ++i) {
    const auto va = to_values(a.rows[i]), vb = to_values(b.rows[i]);
    for (size_t k = 0; k < va.size(); ++k) CHECK(std::abs(va[k] - vb[k]) <= 1e-9 * std::max(1.0, std::abs(va[k])));
  }
}

TEST_CASE("gradient check") {
  auto d = BoxDomain::make({1, 1, 1}, {4, 4, 4});
  Params p;
  p.sigma = 0.2;
  p.eps = 0.1;
  p.gamma = 0.3;
  const Model m = make_model(d, p, moving_pump());
  State s = coupled_state(d, 11);
  s.t = 0.37;
  const GradCheckReport r = grad_check(s, m);
  MESSAGE("quadratic " << r.quadratic << " full " << r.full << " laplacian " << r.laplacian << " rhs "
                       << r.rhs_form);
  CHECK(r.quadratic < 1e-9);
  CHECK(r.full < 1e-6);
  CHECK(r.laplacian < 1e-8);
  CHECK(r.rhs_form < 1e-12);
}

TEST_CASE("initial data") {
  auto d = BoxDomain::make({1, 1, 1}, {5, 5, 5});
  const State g = make_initial(d, InitialSpec{}, 1);
  CHECK(charge(g.psi) == doctest::Approx(1.0));
  CHECK(g.psi.at(1, 1, 1) == Complex(1.0));
  CHECK(norm(g.A, NormKind::L2) == 0.0);

  InitialSpec spec;
  spec.kind = InitialKind::Random;
  spec.charge = 2.0;
  spec.A_norm = 0.5;
  spec.Pi_norm = 0.25;
  const State a = make_initial(d, spec, 42);
  const State b = make_initial(d, spec, 42);
  CHECK(max_abs(a.psi.coeffs() - b.psi.coeffs()) == 0.0);
  for (int c = 0; c < 3; ++c) CHECK(max_abs(a.A[c] - b.A[c]) == 0.0);
  CHECK(charge(a.psi) == doctest::Approx(2.0).epsilon(1e-14));
  CHECK(norm(a.A, NormKind::L2) == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(norm(divergence(a.A), NormKind::L2) < 1e-13);
  CHECK(norm(divergence(a.Pi), NormKind::L2) < 1e-13);

  spec.kind = InitialKind::Scaled;
  spec.scale = 10.0;
  const State c = make_initial(d, spec, 42);
  CHECK(charge(c.psi) == doctest::Approx(200.0).epsilon(1e-13));
  CHECK(norm(c.Pi, NormKind::L2) == doctest::Approx(2.5).epsilon(1e-13));
  CHECK(norm(c.psi, NormKind::H1) == doctest::Approx(10 * norm(a.psi, NormKind::H1)).epsilon(1e-13));
  CHECK(max_abs(make_initial(d, spec, 43).psi.coeffs() - c.psi.coeffs()) > 0.0);
}

TEST_CASE("stability limit") {
  auto d = BoxDomain::make({1, 1, 1}, {8, 8, 8});
  const double k2 = 3 * 64 * pi * pi;
  CHECK(stability_limit(*d, Params{}) == doctest::Approx(1.4 / (0.5 * k2)).epsilon(1e-14));
  CHECK(stability_limit(*d, Params{}) > 1e-3);
  auto e = BoxDomain::make({1, 1, 1}, {16, 16, 16});
  CHECK(stability_limit(*e, Params{}) < 1e-3);
}
