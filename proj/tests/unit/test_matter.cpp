#include <cmath>
#include <numbers>

#include "doctest.h"
#include "msdd/drive.hpp"
#include "msdd/gauge.hpp"
#include "msdd/matter.hpp"
#include "msdd/operators.hpp"
#include "support.hpp"

using namespace msdd;
using msdd::testing::max_abs;

namespace {

constexpr double pi = std::numbers::pi;

RealVectorField solenoidal(const DomainPtr& d, std::uint64_t seed, double scale = 1.0) {
  RealVectorField a = leray_project(msdd::testing::random_vector(d, Basis::MaxwellVector, seed, 1.0));
  a *= scale / norm(a, NormKind::L2);
  return a;
}

ComplexScalarField wave(const DomainPtr& d, std::uint64_t seed) {
  ComplexScalarField f = msdd::testing::random_complex(d, seed, 1.0);
  f *= Complex(1.0 / norm(f, NormKind::L2));
  return f;
}

/// <chi, H psi> straight from the quadratic form: 1/2 sum_i <D_i chi, D_i psi> + <chi, (phi + A0) psi>,
/// all integrals by midpoint quadrature of nodal samples.
Complex form_oracle(const ComplexScalarField& chi, const ComplexScalarField& psi, const RealVectorField& A,
                    const RealScalarField& A0, const PotentialSet& pot) {
  const BoxDomain& d = psi.domain();
  const NodalVector<Complex> dc = covariant_derivative(chi, A);
  const NodalVector<Complex> dp = covariant_derivative(psi, A);
  Complex s(0.0);
  for (int i = 0; i < 3; ++i) s += 0.5 * (dc[i].conjugate() * dp[i]).sum();
  const Nodal<Complex> c = inverse_transform(chi), p = inverse_transform(psi);
  s += (c.conjugate() * (pot.phi + inverse_transform(A0)).cast<Complex>() * p).sum();
  return d.cell_volume() * s;
}

}  // namespace

TEST_CASE("potential set validation") {
  auto d = BoxDomain::make({1, 1, 1}, {4, 4, 4});
  CHECK(PotentialSet::constant(*d, 2.5).kappa == 2.5);
  CHECK_THROWS_AS(PotentialSet::constant(*d, 0.0), InvalidPotential);
  CHECK_THROWS_AS(PotentialSet::constant(*d, -1.0), InvalidPotential);
  CHECK_THROWS_AS(PotentialSet::from_samples(*d, Eigen::ArrayXd::Ones(3)), DimensionError);
}

TEST_CASE("covariant derivative") {
  auto d = BoxDomain::make({1, 1, 1}, {8, 8, 8});
  const RealVectorField zero(d, Basis::MaxwellVector);
  const auto mode = ComplexScalarField::mode(d, 1, 1, 1);
  const auto dpsi = covariant_derivative(mode, zero);
  double n2 = 0.0;
  for (int i = 0; i < 3; ++i) n2 += d->cell_volume() * dpsi[i].abs2().sum();
  CHECK(n2 == doctest::Approx(3 * pi * pi).epsilon(1e-12));
  const auto dz = covariant_derivative(ComplexScalarField(d), zero);
  for (int i = 0; i < 3; ++i) CHECK(max_abs(dz[i]) == 0.0);

  // expansion oracle: |D psi|^2 = |grad psi|^2 + 2 Re[conj(-i grad psi) . A psi] + |A|^2 |psi|^2
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const auto psi = wave(d, seed);
    const auto A = solenoidal(d, seed + 50, 3.0);
    const auto Dpsi = covariant_derivative(psi, A);
    double direct = 0.0;
    for (int i = 0; i < 3; ++i) direct += d->cell_volume() * Dpsi[i].abs2().sum();
    const Nodal<Complex> p = inverse_transform(psi);
    const auto g = gradient(psi);
    const auto a = inverse_transform(A);
    double cross = 0.0, quad = 0.0;
    for (int i = 0; i < 3; ++i) {
      const Nodal<Complex> gi = synthesize<Complex>(*d, g.layout(i), g[i]);
      cross += 2.0 * d->cell_volume() * (Complex(0, 1) * gi.conjugate() * a[i].cast<Complex>() * p).real().sum();
      quad += d->cell_volume() * (a[i].square() * p.abs2()).sum();
    }
    const double expanded = gradient_norm_squared(psi) + cross + quad;
    CHECK(std::abs(direct - expanded) < 1e-8 * direct);
  }
}

TEST_CASE("H on an eigenmode and on zero") {
  auto d = BoxDomain::make({1, 1, 1}, {6, 6, 6});
  const RealVectorField zero(d, Basis::MaxwellVector);
  const RealScalarField a0(d);
  const auto pot = PotentialSet::constant(*d, 1.7);
  const auto mode = ComplexScalarField::mode(d, 1, 1, 1);
  const auto h = apply_H(mode, zero, a0, pot);
  const ComplexScalarField expect = Complex(1.5 * pi * pi + 1.7) * mode;
  CHECK(max_abs(h.coeffs() - expect.coeffs()) < 1e-12);
  CHECK(max_abs(apply_H(ComplexScalarField(d), zero, a0, pot).coeffs()) == 0.0);
  CHECK(energy_E(mode, zero, a0, pot) == doctest::Approx(1.5 * pi * pi + 1.7).epsilon(1e-13));
  CHECK(energy_E(ComplexScalarField(d), zero, a0, pot) == 0.0);
}

TEST_CASE("H without vector potential matches the expanded form") {
  auto d = BoxDomain::make({1.0, 1.2, 0.8}, {6, 6, 6});
  const RealVectorField zero(d, Basis::MaxwellVector);
  const auto pot = phi_preset(*d, PotentialPreset{"well", 1.0, 1.0, 4.0});
  const auto a0 = solve_A0(msdd::testing::random_real(d, 4));
  const auto psi = wave(d, 1);
  const auto h = apply_H(psi, zero, a0, pot);
  // -1/2 Lap psi + P[(phi + A0) psi]
  Nodal<Complex> expect = 0.5 * d->kappa_squared(Basis::DirichletScalar, 0).cast<Complex>() * psi.coeffs();
  expect += forward_transform<Complex>(
                d, Nodal<Complex>((pot.phi + inverse_transform(a0)).cast<Complex>() * inverse_transform(psi)))
                .coeffs();
  CHECK(max_abs(h.coeffs() - expect) < 1e-11 * max_abs(expect));
}

TEST_CASE("H is Hermitian and matches the quadratic form") {
  auto d = BoxDomain::make({1.0, 1.1, 0.9}, {6, 6, 6});
  const auto pot = phi_preset(*d, PotentialPreset{"soft-coulomb"});
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const auto A = solenoidal(d, seed, 2.0);
    const auto a0 = solve_A0(msdd::testing::random_real(d, seed + 7));
    const auto chi = wave(d, 2 * seed + 1);
    const auto psi = wave(d, 2 * seed + 2);
    const Complex lhs = inner(chi, apply_H(psi, A, a0, pot));
    const Complex rhs = std::conj(inner(psi, apply_H(chi, A, a0, pot)));
    CHECK(std::abs(lhs - rhs) < 1e-8);
    CHECK(std::abs(lhs - form_oracle(chi, psi, A, a0, pot)) < 1e-8 * std::abs(lhs));
  }
}

TEST_CASE("densities") {
  auto d = BoxDomain::make({1, 1, 1}, {6, 6, 6});
  const RealVectorField zero(d, Basis::MaxwellVector);
  ComplexScalarField real_psi(d);
  real_psi.coeffs() = msdd::testing::random_real(d, 3).coeffs().cast<Complex>();
  const Densities dr = densities(real_psi, zero);
  for (int c = 0; c < 3; ++c) CHECK(max_abs(dr.j[c]) < 1e-13 * max_abs(dr.rho.coeffs()));

  const auto psi = wave(d, 8);
  const auto A = solenoidal(d, 9, 2.0);
  const Densities a = densities(psi, A);
  CHECK(a.rho_nodes.minCoeff() >= 0.0);
  CHECK(d->cell_volume() * a.rho_nodes.sum() == doctest::Approx(1.0).epsilon(1e-10));
  const Densities b = densities(Complex(std::polar(1.0, 0.77)) * psi, A);
  CHECK(max_abs(a.rho.coeffs() - b.rho.coeffs()) < 1e-10);
  for (int c = 0; c < 3; ++c) CHECK(max_abs(a.j[c] - b.j[c]) < 1e-10);
}

TEST_CASE("charge") {
  auto d = BoxDomain::make({1, 1, 1}, {4, 4, 4});
  const auto mode = ComplexScalarField::mode(d, 1, 1, 1);
  CHECK(charge(mode) == doctest::Approx(1.0));
  CHECK(charge(Complex(2.0) * mode) == doctest::Approx(4.0));
  CHECK(charge(ComplexScalarField(d)) == 0.0);
}

TEST_CASE("energy lower bound and phase invariance") {
  auto d = BoxDomain::make({1, 1, 1}, {6, 6, 6});
  const auto pot = phi_preset(*d, PotentialPreset{"well", 1.0, 0.5, 3.0});
  MatterOptions opt;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const auto psi = Complex(0.5 + 0.05 * static_cast<double>(seed)) * wave(d, seed);
    const auto A = solenoidal(d, seed + 300, 0.1 * static_cast<double>(seed % 10));
    const MatterTerms t = evaluate_matter(psi, A, pot, opt);
    CHECK(std::abs(inner(psi, t.H_psi).imag()) < 1e-10 * std::abs(t.energy));
    CHECK(t.energy == doctest::Approx(t.kinetic + t.potential + t.coulomb).epsilon(1e-12));
    CHECK(t.energy >= pot.kappa * t.charge);
    CHECK(t.energy >= t.kinetic + pot.kappa * t.charge + t.coulomb - 1e-10 * t.energy);
    if (seed < 10) {
      const MatterTerms u = evaluate_matter(Complex(std::polar(1.0, 2.1)) * psi, A, pot, opt);
      CHECK(std::abs(u.energy - t.energy) < 1e-10 * t.energy);
      CHECK(std::abs(u.charge - t.charge) < 1e-10 * t.charge);
    }
  }
}

TEST_CASE("matter rejects mismatched inputs") {
  auto d = BoxDomain::make({1, 1, 1}, {4, 4, 4});
  auto e = BoxDomain::make({1, 1, 1}, {5, 5, 5});
  const auto pot = PotentialSet::constant(*d, 1.0);
  CHECK_THROWS_AS(covariant_derivative(ComplexScalarField(d), RealVectorField(e, Basis::MaxwellVector)),
                  DimensionError);
  CHECK_THROWS_AS(covariant_derivative(ComplexScalarField(d), RealVectorField(d, Basis::CurlDualVector)),
                  BasisError);
  CHECK_THROWS_AS(evaluate_matter(ComplexScalarField(e), RealVectorField(e, Basis::MaxwellVector), pot, {}),
                  DimensionError);
}
