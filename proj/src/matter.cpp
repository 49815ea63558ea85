#include "msdd/matter.hpp"

#include <cmath>

#include "msdd/gauge.hpp"
#include "msdd/operators.hpp"

namespace msdd {

PotentialSet PotentialSet::from_samples(const BoxDomain& d, Nodal<double> phi) {
  if (phi.size() != d.node_count()) throw DimensionError("potential samples do not match the collocation grid");
  if (!phi.isFinite().all()) throw InvalidPotential("potential has non-finite samples");
  const double m = phi.minCoeff();
  if (!(m > 0.0)) {
    throw InvalidPotential("positivity of phi: min phi must be > 0 on the grid (shift phi by a constant), got " + std::to_string(m));
  }
  return PotentialSet{std::move(phi), m};
}

PotentialSet PotentialSet::constant(const BoxDomain& d, double value) {
  return from_samples(d, Nodal<double>::Constant(d.node_count(), value));
}

namespace {

void check_inputs(const ComplexScalarField& psi, const RealVectorField& Atot) {
  if (Atot.basis() != Basis::MaxwellVector) throw BasisError("vector potential must be a MaxwellVector field");
  if (!psi.domain().same_as(Atot.domain())) throw DimensionError("psi and A live on different domains");
}

const Complex kI(0.0, 1.0);

}  // namespace

NodalVector<Complex> covariant_derivative(const ComplexScalarField& psi, const RealVectorField& Atot) {
  check_inputs(psi, Atot);
  const BoxDomain& d = psi.domain();
  const Nodal<Complex> psi_n = inverse_transform(psi);
  const SpectralVector<Complex> grad = gradient(psi);
  NodalVector<Complex> out;
  for (int i = 0; i < 3; ++i) {
    const Nodal<Complex> g = synthesize<Complex>(d, grad.layout(i), grad[i]);
    const Eigen::ArrayXd a = synthesize<double>(d, Atot.layout(i), Atot[i]);
    out[i] = -kI * g + a.cast<Complex>() * psi_n;
  }
  return out;
}

MatterTerms evaluate_matter(const ComplexScalarField& psi, const RealVectorField& Atot, const PotentialSet& potential,
                            const MatterOptions& options, const RealScalarField* A0) {
  check_inputs(psi, Atot);
  const DomainPtr& dp = psi.domain_ptr();
  const BoxDomain& d = *dp;
  const double w = d.cell_volume();
  if (potential.phi.size() != d.node_count()) throw DimensionError("potential does not match the grid");

  const Nodal<Complex> psi_n = inverse_transform(psi);
  const Eigen::ArrayXd rho_n = psi_n.abs2();
  const SpectralVector<Complex> grad = gradient(psi);

  MatterTerms out{ComplexScalarField(dp), RealVectorField(dp, Basis::MaxwellVector), RealScalarField(dp)};
  out.charge = norm(psi, NormKind::L2);
  out.charge *= out.charge;

  Eigen::ArrayXd a0_n = Eigen::ArrayXd::Zero(d.node_count());
  if (options.coulomb) {
    out.A0 = solve_A0(forward_transform<double>(dp, Eigen::ArrayXd(rho_n)));
    a0_n = inverse_transform(out.A0);
  } else if (A0 != nullptr) {
    out.A0 = *A0;
    a0_n = inverse_transform(out.A0);
  }

  Nodal<Complex> nodal_part = ((potential.phi + a0_n).cast<Complex>()) * psi_n;
  Nodal<Complex> kinetic_coeffs = Nodal<Complex>::Zero(psi.coeffs().size());
  double kinetic = 0.0;
  for (int i = 0; i < 3; ++i) {
    const Layout lay = d.layout(Basis::MaxwellVector, i);
    const Eigen::ArrayXd a = synthesize<double>(d, lay, Atot[i]);
    const Nodal<Complex> dpsi = -kI * synthesize<Complex>(d, lay, grad[i]) + a.cast<Complex>() * psi_n;
    kinetic += 0.5 * w * dpsi.abs2().sum();
    // adjoint of (-i G_i + A_i S): i G_i^T W + S^T W A_i
    kinetic_coeffs += 0.5 * kI * gradient_transpose<Complex>(d, i, analyze<Complex>(d, lay, dpsi));
    nodal_part += 0.5 * a.cast<Complex>() * dpsi;
    if (options.want_current) {
      const Eigen::ArrayXd j = (psi_n.conjugate() * dpsi).real();
      out.current[i] = analyze<double>(d, lay, j);
    }
  }
  out.H_psi.coeffs() = kinetic_coeffs + analyze<Complex>(d, psi.layout(), nodal_part);

  if (options.dealias) {
    // keep the free Laplacian part exact on all modes, filter the rest
    const Nodal<Complex> free =
        0.5 * d.kappa_squared(Basis::DirichletScalar, 0).cast<Complex>() * psi.coeffs();
    Nodal<Complex> rest = out.H_psi.coeffs() - free;
    dealias_filter<Complex>(d, psi.layout(), rest);
    out.H_psi.coeffs() = free + rest;
    if (options.want_current) dealias_filter(out.current);
  }

  out.kinetic = kinetic;
  out.potential = w * (potential.phi * rho_n).sum();
  out.coulomb = w * (a0_n * rho_n).sum();
  out.energy = inner(psi, out.H_psi).real();
  return out;
}

ComplexScalarField apply_H(const ComplexScalarField& psi, const RealVectorField& Atot, const RealScalarField& A0,
                           const PotentialSet& potential) {
  MatterOptions opt;
  opt.coulomb = false;
  opt.want_current = false;
  return evaluate_matter(psi, Atot, potential, opt, &A0).H_psi;
}

Densities densities(const ComplexScalarField& psi, const RealVectorField& Atot) {
  check_inputs(psi, Atot);
  const DomainPtr& dp = psi.domain_ptr();
  const NodalVector<Complex> dpsi = covariant_derivative(psi, Atot);
  const Nodal<Complex> psi_n = inverse_transform(psi);
  Densities out{psi_n.abs2(), RealScalarField(dp), RealVectorField(dp, Basis::MaxwellVector)};
  out.rho = forward_transform<double>(dp, out.rho_nodes);
  NodalVector<double> j;
  for (int i = 0; i < 3; ++i) j[i] = (psi_n.conjugate() * dpsi[i]).real();
  out.j = forward_transform<double>(dp, Basis::MaxwellVector, j);
  return out;
}

double charge(const ComplexScalarField& psi) {
  const double n = norm(psi, NormKind::L2);
  return n * n;
}

double energy_E(const ComplexScalarField& psi, const RealVectorField& Atot, const RealScalarField& A0,
                const PotentialSet& potential) {
  MatterOptions opt;
  opt.coulomb = false;
  opt.want_current = false;
  const MatterTerms t = evaluate_matter(psi, Atot, potential, opt, &A0);
  return t.kinetic + t.potential + t.coulomb;
}

}  // namespace msdd
