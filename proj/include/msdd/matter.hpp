#pragma once

#include "msdd/field.hpp"

namespace msdd {

/// Static external potential phi sampled at the collocation nodes, with
/// kappa = min over nodes of phi (strictly positive).
struct PotentialSet {
  Nodal<double> phi;
  double kappa = 0.0;

  /// Throws InvalidPotential if any sample is non-finite or min phi <= 0.
  static PotentialSet from_samples(const BoxDomain& d, Nodal<double> phi);
  static PotentialSet constant(const BoxDomain& d, double value);
};

/// D psi = -i grad psi + Atot psi at the nodes (gradient taken in
/// coefficient space, products at the nodes).
NodalVector<Complex> covariant_derivative(const ComplexScalarField& psi, const RealVectorField& Atot);

/// H psi = 1/2 D^dagger D psi + (phi + A0) psi, projected onto the
/// DirichletScalar family. D^dagger is the exact adjoint of the discrete D
/// under quadrature, so H is Hermitian in the coefficient inner product.
ComplexScalarField apply_H(const ComplexScalarField& psi, const RealVectorField& Atot, const RealScalarField& A0,
                           const PotentialSet& potential);

struct Densities {
  Nodal<double> rho_nodes;  // |psi|^2 at the nodes
  RealScalarField rho;      // projection onto DirichletScalar
  RealVectorField j;        // Re[conj(psi) D psi] projected onto MaxwellVector
};

Densities densities(const ComplexScalarField& psi, const RealVectorField& Atot);

/// Q = ||psi||^2.
double charge(const ComplexScalarField& psi);

/// E = <psi, H psi> = 1/2 ||D psi||^2 + <phi, rho> + <A0, rho>.
double energy_E(const ComplexScalarField& psi, const RealVectorField& Atot, const RealScalarField& A0,
                const PotentialSet& potential);

/// Everything the evolution needs from one matter evaluation.
struct MatterTerms {
  ComplexScalarField H_psi;
  RealVectorField current;  // Re[conj(psi) D psi], MaxwellVector
  RealScalarField A0;
  double charge = 0.0;
  double kinetic = 0.0;    // 1/2 ||D psi||^2
  double potential = 0.0;  // <phi, rho>
  double coulomb = 0.0;    // <A0, rho>
  double energy = 0.0;     // <psi, H psi>
};

struct MatterOptions {
  bool coulomb = true;        // A0 from rho; otherwise `A0` is used as given (or zero)
  bool want_current = true;
  bool dealias = false;       // 2/3-rule filter on the non-Laplacian part of H psi and on j
};

MatterTerms evaluate_matter(const ComplexScalarField& psi, const RealVectorField& Atot, const PotentialSet& potential,
                            const MatterOptions& options, const RealScalarField* A0 = nullptr);

}  // namespace msdd
