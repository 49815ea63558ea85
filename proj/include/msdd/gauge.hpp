#pragma once

#include "msdd/field.hpp"

namespace msdd {

/// Orthogonal projection onto divergence-free MaxwellVector fields,
/// per mode a -> a - (kappa . a) kappa / |kappa|^2.
RealVectorField leray_project(const RealVectorField& v);

/// Dirichlet Poisson solve -Delta A0 = rho, per mode c -> c / |kappa|^2.
RealScalarField solve_A0(const RealScalarField& rho);

/// <rho, (-Delta)^{-1} rho> = sum |c|^2 / |kappa|^2 >= 0.
double coulomb_energy(const RealScalarField& rho);

/// Largest boundary value of the constrained part of a field, sampled on a
/// dense grid over all six faces. Scalars: the full value. Maxwell fields:
/// the tangential components. `samples_per_edge` <= 0 picks 2N+2.
double boundary_residual(const RealScalarField& f, int samples_per_edge = 0);
double boundary_residual(const ComplexScalarField& f, int samples_per_edge = 0);
double boundary_residual(const RealVectorField& v, int samples_per_edge = 0);

/// Max |f| over both faces normal to `normal` for raw coefficients in an
/// arbitrary layout (used to probe fields that break the basis parity).
double face_residual(const BoxDomain& d, const Layout& lay, const Eigen::ArrayXd& coeffs, int normal,
                     int samples_per_edge = 0);

}  // namespace msdd
