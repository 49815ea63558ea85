#include "msdd/gauge.hpp"

#include <algorithm>

#include "msdd/operators.hpp"

namespace msdd {

RealVectorField leray_project(const RealVectorField& v) {
  if (v.basis() != Basis::MaxwellVector) throw BasisError("leray_project expects a MaxwellVector field");
  const BoxDomain& d = v.domain();
  RealVectorField out = v;
  std::array<Layout, 3> lay{v.layout(0), v.layout(1), v.layout(2)};
  for (int k2 = 0; k2 <= d.modes(2); ++k2) {
    for (int k1 = 0; k1 <= d.modes(1); ++k1) {
      for (int k0 = 0; k0 <= d.modes(0); ++k0) {
        const std::array<int, 3> k{k0, k1, k2};
        std::array<Index, 3> pos;
        double kdota = 0.0, ksq = 0.0;
        for (int c = 0; c < 3; ++c) {
          pos[c] = detail::find_mode(lay[c], k);
          const double kc = d.wavenumber(c, k[c]);
          ksq += kc * kc;
          if (pos[c] >= 0) kdota += kc * v[c](pos[c]);
        }
        if (ksq == 0.0 || kdota == 0.0) continue;
        const double s = kdota / ksq;
        for (int c = 0; c < 3; ++c) {
          if (pos[c] >= 0) out[c](pos[c]) -= s * d.wavenumber(c, k[c]);
        }
      }
    }
  }
  return out;
}

RealScalarField solve_A0(const RealScalarField& rho) {
  RealScalarField a0 = rho;
  a0.coeffs() /= rho.domain().kappa_squared(Basis::DirichletScalar, 0);
  return a0;
}

double coulomb_energy(const RealScalarField& rho) {
  return (rho.coeffs().square() / rho.domain().kappa_squared(Basis::DirichletScalar, 0)).sum();
}

namespace {

Eigen::MatrixXd evaluation_matrix(const BoxDomain& d, int axis, AxisKind kind, Index extent,
                                  const std::vector<double>& xs) {
  Eigen::MatrixXd m(static_cast<Index>(xs.size()), extent);
  for (Index r = 0; r < m.rows(); ++r) {
    for (Index idx = 0; idx < extent; ++idx) {
      const int k = kind == AxisKind::Sine ? static_cast<int>(idx) + 1 : static_cast<int>(idx);
      m(r, idx) = d.basis_value(axis, kind, k, xs[static_cast<size_t>(r)]);
    }
  }
  return m;
}

std::vector<double> surface_points(const BoxDomain& d, int axis, int samples) {
  const int s = samples > 0 ? samples : 2 * d.modes(axis) + 2;
  std::vector<double> xs(static_cast<size_t>(s));
  for (int i = 0; i < s; ++i) xs[static_cast<size_t>(i)] = d.length(axis) * i / (s - 1);
  return xs;
}

/// Max |f| over both faces normal to `normal` for one component layout.
template <typename Scalar>
double face_max(const BoxDomain& d, const Layout& lay, const Nodal<Scalar>& coeffs, int normal, int samples) {
  double worst = 0.0;
  for (double side : {0.0, d.length(normal)}) {
    std::array<Eigen::MatrixXd, 3> ev;
    for (int a = 0; a < 3; ++a) {
      const std::vector<double> xs = a == normal ? std::vector<double>{side} : surface_points(d, a, samples);
      ev[a] = evaluation_matrix(d, a, lay.kinds[a], lay.extents[a], xs);
    }
    const Nodal<Scalar> vals = apply_separable<Scalar>(coeffs, lay.extents, {&ev[0], &ev[1], &ev[2]});
    worst = std::max(worst, vals.abs().maxCoeff());
  }
  return worst;
}

template <typename Scalar>
double scalar_residual(const SpectralScalar<Scalar>& f, int samples) {
  double worst = 0.0;
  for (int normal = 0; normal < 3; ++normal) {
    worst = std::max(worst, face_max<Scalar>(f.domain(), f.layout(), f.coeffs(), normal, samples));
  }
  return worst;
}

}  // namespace

double boundary_residual(const RealScalarField& f, int samples_per_edge) {
  return scalar_residual(f, samples_per_edge);
}

double boundary_residual(const ComplexScalarField& f, int samples_per_edge) {
  return scalar_residual(f, samples_per_edge);
}

double boundary_residual(const RealVectorField& v, int samples_per_edge) {
  double worst = 0.0;
  for (int normal = 0; normal < 3; ++normal) {
    for (int c = 0; c < 3; ++c) {
      // Maxwell: tangential components vanish; CurlDual: the normal one does.
      const bool constrained = v.basis() == Basis::MaxwellVector ? c != normal : c == normal;
      if (!constrained) continue;
      worst = std::max(worst, face_max<double>(v.domain(), v.layout(c), v[c], normal, samples_per_edge));
    }
  }
  return worst;
}

double face_residual(const BoxDomain& d, const Layout& lay, const Eigen::ArrayXd& coeffs, int normal,
                     int samples_per_edge) {
  if (coeffs.size() != lay.size()) throw DimensionError("coefficient array does not match layout");
  return face_max<double>(d, lay, coeffs, normal, samples_per_edge);
}

}  // namespace msdd
