#include "msdd/domain.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "msdd/errors.hpp"

namespace msdd {

namespace {

int family_index(Basis b) { return static_cast<int>(b); }

int kind_index(AxisKind k) { return k == AxisKind::Sine ? 0 : 1; }

}  // namespace

const char* to_string(Basis b) {
  switch (b) {
    case Basis::DirichletScalar:
      return "DirichletScalar";
    case Basis::MaxwellVector:
      return "MaxwellVector";
    case Basis::CurlDualVector:
      return "CurlDualVector";
  }
  return "?";
}

AxisKind axis_kind(Basis basis, int component, int axis) {
  switch (basis) {
    case Basis::DirichletScalar:
      return AxisKind::Sine;
    case Basis::MaxwellVector:
      return component == axis ? AxisKind::Cosine : AxisKind::Sine;
    case Basis::CurlDualVector:
      return component == axis ? AxisKind::Sine : AxisKind::Cosine;
  }
  return AxisKind::Sine;
}

std::shared_ptr<const BoxDomain> BoxDomain::make(const std::array<double, 3>& lengths,
                                                 const std::array<int, 3>& modes) {
  for (int a = 0; a < 3; ++a) {
    if (!(lengths[a] > 0.0) || !std::isfinite(lengths[a])) {
      throw InvalidDomain("box length along axis " + std::to_string(a + 1) + " must be positive, got " +
                          std::to_string(lengths[a]));
    }
    if (modes[a] < 2) {
      throw InvalidDomain("mode count along axis " + std::to_string(a + 1) + " must be >= 2, got " +
                          std::to_string(modes[a]));
    }
  }
  return std::shared_ptr<const BoxDomain>(new BoxDomain(lengths, modes));
}

BoxDomain::BoxDomain(const std::array<double, 3>& lengths, const std::array<int, 3>& modes)
    : lengths_(lengths), modes_(modes) {
  for (int a = 0; a < 3; ++a) {
    const Index m = nodes(a);
    const double h = spacing(a);
    for (AxisKind kind : {AxisKind::Sine, AxisKind::Cosine}) {
      const Index extent = kind == AxisKind::Sine ? modes_[a] : modes_[a] + 1;
      Eigen::MatrixXd s(m, extent);
      for (Index j = 0; j < m; ++j) {
        for (Index idx = 0; idx < extent; ++idx) {
          const int k = kind == AxisKind::Sine ? static_cast<int>(idx) + 1 : static_cast<int>(idx);
          s(j, idx) = basis_value(a, kind, k, node(a, j));
        }
      }
      analysis_[a][kind_index(kind)] = h * s.transpose();
      synthesis_[a][kind_index(kind)] = std::move(s);
    }
  }

  for (Basis b : {Basis::DirichletScalar, Basis::MaxwellVector, Basis::CurlDualVector}) {
    const int ncomp = b == Basis::DirichletScalar ? 1 : 3;
    for (int c = 0; c < ncomp; ++c) {
      const Layout lay = layout(b, c);
      Eigen::ArrayXd ksq(lay.size());
      std::array<Eigen::ArrayXd, 3> kap{Eigen::ArrayXd(lay.size()), Eigen::ArrayXd(lay.size()),
                                        Eigen::ArrayXd(lay.size())};
      for (Index i2 = 0; i2 < lay.extents[2]; ++i2) {
        for (Index i1 = 0; i1 < lay.extents[1]; ++i1) {
          for (Index i0 = 0; i0 < lay.extents[0]; ++i0) {
            const Index n = lay.flat(i0, i1, i2);
            const std::array<Index, 3> idx{i0, i1, i2};
            double s = 0.0;
            for (int a = 0; a < 3; ++a) {
              const double kk = wavenumber(a, lay.mode(a, idx[a]));
              kap[a](n) = kk;
              s += kk * kk;
            }
            ksq(n) = s;
          }
        }
      }
      kappa_sq_[family_index(b)][c] = std::move(ksq);
      kappa_[family_index(b)][c] = std::move(kap);
    }
  }
}

double BoxDomain::wavenumber(int axis, int k) const {
  return static_cast<double>(k) * std::numbers::pi / lengths_[axis];
}

Layout BoxDomain::layout(Basis basis, int component) const {
  Layout lay;
  for (int a = 0; a < 3; ++a) {
    lay.kinds[a] = axis_kind(basis, component, a);
    lay.extents[a] = lay.kinds[a] == AxisKind::Sine ? modes_[a] : modes_[a] + 1;
  }
  return lay;
}

const Eigen::ArrayXd& BoxDomain::kappa_squared(Basis basis, int component) const {
  return kappa_sq_[family_index(basis)][basis == Basis::DirichletScalar ? 0 : component];
}

const Eigen::ArrayXd& BoxDomain::kappa(Basis basis, int component, int axis) const {
  return kappa_[family_index(basis)][basis == Basis::DirichletScalar ? 0 : component][axis];
}

const Eigen::MatrixXd& BoxDomain::synthesis(int axis, AxisKind kind) const {
  return synthesis_[axis][kind_index(kind)];
}

const Eigen::MatrixXd& BoxDomain::analysis(int axis, AxisKind kind) const {
  return analysis_[axis][kind_index(kind)];
}

double BoxDomain::basis_value(int axis, AxisKind kind, int k, double x) const {
  const double len = lengths_[axis];
  const double arg = static_cast<double>(k) * std::numbers::pi * x / len;
  if (kind == AxisKind::Sine) return std::sqrt(2.0 / len) * std::sin(arg);
  if (k == 0) return std::sqrt(1.0 / len);
  return std::sqrt(2.0 / len) * std::cos(arg);
}

double BoxDomain::max_kappa_squared() const {
  double s = 0.0;
  for (int a = 0; a < 3; ++a) {
    const double k = wavenumber(a, modes_[a]);
    s += k * k;
  }
  return s;
}

}  // namespace msdd
