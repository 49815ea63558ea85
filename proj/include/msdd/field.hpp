#pragma once

#include <array>
#include <complex>
#include <type_traits>

#include <Eigen/Dense>

#include "msdd/domain.hpp"
#include "msdd/errors.hpp"

namespace msdd {

using Complex = std::complex<double>;

template <typename Scalar>
using Nodal = Eigen::Array<Scalar, Eigen::Dynamic, 1>;

template <typename Scalar>
using NodalVector = std::array<Nodal<Scalar>, 3>;

template <typename T>
struct is_complex : std::false_type {};
template <typename T>
struct is_complex<std::complex<T>> : std::true_type {};

/// Applies one matrix per axis to a column-major 3D array (axis 0 fastest).
/// ops[a] maps extent `in[a]` to `ops[a]->rows()`.
Eigen::ArrayXd apply_separable(const Eigen::ArrayXd& data, const std::array<Index, 3>& in,
                               const std::array<const Eigen::MatrixXd*, 3>& ops);

template <typename Scalar>
Nodal<Scalar> apply_separable(const Nodal<Scalar>& data, const std::array<Index, 3>& in,
                              const std::array<const Eigen::MatrixXd*, 3>& ops) {
  if constexpr (is_complex<Scalar>::value) {
    const Eigen::ArrayXd re = apply_separable(Eigen::ArrayXd(data.real()), in, ops);
    const Eigen::ArrayXd im = apply_separable(Eigen::ArrayXd(data.imag()), in, ops);
    Nodal<Scalar> out(re.size());
    out.real() = re;
    out.imag() = im;
    return out;
  } else {
    return apply_separable(Eigen::ArrayXd(data), in, ops);
  }
}

/// Coefficients -> node samples for one component layout.
template <typename Scalar>
Nodal<Scalar> synthesize(const BoxDomain& d, const Layout& lay, const Nodal<Scalar>& coeffs) {
  if (coeffs.size() != lay.size()) throw DimensionError("coefficient array does not match layout");
  return apply_separable<Scalar>(coeffs, lay.extents,
                                 {&d.synthesis(0, lay.kinds[0]), &d.synthesis(1, lay.kinds[1]),
                                  &d.synthesis(2, lay.kinds[2])});
}

/// Node samples -> coefficients (weighted adjoint of synthesize).
template <typename Scalar>
Nodal<Scalar> analyze(const BoxDomain& d, const Layout& lay, const Nodal<Scalar>& samples) {
  if (samples.size() != d.node_count()) {
    throw DimensionError("sample array has " + std::to_string(samples.size()) + " entries, grid has " +
                         std::to_string(d.node_count()));
  }
  return apply_separable<Scalar>(samples, d.node_extents(),
                                 {&d.analysis(0, lay.kinds[0]), &d.analysis(1, lay.kinds[1]),
                                  &d.analysis(2, lay.kinds[2])});
}

/// Scalar field in the DirichletScalar family.
template <typename Scalar>
class SpectralScalar {
 public:
  using Coefficients = Nodal<Scalar>;

  explicit SpectralScalar(DomainPtr domain)
      : domain_(std::move(domain)), coeffs_(Coefficients::Zero(layout().size())) {}

  SpectralScalar(DomainPtr domain, Coefficients coeffs) : domain_(std::move(domain)), coeffs_(std::move(coeffs)) {
    if (coeffs_.size() != layout().size()) throw DimensionError("scalar coefficient array has wrong length");
  }

  /// Single normalized mode (k1,k2,k3), 1-based.
  static SpectralScalar mode(DomainPtr domain, int k1, int k2, int k3, Scalar value = Scalar(1)) {
    SpectralScalar f(std::move(domain));
    f.at(k1, k2, k3) = value;
    return f;
  }

  Basis basis() const { return Basis::DirichletScalar; }
  const BoxDomain& domain() const { return *domain_; }
  const DomainPtr& domain_ptr() const { return domain_; }
  Layout layout() const { return domain_->layout(Basis::DirichletScalar, 0); }

  const Coefficients& coeffs() const { return coeffs_; }
  Coefficients& coeffs() { return coeffs_; }

  Scalar& at(int k1, int k2, int k3) { return coeffs_(position(k1, k2, k3)); }
  const Scalar& at(int k1, int k2, int k3) const { return coeffs_(position(k1, k2, k3)); }

  SpectralScalar& operator+=(const SpectralScalar& o) {
    coeffs_ += o.coeffs_;
    return *this;
  }
  SpectralScalar& operator-=(const SpectralScalar& o) {
    coeffs_ -= o.coeffs_;
    return *this;
  }
  SpectralScalar& operator*=(Scalar s) {
    coeffs_ *= s;
    return *this;
  }
  friend SpectralScalar operator+(SpectralScalar a, const SpectralScalar& b) { return a += b; }
  friend SpectralScalar operator-(SpectralScalar a, const SpectralScalar& b) { return a -= b; }
  friend SpectralScalar operator*(Scalar s, SpectralScalar a) { return a *= s; }
  friend SpectralScalar operator*(SpectralScalar a, Scalar s) { return a *= s; }

 private:
  Index position(int k1, int k2, int k3) const {
    const Layout lay = layout();
    const Index i0 = lay.position(0, k1), i1 = lay.position(1, k2), i2 = lay.position(2, k3);
    if (i0 < 0 || i1 < 0 || i2 < 0) throw RangeError("mode outside the DirichletScalar range");
    return lay.flat(i0, i1, i2);
  }

  DomainPtr domain_;
  Coefficients coeffs_;
};

/// Three-component field in the MaxwellVector or CurlDualVector family.
template <typename Scalar>
class SpectralVector {
 public:
  using Coefficients = Nodal<Scalar>;

  SpectralVector(DomainPtr domain, Basis basis) : domain_(std::move(domain)), basis_(basis) {
    if (basis_ == Basis::DirichletScalar) throw BasisError("vector fields need a vector basis family");
    for (int c = 0; c < 3; ++c) comps_[c] = Coefficients::Zero(layout(c).size());
  }

  SpectralVector(DomainPtr domain, Basis basis, std::array<Coefficients, 3> comps)
      : domain_(std::move(domain)), basis_(basis), comps_(std::move(comps)) {
    if (basis_ == Basis::DirichletScalar) throw BasisError("vector fields need a vector basis family");
    for (int c = 0; c < 3; ++c) {
      if (comps_[c].size() != layout(c).size()) throw DimensionError("vector component array has wrong length");
    }
  }

  /// Single mode k on one component.
  static SpectralVector mode(DomainPtr domain, Basis basis, int component, int k1, int k2, int k3,
                             Scalar value = Scalar(1)) {
    SpectralVector v(std::move(domain), basis);
    v.at(component, k1, k2, k3) = value;
    return v;
  }

  Basis basis() const { return basis_; }
  const BoxDomain& domain() const { return *domain_; }
  const DomainPtr& domain_ptr() const { return domain_; }
  Layout layout(int component) const { return domain_->layout(basis_, component); }

  const Coefficients& operator[](int c) const { return comps_[c]; }
  Coefficients& operator[](int c) { return comps_[c]; }
  const std::array<Coefficients, 3>& components() const { return comps_; }

  /// Coefficient of mode k on one component; throws RangeError when the
  /// component does not carry that mode.
  Scalar& at(int c, int k1, int k2, int k3) { return comps_[c](position(c, k1, k2, k3)); }
  const Scalar& at(int c, int k1, int k2, int k3) const { return comps_[c](position(c, k1, k2, k3)); }

  bool has_mode(int c, int k1, int k2, int k3) const {
    const Layout lay = layout(c);
    return lay.position(0, k1) >= 0 && lay.position(1, k2) >= 0 && lay.position(2, k3) >= 0;
  }

  Index size() const { return comps_[0].size() + comps_[1].size() + comps_[2].size(); }

  SpectralVector& operator+=(const SpectralVector& o) {
    check_same(o);
    for (int c = 0; c < 3; ++c) comps_[c] += o.comps_[c];
    return *this;
  }
  SpectralVector& operator-=(const SpectralVector& o) {
    check_same(o);
    for (int c = 0; c < 3; ++c) comps_[c] -= o.comps_[c];
    return *this;
  }
  SpectralVector& operator*=(Scalar s) {
    for (auto& c : comps_) c *= s;
    return *this;
  }
  friend SpectralVector operator+(SpectralVector a, const SpectralVector& b) { return a += b; }
  friend SpectralVector operator-(SpectralVector a, const SpectralVector& b) { return a -= b; }
  friend SpectralVector operator*(Scalar s, SpectralVector a) { return a *= s; }
  friend SpectralVector operator*(SpectralVector a, Scalar s) { return a *= s; }

 private:
  void check_same(const SpectralVector& o) const {
    if (o.basis_ != basis_) throw BasisError("vector fields on different basis families");
  }

  Index position(int c, int k1, int k2, int k3) const {
    const Layout lay = layout(c);
    const Index i0 = lay.position(0, k1), i1 = lay.position(1, k2), i2 = lay.position(2, k3);
    if (i0 < 0 || i1 < 0 || i2 < 0) throw RangeError("mode not carried by this vector component");
    return lay.flat(i0, i1, i2);
  }

  DomainPtr domain_;
  Basis basis_;
  std::array<Coefficients, 3> comps_;
};

using RealScalarField = SpectralScalar<double>;
using ComplexScalarField = SpectralScalar<Complex>;
using RealVectorField = SpectralVector<double>;

// ---------------------------------------------------------------------------
// Transforms. Inverse: coefficients -> samples at the collocation nodes.
// Forward: samples -> coefficients. forward(inverse(c)) == c for every family.

template <typename Scalar>
Nodal<Scalar> inverse_transform(const SpectralScalar<Scalar>& f) {
  return synthesize<Scalar>(f.domain(), f.layout(), f.coeffs());
}

template <typename Scalar>
NodalVector<Scalar> inverse_transform(const SpectralVector<Scalar>& v) {
  NodalVector<Scalar> out;
  for (int c = 0; c < 3; ++c) out[c] = synthesize<Scalar>(v.domain(), v.layout(c), v[c]);
  return out;
}

template <typename Scalar>
SpectralScalar<Scalar> forward_transform(const DomainPtr& d, const Nodal<Scalar>& samples) {
  return SpectralScalar<Scalar>(d, analyze<Scalar>(*d, d->layout(Basis::DirichletScalar, 0), samples));
}

template <typename Scalar>
SpectralVector<Scalar> forward_transform(const DomainPtr& d, Basis basis, const NodalVector<Scalar>& samples) {
  if (basis == Basis::DirichletScalar) throw BasisError("vector transform needs a vector basis family");
  std::array<Nodal<Scalar>, 3> comps;
  for (int c = 0; c < 3; ++c) comps[c] = analyze<Scalar>(*d, d->layout(basis, c), samples[c]);
  return SpectralVector<Scalar>(d, basis, std::move(comps));
}

}  // namespace msdd
