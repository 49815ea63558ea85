#pragma once

#include <cmath>
#include <utility>

#include "msdd/field.hpp"

namespace msdd {

namespace detail {

/// Visits every coefficient of a layout with its flat index and mode triple.
template <typename F>
void for_each_mode(const Layout& lay, F&& f) {
  for (Index i2 = 0; i2 < lay.extents[2]; ++i2) {
    for (Index i1 = 0; i1 < lay.extents[1]; ++i1) {
      for (Index i0 = 0; i0 < lay.extents[0]; ++i0) {
        const std::array<int, 3> k{lay.mode(0, i0), lay.mode(1, i1), lay.mode(2, i2)};
        f(lay.flat(i0, i1, i2), k);
      }
    }
  }
}

/// Flat index of mode k in `lay`, -1 if not carried.
inline Index find_mode(const Layout& lay, const std::array<int, 3>& k) {
  const Index i0 = lay.position(0, k[0]), i1 = lay.position(1, k[1]), i2 = lay.position(2, k[2]);
  if (i0 < 0 || i1 < 0 || i2 < 0) return -1;
  return lay.flat(i0, i1, i2);
}

}  // namespace detail

// Sign conventions (orthonormal bases, kappa_i = k_i pi / L_i):
//   d/dx sin_k =  kappa cos_k       d/dx cos_k = -kappa sin_k
// so per mode
//   gradient:   (grad f)_i(k)  =  kappa_i f(k)
//   divergence: (div a)(k)     = -sum_i kappa_i a_i(k)
//   curl:       Maxwell -> CurlDual   kappa x a
//               CurlDual -> Maxwell   b x kappa   (the adjoint of the former)
//   laplacian:  -|kappa|^2 on every family

/// Gradient of a DirichletScalar field; lands in the MaxwellVector family.
template <typename Scalar>
SpectralVector<Scalar> gradient(const SpectralScalar<Scalar>& f) {
  const BoxDomain& d = f.domain();
  SpectralVector<Scalar> g(f.domain_ptr(), Basis::MaxwellVector);
  const Layout src = f.layout();
  for (int i = 0; i < 3; ++i) {
    const Layout dst = d.layout(Basis::MaxwellVector, i);
    detail::for_each_mode(src, [&](Index n, const std::array<int, 3>& k) {
      g[i](detail::find_mode(dst, k)) = d.wavenumber(i, k[i]) * f.coeffs()(n);
    });
  }
  return g;
}

/// Transpose of the i-th gradient component: Maxwell component i -> DirichletScalar.
template <typename Scalar>
Nodal<Scalar> gradient_transpose(const BoxDomain& d, int i, const Nodal<Scalar>& comp) {
  const Layout src = d.layout(Basis::MaxwellVector, i);
  const Layout dst = d.layout(Basis::DirichletScalar, 0);
  Nodal<Scalar> out(dst.size());
  detail::for_each_mode(dst, [&](Index n, const std::array<int, 3>& k) {
    out(n) = d.wavenumber(i, k[i]) * comp(detail::find_mode(src, k));
  });
  return out;
}

template <typename Scalar>
SpectralScalar<Scalar> divergence(const SpectralVector<Scalar>& v) {
  if (v.basis() != Basis::MaxwellVector) throw BasisError("divergence expects a MaxwellVector field");
  const BoxDomain& d = v.domain();
  SpectralScalar<Scalar> out(v.domain_ptr());
  for (int i = 0; i < 3; ++i) out.coeffs() -= gradient_transpose<Scalar>(d, i, v[i]);
  return out;
}

/// Maxwell -> CurlDual (kappa x a) or CurlDual -> Maxwell (b x kappa).
template <typename Scalar>
SpectralVector<Scalar> curl(const SpectralVector<Scalar>& v) {
  const BoxDomain& d = v.domain();
  const bool from_maxwell = v.basis() == Basis::MaxwellVector;
  const Basis target = from_maxwell ? Basis::CurlDualVector : Basis::MaxwellVector;
  SpectralVector<Scalar> out(v.domain_ptr(), target);
  std::array<Layout, 3> src{v.layout(0), v.layout(1), v.layout(2)};
  for (int c = 0; c < 3; ++c) {
    const int c1 = (c + 1) % 3, c2 = (c + 2) % 3;
    detail::for_each_mode(out.layout(c), [&](Index n, const std::array<int, 3>& k) {
      const Index p2 = detail::find_mode(src[c2], k);
      const Index p1 = detail::find_mode(src[c1], k);
      const Scalar a2 = p2 >= 0 ? v[c2](p2) : Scalar(0);
      const Scalar a1 = p1 >= 0 ? v[c1](p1) : Scalar(0);
      const double k1 = d.wavenumber(c1, k[c1]), k2 = d.wavenumber(c2, k[c2]);
      const Scalar val = k1 * a2 - k2 * a1;
      out[c](n) = from_maxwell ? val : -val;
    });
  }
  return out;
}

template <typename Scalar>
SpectralScalar<Scalar> laplacian(const SpectralScalar<Scalar>& f) {
  SpectralScalar<Scalar> out = f;
  out.coeffs() *= -f.domain().kappa_squared(Basis::DirichletScalar, 0).template cast<Scalar>();
  return out;
}

template <typename Scalar>
SpectralVector<Scalar> laplacian(const SpectralVector<Scalar>& v) {
  SpectralVector<Scalar> out = v;
  for (int c = 0; c < 3; ++c) out[c] *= -v.domain().kappa_squared(v.basis(), c).template cast<Scalar>();
  return out;
}

/// d/dx_axis of one component, returned with the layout it lands in
/// (sine <-> cosine swap along `axis`; the cosine k = 0 mode is dropped or
/// receives zero).
template <typename Scalar>
std::pair<Layout, Nodal<Scalar>> partial_derivative(const BoxDomain& d, const Layout& src, const Nodal<Scalar>& c,
                                                    int axis) {
  Layout dst = src;
  const bool was_sine = src.kinds[axis] == AxisKind::Sine;
  dst.kinds[axis] = was_sine ? AxisKind::Cosine : AxisKind::Sine;
  dst.extents[axis] = was_sine ? src.extents[axis] + 1 : src.extents[axis] - 1;
  Nodal<Scalar> out = Nodal<Scalar>::Zero(dst.size());
  detail::for_each_mode(src, [&](Index n, const std::array<int, 3>& k) {
    const Index m = detail::find_mode(dst, k);
    if (m < 0) return;
    const double kk = d.wavenumber(axis, k[axis]);
    out(m) = (was_sine ? kk : -kk) * c(n);
  });
  return {dst, out};
}

// ---------------------------------------------------------------------------
// Inner products and norms. Coefficient inner products equal L2 inner
// products of the represented functions (orthonormal bases).

template <typename Scalar>
Scalar inner(const SpectralScalar<Scalar>& f, const SpectralScalar<Scalar>& g) {
  if constexpr (is_complex<Scalar>::value) {
    return (f.coeffs().conjugate() * g.coeffs()).sum();
  } else {
    return (f.coeffs() * g.coeffs()).sum();
  }
}

template <typename Scalar>
Scalar inner(const SpectralVector<Scalar>& u, const SpectralVector<Scalar>& w) {
  if (u.basis() != w.basis()) throw BasisError("inner product across basis families");
  Scalar s(0);
  for (int c = 0; c < 3; ++c) {
    if constexpr (is_complex<Scalar>::value) {
      s += (u[c].conjugate() * w[c]).sum();
    } else {
      s += (u[c] * w[c]).sum();
    }
  }
  return s;
}

enum class NormKind { L2, H1, H2, Lp };

namespace detail {

template <typename Scalar>
double weighted_sum(const Nodal<Scalar>& c, const Eigen::ArrayXd& ksq, int power) {
  Eigen::ArrayXd w = Eigen::ArrayXd::Ones(ksq.size());
  for (int p = 0; p < power; ++p) w *= (1.0 + ksq);
  return (w * c.abs2()).sum();
}

void check_lp_exponent(double p);

}  // namespace detail

/// L2/H1/H2 from coefficients, Lp (2 <= p <= 6) by midpoint quadrature.
template <typename Scalar>
double norm(const SpectralScalar<Scalar>& f, NormKind kind, double p = 2.0) {
  const Eigen::ArrayXd& ksq = f.domain().kappa_squared(Basis::DirichletScalar, 0);
  switch (kind) {
    case NormKind::L2:
      return std::sqrt(detail::weighted_sum<Scalar>(f.coeffs(), ksq, 0));
    case NormKind::H1:
      return std::sqrt(detail::weighted_sum<Scalar>(f.coeffs(), ksq, 1));
    case NormKind::H2:
      return std::sqrt(detail::weighted_sum<Scalar>(f.coeffs(), ksq, 2));
    case NormKind::Lp: {
      detail::check_lp_exponent(p);
      const Nodal<Scalar> s = inverse_transform(f);
      return std::pow(f.domain().cell_volume() * s.abs().pow(p).sum(), 1.0 / p);
    }
  }
  return 0.0;
}

template <typename Scalar>
double norm(const SpectralVector<Scalar>& v, NormKind kind, double p = 2.0) {
  if (kind == NormKind::Lp) {
    detail::check_lp_exponent(p);
    const NodalVector<Scalar> s = inverse_transform(v);
    const Eigen::ArrayXd mag = (s[0].abs2() + s[1].abs2() + s[2].abs2()).sqrt();
    return std::pow(v.domain().cell_volume() * mag.pow(p).sum(), 1.0 / p);
  }
  const int power = kind == NormKind::L2 ? 0 : (kind == NormKind::H1 ? 1 : 2);
  double s = 0.0;
  for (int c = 0; c < 3; ++c) s += detail::weighted_sum<Scalar>(v[c], v.domain().kappa_squared(v.basis(), c), power);
  return std::sqrt(s);
}

/// ||grad v||^2 = sum |kappa|^2 |a|^2 summed over components.
template <typename Scalar>
double gradient_norm_squared(const SpectralVector<Scalar>& v) {
  double s = 0.0;
  for (int c = 0; c < 3; ++c) s += (v.domain().kappa_squared(v.basis(), c) * v[c].abs2()).sum();
  return s;
}

template <typename Scalar>
double gradient_norm_squared(const SpectralScalar<Scalar>& f) {
  return (f.domain().kappa_squared(Basis::DirichletScalar, 0) * f.coeffs().abs2()).sum();
}

// ---------------------------------------------------------------------------
// Dealiasing and pointwise products.

/// Zeroes every coefficient with k_i > 2 N_i / 3 on any axis.
template <typename Scalar>
void dealias_filter(const BoxDomain& d, const Layout& lay, Nodal<Scalar>& coeffs) {
  detail::for_each_mode(lay, [&](Index n, const std::array<int, 3>& k) {
    for (int a = 0; a < 3; ++a) {
      if (3 * k[a] > 2 * d.modes(a)) {
        coeffs(n) = Scalar(0);
        return;
      }
    }
  });
}

template <typename Scalar>
void dealias_filter(SpectralScalar<Scalar>& f) {
  dealias_filter<Scalar>(f.domain(), f.layout(), f.coeffs());
}

template <typename Scalar>
void dealias_filter(SpectralVector<Scalar>& v) {
  for (int c = 0; c < 3; ++c) dealias_filter<Scalar>(v.domain(), v.layout(c), v[c]);
}

/// Nodewise product. With `dealias`, the product is projected onto the
/// DirichletScalar family and filtered with the 2/3 rule before resampling.
template <typename Scalar>
Nodal<Scalar> pointwise_product(const DomainPtr& d, const Nodal<Scalar>& a, const Nodal<Scalar>& b,
                                bool dealias = false) {
  if (a.size() != d->node_count() || b.size() != d->node_count()) {
    throw DimensionError("pointwise product: samples do not match the collocation grid");
  }
  Nodal<Scalar> prod = a * b;
  if (!dealias) return prod;
  SpectralScalar<Scalar> f = forward_transform<Scalar>(d, prod);
  dealias_filter(f);
  return inverse_transform(f);
}

}  // namespace msdd
