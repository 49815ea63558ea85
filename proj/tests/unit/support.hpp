#pragma once

#include <cstdint>
#include <string>

#include "msdd/field.hpp"
#include "msdd/operators.hpp"
#include "msdd/rng.hpp"

namespace msdd::testing {

inline RealScalarField random_real(const DomainPtr& d, std::uint64_t seed) {
  NamedStream rng(seed, "test-real-scalar");
  RealScalarField f(d);
  for (Index i = 0; i < f.coeffs().size(); ++i) f.coeffs()(i) = rng.normal();
  return f;
}

inline ComplexScalarField random_complex(const DomainPtr& d, std::uint64_t seed, double decay = 0.0) {
  NamedStream rng(seed, "test-complex-scalar");
  ComplexScalarField f(d);
  detail::for_each_mode(f.layout(), [&](Index n, const std::array<int, 3>& k) {
    const double w = 1.0 / (1.0 + decay * (k[0] * k[0] + k[1] * k[1] + k[2] * k[2]));
    f.coeffs()(n) = w * Complex(rng.normal(), rng.normal());
  });
  return f;
}

inline RealVectorField random_vector(const DomainPtr& d, Basis b, std::uint64_t seed, double decay = 0.0) {
  NamedStream rng(seed, std::string("test-vector-") + to_string(b));
  RealVectorField v(d, b);
  for (int c = 0; c < 3; ++c) {
    detail::for_each_mode(v.layout(c), [&](Index n, const std::array<int, 3>& k) {
      const double w = 1.0 / (1.0 + decay * (k[0] * k[0] + k[1] * k[1] + k[2] * k[2]));
      v[c](n) = w * rng.normal();
    });
  }
  return v;
}

template <typename Derived>
double max_abs(const Eigen::ArrayBase<Derived>& a) {
  return a.size() == 0 ? 0.0 : a.abs().maxCoeff();
}

}  // namespace msdd::testing
