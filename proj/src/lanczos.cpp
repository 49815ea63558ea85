#include <cmath>
#include <limits>

#include <Eigen/Eigenvalues>

#include "msdd/estimates.hpp"
#include "msdd/gauge.hpp"
#include "msdd/operators.hpp"
#include "msdd/rng.hpp"

namespace msdd {

namespace {

Eigen::VectorXd pack(const RealVectorField& v) {
  Eigen::VectorXd x(v.size());
  Index o = 0;
  for (int c = 0; c < 3; ++c) {
    x.segment(o, v[c].size()) = v[c].matrix();
    o += v[c].size();
  }
  return x;
}

RealVectorField unpack(const DomainPtr& d, const Eigen::VectorXd& x) {
  RealVectorField v(d, Basis::MaxwellVector);
  Index o = 0;
  for (int c = 0; c < 3; ++c) {
    v[c] = x.segment(o, v[c].size()).array();
    o += v[c].size();
  }
  return v;
}

/// Transpose of partial_derivative for the same source layout.
Nodal<double> partial_derivative_transpose(const BoxDomain& d, const Layout& src, const Layout& dst,
                                           const Nodal<double>& g, int axis) {
  const bool was_sine = src.kinds[axis] == AxisKind::Sine;
  Nodal<double> out = Nodal<double>::Zero(src.size());
  detail::for_each_mode(src, [&](Index n, const std::array<int, 3>& k) {
    const Index m = detail::find_mode(dst, k);
    if (m < 0) return;
    const double kk = d.wavenumber(axis, k[axis]);
    out(n) = (was_sine ? kk : -kk) * g(m);
  });
  return out;
}

/// Lambda a = sum_k d_k^T W d_k a with W the nodal quadrature of each derivative.
RealVectorField stiffness(const RealVectorField& a) {
  const BoxDomain& d = a.domain();
  RealVectorField out(a.domain_ptr(), Basis::MaxwellVector);
  for (int c = 0; c < 3; ++c) {
    const Layout src = a.layout(c);
    for (int axis = 0; axis < 3; ++axis) {
      const auto [dst, dc] = partial_derivative<double>(d, src, a[c], axis);
      const Nodal<double> samples = synthesize<double>(d, dst, dc);
      const Nodal<double> back = analyze<double>(d, dst, samples);
      out[c] += partial_derivative_transpose(d, src, dst, back, axis);
    }
  }
  return out;
}

}  // namespace

LambdaMin lambda_min(const BoxDomain& d) {
  LambdaMin best;
  best.value = std::numeric_limits<double>::infinity();
  for (int k2 = 0; k2 <= d.modes(2); ++k2) {
    for (int k1 = 0; k1 <= d.modes(1); ++k1) {
      for (int k0 = 0; k0 <= d.modes(0); ++k0) {
        const std::array<int, 3> k{k0, k1, k2};
        int active = 0;
        bool constrained = false;
        double ksq = 0.0;
        for (int c = 0; c < 3; ++c) {
          const double kc = d.wavenumber(c, k[c]);
          ksq += kc * kc;
          bool carried = true;
          for (int j = 0; j < 3; ++j) {
            if (j != c && k[j] < 1) carried = false;
          }
          if (!carried) continue;
          ++active;
          if (kc != 0.0) constrained = true;
        }
        const int dim = active - (constrained ? 1 : 0);
        if (dim >= 1 && ksq < best.value) {
          best.value = ksq;
          best.mode = k;
        }
      }
    }
  }
  best.poincare_constant = 1.0 / best.value;
  return best;
}

LanczosResult lambda_min_iterative(const DomainPtr& d, double tol, std::uint64_t seed) {
  const double mu = 2.0 * d->max_kappa_squared() + 1.0;
  auto apply = [&](const Eigen::VectorXd& x) {
    const RealVectorField v = unpack(d, x);
    const RealVectorField pv = leray_project(v);
    const RealVectorField lp = leray_project(stiffness(pv));
    return Eigen::VectorXd(pack(lp) + mu * (x - pack(pv)));
  };

  NamedStream rng(seed, "lanczos-start");
  const Index n = RealVectorField(d, Basis::MaxwellVector).size();
  Eigen::VectorXd q(n);
  for (Index i = 0; i < n; ++i) q(i) = rng.normal();
  q.normalize();

  const int max_iter = static_cast<int>(n);
  Eigen::MatrixXd Q(n, max_iter + 1);
  std::vector<double> alpha, beta;
  Q.col(0) = q;
  LanczosResult res;
  for (int j = 0; j < max_iter; ++j) {
    Eigen::VectorXd w = apply(Q.col(j));
    const double a = Q.col(j).dot(w);
    alpha.push_back(a);
    // full reorthogonalisation, twice
    for (int pass = 0; pass < 2; ++pass) w -= Q.leftCols(j + 1) * (Q.leftCols(j + 1).transpose() * w);
    const double b = w.norm();

    const int m = j + 1;
    Eigen::MatrixXd Tm = Eigen::MatrixXd::Zero(m, m);
    for (int i = 0; i < m; ++i) {
      Tm(i, i) = alpha[static_cast<std::size_t>(i)];
      if (i + 1 < m) Tm(i, i + 1) = Tm(i + 1, i) = beta[static_cast<std::size_t>(i)];
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(Tm);
    if (es.info() != Eigen::Success) throw NumericalError("tridiagonal eigensolver did not converge");
    const double theta = es.eigenvalues()(0);
    const double resid = b * std::abs(es.eigenvectors()(m - 1, 0));
    res.value = theta;
    res.residual = resid;
    res.iterations = m;
    if (resid <= tol * std::abs(theta) || b <= 1e-14 * std::abs(theta)) {
      res.converged = true;
      break;
    }
    beta.push_back(b);
    Q.col(j + 1) = w / b;
  }
  return res;
}

}  // namespace msdd
