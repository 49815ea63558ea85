#include <cmath>
#include <numbers>
#include <vector>

#include <Eigen/Eigenvalues>

#include "msdd/estimates.hpp"
#include "msdd/operators.hpp"

namespace msdd {

namespace {

// ---------------------------------------------------------------------------
// Exact 1D integrals of products of sin(k pi x / L) and cos(k pi x / L) on [0, L]

struct Wave {
  double c;
  bool sine;
  int j;
};

using Waves = std::vector<Wave>;

/// Multiplies every term by sin(k theta) or cos(k theta) (product-to-sum).
Waves multiply(const Waves& f, bool sine, int k) {
  Waves out;
  out.reserve(2 * f.size());
  for (const Wave& w : f) {
    const int a = w.j, b = k;
    const double h = 0.5 * w.c;
    if (w.sine && sine) {
      out.push_back({h, false, a - b});
      out.push_back({-h, false, a + b});
    } else if (w.sine && !sine) {
      out.push_back({h, true, a + b});
      out.push_back({h, true, a - b});
    } else if (!w.sine && sine) {
      out.push_back({h, true, a + b});
      out.push_back({-h, true, a - b});
    } else {
      out.push_back({h, false, a - b});
      out.push_back({h, false, a + b});
    }
  }
  return out;
}

double integrate(const Waves& f, double L) {
  double s = 0.0;
  for (const Wave& w : f) {
    if (w.sine) {
      if (w.j != 0 && (w.j % 2 != 0)) s += w.c * 2.0 * L / (static_cast<double>(w.j) * std::numbers::pi);
    } else if (w.j == 0) {
      s += w.c * L;
    }
  }
  return s;
}

double normalization(bool sine, int k, double L) { return (!sine && k == 0) ? std::sqrt(1.0 / L) : std::sqrt(2.0 / L); }

/// Nonzero entries (m, n, value) of an N x N table over sine modes m, n = 1..N.
struct Table {
  std::vector<int> m, n;
  std::vector<double> v;
  void add(int mi, int ni, double val) {
    if (std::abs(val) < 1e-300) return;
    m.push_back(mi);
    n.push_back(ni);
    v.push_back(val);
  }
};

/// int e_m g e_n over one axis for normalized sines e and a middle factor g
/// given as (kind, frequency, prefactor). `cos_right` swaps e_n for the
/// normalized cosine of the same frequency.
Table axis_table(double L, int N, bool g_sine, int q, double g_scale, bool cos_right) {
  Table t;
  for (int mi = 1; mi <= N; ++mi) {
    for (int ni = 1; ni <= N; ++ni) {
      Waves f{{1.0, true, mi}};
      f = multiply(f, g_sine, q);
      f = multiply(f, !cos_right, ni);
      const double val = integrate(f, L) * normalization(true, mi, L) * g_scale *
                         normalization(!cos_right, ni, L);
      t.add(mi - 1, ni - 1, val);
    }
  }
  return t;
}

struct Term {
  double coef;
  std::array<const Table*, 3> tables;
};

Eigen::MatrixXd accumulate(const std::vector<Term>& terms, const std::array<int, 3>& N) {
  const Index n = static_cast<Index>(N[0]) * N[1] * N[2];
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(n, n);
  for (const Term& term : terms) {
    const Table &t0 = *term.tables[0], &t1 = *term.tables[1], &t2 = *term.tables[2];
    for (std::size_t e2 = 0; e2 < t2.v.size(); ++e2) {
      const double v2 = term.coef * t2.v[e2];
      const Index r2 = static_cast<Index>(t2.m[e2]) * N[1], c2 = static_cast<Index>(t2.n[e2]) * N[1];
      for (std::size_t e1 = 0; e1 < t1.v.size(); ++e1) {
        const double v12 = v2 * t1.v[e1];
        const Index r1 = (r2 + t1.m[e1]) * N[0], c1 = (c2 + t1.n[e1]) * N[0];
        for (std::size_t e0 = 0; e0 < t0.v.size(); ++e0) {
          out(r1 + t0.m[e0], c1 + t0.n[e0]) += v12 * t0.v[e0];
        }
      }
    }
  }
  return out;
}

void check_dense(Index n) {
  if (n > kDenseEigenLimit) {
    throw NumericalError("Galerkin space of dimension " + std::to_string(n) + " exceeds the dense limit " +
                         std::to_string(kDenseEigenLimit));
  }
}

Eigen::VectorXd hermitian_eigenvalues(const Eigen::MatrixXcd& M) {
  const Eigen::MatrixXcd sym = 0.5 * (M + M.adjoint());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(sym, Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) throw NumericalError("Hermitian eigensolver did not converge");
  return es.eigenvalues();
}

Eigen::ArrayXd psi_kappa_squared(const BoxDomain& d) { return d.kappa_squared(Basis::DirichletScalar, 0); }

}  // namespace

Eigen::MatrixXcd assemble_T(const RealVectorField& A) {
  if (A.basis() != Basis::MaxwellVector) throw BasisError("assemble_T expects a MaxwellVector field");
  const BoxDomain& d = A.domain();
  const std::array<int, 3> N = d.mode_counts();
  check_dense(static_cast<Index>(N[0]) * N[1] * N[2]);

  // R_mn = sum_c int e_m A_c d_c e_n
  std::vector<Table> tables;
  tables.reserve(4096);
  std::vector<Term> r_terms;
  std::vector<std::array<std::size_t, 3>> r_index;
  std::vector<double> r_coef;
  // cache per (axis, kind, q): sine-sine-sine and sine-cosine-(kappa)cosine tables
  std::array<std::vector<std::ptrdiff_t>, 3> sss_id, scc_id, scs_id;
  auto cached = [&](std::vector<std::ptrdiff_t>& ids, std::size_t q, auto make) -> std::size_t {
    if (ids.size() <= q) ids.resize(q + 1, -1);
    if (ids[q] < 0) {
      tables.push_back(make());
      ids[q] = static_cast<std::ptrdiff_t>(tables.size() - 1);
    }
    return static_cast<std::size_t>(ids[q]);
  };

  for (int c = 0; c < 3; ++c) {
    detail::for_each_mode(A.layout(c), [&](Index idx, const std::array<int, 3>& p) {
      const double a = A[c](idx);
      if (a == 0.0) return;
      std::array<std::size_t, 3> ids{};
      for (int ax = 0; ax < 3; ++ax) {
        const double L = d.length(ax);
        const std::size_t q = static_cast<std::size_t>(p[ax]);
        if (ax == c) {
          // e_m cos_p (d/dx e_n) = e_m cos_p kappa_n cos_n; kappa_n applied below
          ids[ax] = cached(scc_id[ax], q, [&] {
            Table t = axis_table(L, N[ax], false, p[ax], normalization(false, p[ax], L), true);
            for (std::size_t e = 0; e < t.v.size(); ++e) t.v[e] *= d.wavenumber(ax, t.n[e] + 1);
            return t;
          });
        } else {
          ids[ax] = cached(sss_id[ax], q, [&] {
            return axis_table(L, N[ax], true, p[ax], normalization(true, p[ax], L), false);
          });
        }
      }
      r_index.push_back(ids);
      r_coef.push_back(a);
    });
  }

  // |A|^2 as a cosine series sum_q w_q prod_a cos(q_a theta_a), unnormalized cosines
  const std::array<int, 3> Q{2 * N[0] + 1, 2 * N[1] + 1, 2 * N[2] + 1};
  Eigen::ArrayXd w = Eigen::ArrayXd::Zero(static_cast<Index>(Q[0]) * Q[1] * Q[2]);
  for (int c = 0; c < 3; ++c) {
    const Layout lay = A.layout(c);
    std::vector<std::pair<std::array<int, 3>, double>> nz;
    detail::for_each_mode(lay, [&](Index idx, const std::array<int, 3>& p) {
      if (A[c](idx) != 0.0) nz.push_back({p, A[c](idx)});
    });
    for (const auto& [p, ap] : nz) {
      for (const auto& [r, ar] : nz) {
        // per axis: f_p f_r = s * (cos(|p-r|) +- cos(p+r)) / 2 * norms
        std::array<std::array<std::pair<int, double>, 2>, 3> parts;
        for (int ax = 0; ax < 3; ++ax) {
          const bool sine = lay.kinds[ax] == AxisKind::Sine;
          const double L = d.length(ax);
          const double nn = normalization(sine, p[ax], L) * normalization(sine, r[ax], L);
          parts[ax][0] = {std::abs(p[ax] - r[ax]), 0.5 * nn};
          parts[ax][1] = {p[ax] + r[ax], (sine ? -0.5 : 0.5) * nn};
        }
        const double ar_ap = ap * ar;
        for (int b0 = 0; b0 < 2; ++b0) {
          for (int b1 = 0; b1 < 2; ++b1) {
            for (int b2 = 0; b2 < 2; ++b2) {
              const int q0 = parts[0][b0].first, q1 = parts[1][b1].first, q2 = parts[2][b2].first;
              w(q0 + Q[0] * (q1 + Q[1] * q2)) +=
                  ar_ap * parts[0][b0].second * parts[1][b1].second * parts[2][b2].second;
            }
          }
        }
      }
    }
  }
  std::vector<std::array<std::size_t, 3>> q_index;
  std::vector<double> q_coef;
  for (int q2 = 0; q2 < Q[2]; ++q2) {
    for (int q1 = 0; q1 < Q[1]; ++q1) {
      for (int q0 = 0; q0 < Q[0]; ++q0) {
        const double wq = w(q0 + Q[0] * (q1 + Q[1] * q2));
        if (wq == 0.0) continue;
        const std::array<int, 3> q{q0, q1, q2};
        std::array<std::size_t, 3> ids{};
        for (int ax = 0; ax < 3; ++ax) {
          ids[ax] = cached(scs_id[ax], static_cast<std::size_t>(q[ax]),
                           [&] { return axis_table(d.length(ax), N[ax], false, q[ax], 1.0, false); });
        }
        q_index.push_back(ids);
        q_coef.push_back(wq);
      }
    }
  }

  // tables is stable from here on; build term pointers
  auto terms_of = [&](const std::vector<std::array<std::size_t, 3>>& idx, const std::vector<double>& coef) {
    std::vector<Term> t;
    t.reserve(idx.size());
    for (std::size_t i = 0; i < idx.size(); ++i) {
      t.push_back({coef[i], {&tables[idx[i][0]], &tables[idx[i][1]], &tables[idx[i][2]]}});
    }
    return t;
  };
  const Eigen::MatrixXd R = accumulate(terms_of(r_index, r_coef), N);
  const Eigen::MatrixXd Qm = accumulate(terms_of(q_index, q_coef), N);
  Eigen::MatrixXcd T(R.rows(), R.cols());
  T.real() = Qm;
  T.imag() = -2.0 * R;
  return T;
}

double hermitian_defect(const Eigen::MatrixXcd& T) { return (T - T.adjoint()).cwiseAbs().maxCoeff(); }

RayleighReport rayleigh_equivalence(const RealVectorField& A, EquivalenceOrder order, double phi) {
  const BoxDomain& d = A.domain();
  const Eigen::MatrixXcd T = assemble_T(A);
  const Eigen::ArrayXd ksq = psi_kappa_squared(d);
  const Index n = T.rows();
  // M = B^{-1/2} K B^{-1/2}; for H1, K - B = T so M = I + B^{-1/2} T B^{-1/2} exactly
  Eigen::MatrixXcd M;
  RayleighReport rep;
  rep.order = order;
  if (order == EquivalenceOrder::H1) {
    const Eigen::VectorXcd s = (1.0 + ksq).rsqrt().cast<Complex>().matrix();
    M = s.asDiagonal() * T * s.asDiagonal();
    M.diagonal().array() += Complex(1.0);
    rep.pair = "||D psi||^2 + ||psi||^2 vs ||psi||_H1^2";
  } else {
    if (!std::isfinite(phi)) throw InvalidPotential("phi must be finite");
    Eigen::MatrixXcd H = 0.5 * T;
    H.diagonal().array() += (0.5 * ksq + phi).cast<Complex>();
    Eigen::MatrixXcd K = H.adjoint() * H;
    K.diagonal().array() += Complex(1.0);
    const Eigen::VectorXcd s = (1.0 + ksq).square().rsqrt().cast<Complex>().matrix();
    M = s.asDiagonal() * K * s.asDiagonal();
    rep.pair = "||H psi||^2 + ||psi||^2 vs ||psi||_H2^2";
  }
  const Eigen::VectorXd ev = hermitian_eigenvalues(M);
  rep.c1 = ev(0);
  rep.c2 = ev(n - 1);
  rep.A_H1 = norm(A, NormKind::H1);
  rep.grid = d.mode_counts();
  rep.dimension = n;
  return rep;
}

RelativeBound relative_bound_T(const RealVectorField& A, double delta) {
  if (!(delta > 0.0) || !std::isfinite(delta)) throw RangeError("delta must be a positive finite number");
  const double dA = norm(divergence(A), NormKind::L2);
  if (dA > 1e-10 * std::max(1.0, norm(A, NormKind::H1))) {
    throw BasisError("relative bound needs a divergence-free A (||div A|| = " + std::to_string(dA) + ")");
  }
  const Eigen::MatrixXcd T = assemble_T(A);
  const Eigen::ArrayXd L = 1.0 + psi_kappa_squared(A.domain());
  Eigen::MatrixXcd plus = T, minus = -T;
  plus.diagonal().array() -= (delta * L).cast<Complex>();
  minus.diagonal().array() -= (delta * L).cast<Complex>();
  RelativeBound r;
  r.delta = delta;
  r.plus = hermitian_eigenvalues(plus).maxCoeff();
  r.minus = hermitian_eigenvalues(minus).maxCoeff();
  r.C = std::max({0.0, r.plus, r.minus});
  return r;
}

}  // namespace msdd
