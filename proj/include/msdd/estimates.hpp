#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "msdd/dynamics.hpp"
#include "msdd/field.hpp"

namespace msdd {

// ---------------------------------------------------------------------------
// Maxwell operator Lambda = -Lap on divergence-free MaxwellVector fields

struct LambdaMin {
  double value = 0.0;              // smallest |kappa|^2 carrying a divergence-free field
  std::array<int, 3> mode{0, 0, 0};
  double poincare_constant = 0.0;  // 1 / value: ||A||^2 <= C ||grad A||^2
};

/// Exact minimum by enumerating every mode k and the dimension of the
/// divergence-free subspace it carries.
LambdaMin lambda_min(const BoxDomain& d);

struct LanczosResult {
  double value = 0.0;
  double residual = 0.0;
  int iterations = 0;
  bool converged = false;
};

/// Smallest eigenvalue of P Lambda P + mu (I - P) with Lambda assembled by
/// nodal quadrature of every partial derivative d_k A_i and mu above the
/// spectrum, by Lanczos with full reorthogonalisation.
LanczosResult lambda_min_iterative(const DomainPtr& d, double tol = 1e-12, std::uint64_t seed = 1);

// ---------------------------------------------------------------------------
// Magnetic Schroedinger operator on the DirichletScalar space (Galerkin, exact integrals)

/// Largest Galerkin space handled by the dense eigensolvers.
constexpr Index kDenseEigenLimit = 12 * 12 * 12;

/// T = -2i A.grad + |A|^2 as a Hermitian matrix on the DirichletScalar modes
/// of A's domain, every entry an exact trigonometric integral.
Eigen::MatrixXcd assemble_T(const RealVectorField& A);

/// max |T - T^dagger| entrywise.
double hermitian_defect(const Eigen::MatrixXcd& T);

enum class EquivalenceOrder { H1, H2 };

/// Extreme generalised eigenvalues of a quadratic-form pair on the discrete space:
///   H1: (||D psi||^2 + ||psi||^2,  ||psi||_H1^2)
///   H2: (||H psi||^2 + ||psi||^2,  ||psi||_H2^2), H = 1/2 (-Lap + T) + phi (constant phi, A0 = 0)
struct RayleighReport {
  double c1 = 0.0;
  double c2 = 0.0;
  EquivalenceOrder order = EquivalenceOrder::H1;
  std::string pair;
  double A_H1 = 0.0;
  std::array<int, 3> grid{0, 0, 0};
  Index dimension = 0;
};

RayleighReport rayleigh_equivalence(const RealVectorField& A, EquivalenceOrder order, double phi = 0.0);

/// C_delta = max(0, lambda_max(T - delta L), lambda_max(-T - delta L)), L = diag(1 + |kappa|^2).
struct RelativeBound {
  double delta = 0.0;
  double C = 0.0;
  double plus = 0.0;   // lambda_max(T - delta L)
  double minus = 0.0;  // lambda_max(-T - delta L)
};

RelativeBound relative_bound_T(const RealVectorField& A, double delta);

// ---------------------------------------------------------------------------
// Lyapunov functional

/// Two-sided bound c E <= Phi <= C E with C_Lambda = lambda_min^{-1/2}.
struct PchConstants {
  double C_Lambda = 0.0;
  double c = 0.0;
  double C = 0.0;
};

PchConstants pch_constants(double lambda_min, double eta);

/// Fit of Phi(t) <= Phi(t0) e^{-beta (t - t0)} + C_p / beta over a recorded series,
/// with a relative slack of 1e-12.
struct LyapunovFit {
  double beta = 0.0;
  double Cp = 0.0;
  double plateau = 0.0;  // C_p / beta
  double phi0 = 0.0;
  double t0 = 0.0;
  bool degenerate = false;
  bool envelope_ok = false;
  double envelope(double t) const;
};

/// Throws InsufficientData for fewer than 10 samples.
LyapunovFit lyapunov_fit(const std::vector<double>& t, const std::vector<double>& phi);
LyapunovFit lyapunov_fit(const std::vector<DiagnosticsRow>& rows);

/// Admissible (eta, delta) with min(eta (1 - 3 delta), sigma - eta - eta/delta, gamma - C2 eta/delta) > 0,
/// chosen to maximise that minimum.
struct LyapunovParameters {
  bool feasible = false;
  double eta = 0.0;
  double delta = 0.0;
  double margin = 0.0;
};

LyapunovParameters lyapunov_parameters(double sigma, double gamma, double C2);

/// Largest observed |<j, A>| / (||grad A|| E^{1/2} ||D psi||) over states (C1),
/// and C2 = C1^2 / 2 from Young's inequality and ||D psi||^2 <= 2E.
struct CurrentTermConstants {
  double C1 = 0.0;
  double C2 = 0.0;
  int samples = 0;
};

CurrentTermConstants current_term_constants(const std::vector<State>& states, const Model& m);

/// Empirical max of ||psi||_{L^p}^2 / E over random psi at fixed A.
double embedding_ratio(const RealVectorField& A, const PotentialSet& potential, double p, int samples,
                       std::uint64_t seed, bool coulomb = true);

/// Smallest C with Ec(t) <= C (t + 1) over the series.
double linear_growth_constant(const std::vector<DiagnosticsRow>& rows);

// ---------------------------------------------------------------------------
// Absorbing set

struct AbsorbingTrajectory {
  double R = 0.0;
  std::vector<double> t;
  std::vector<double> x2;  // ||X(t)||^2
  double tail_bound = 0.0;  // max of x2 over the last quarter
  double entry_time = -1.0;
  bool stays_inside = false;
  bool diverged = false;
  std::string message;
};

struct AbsorbingReport {
  std::vector<AbsorbingTrajectory> runs;
  double B_hat = 0.0;   // max tail bound; the ball is ||X||^2 <= 2 B_hat
  double spread = 0.0;  // (max - min) / max of tail bounds
  bool entry_monotone = false;
  bool all_stay = false;
  bool any_diverged = false;
};

/// One trajectory per R (initial ||X(0)|| = R, shape from `shape`). "Stays"
/// means inside the ball at every sample from entry on, and entry happens
/// no later than T/2.
AbsorbingReport absorbing_experiment(const std::vector<double>& R_list, const Model& m, const InitialSpec& shape,
                                     std::uint64_t seed, int record_every = 10);

// ---------------------------------------------------------------------------
// Charge balance Q(t) - Q(0) = -int (2 eps E + 2 gamma E Q)

struct ChargeLawCheck {
  double residual = 0.0;        // max over steps of |Q(t) - Q(0) + accumulated loss|
  double worst_increase = 0.0;  // max over steps of Q(t_{n+1}) - Q(t_n), clipped at 0
};

/// Integrates `steps` RK4 steps of size T / steps from `initial`.
ChargeLawCheck charge_law_check(const State& initial, const Model& m, double T, long steps);

// ---------------------------------------------------------------------------
// Closed-form charge law for a single invariant mode

struct ChargeOracle {
  double Q0 = 0.0;
  double mu = 0.0;  // E / Q of the mode
  double eps = 0.0;
  double gamma = 0.0;
  double operator()(double t) const;
};

/// Throws OracleInvalid unless A = Pi = 0, no pump, Coulomb off, phi constant
/// and psi is a multiple of the (1,1,1) mode.
ChargeOracle charge_ode_oracle(const State& initial, const Model& m);

}  // namespace msdd
