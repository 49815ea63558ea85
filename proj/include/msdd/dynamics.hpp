#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "msdd/drive.hpp"
#include "msdd/field.hpp"
#include "msdd/matter.hpp"

namespace msdd {

struct Params {
  double sigma = 0.0;  // conductance damping
  double eps = 0.0;    // linear absorption
  double gamma = 0.0;  // nonlinear absorption
  double eta = 0.0;    // Lyapunov mixing weight
  bool coulomb = true;
  double dt = 1e-3;
  double T = 1.0;
  bool dealias = false;
  std::uint64_t seed = 0;
  /// Base functional of Phi: canonical energy (false) or the verbatim
  /// alternative Hamiltonian (true).
  bool phi_uses_paper_hamiltonian = false;
};

/// The point (A, Pi, psi) at time t. A and Pi are divergence-free MaxwellVector fields.
struct State {
  RealVectorField A;
  RealVectorField Pi;
  ComplexScalarField psi;
  double t = 0.0;

  explicit State(const DomainPtr& d)
      : A(d, Basis::MaxwellVector), Pi(d, Basis::MaxwellVector), psi(d) {}
  State(RealVectorField a, RealVectorField pi, ComplexScalarField p, double time)
      : A(std::move(a)), Pi(std::move(pi)), psi(std::move(p)), t(time) {}

  const DomainPtr& domain_ptr() const { return psi.domain_ptr(); }
};

/// Everything fixed during a run besides the state.
struct Model {
  DomainPtr domain;
  Params params;
  Pump pump;
  PotentialSet potential;

  Model(DomainPtr d, Params p, Pump pu, PotentialSet pot)
      : domain(std::move(d)), params(p), pump(std::move(pu)), potential(std::move(pot)) {}
};

struct Derivative {
  RealVectorField dA;
  RealVectorField dPi;
  ComplexScalarField dpsi;
  /// Rate of charge loss 2 eps E + 2 gamma E Q, so that dQ/dt = -dissipation.
  double dissipation = 0.0;
};

/// dA/dt = Pi, dPi/dt = Lap A - sigma Pi - P J, dpsi/dt = (-i - eps) H psi - gamma E psi,
/// with J = Re[conj(psi) D psi] and E = <psi, H psi>. Throws DivergenceError on
/// non-finite values.
Derivative rhs(const State& s, const Model& m);

/// One classical RK4 step. When `dissipated` is given, the integral of the
/// charge-loss rate over the step is added to it (same stage weights).
State step_rk4(const State& s, const Model& m, double dt, double* dissipated = nullptr);

/// Largest stable dt including a 0.5 safety factor.
double stability_limit(const BoxDomain& d, const Params& p);

struct DiagnosticsRow {
  double t = 0.0;
  double Q = 0.0;
  double E = 0.0;
  double Ec = 0.0;
  double H_alt = 0.0;
  double Phi = 0.0;
  double grad_A = 0.0;
  double Pi_norm = 0.0;
  double psi_H1 = 0.0;
  double div_A = 0.0;
  double boundary_residual = 0.0;
  double X_norm2 = 0.0;
};

/// Column names in CSV order.
const std::vector<std::string>& diagnostics_columns();
std::vector<double> to_values(const DiagnosticsRow& r);

/// 1/2||Pi||^2 + 1/2||curl A||^2 + 1/2||D psi||^2 + <phi,rho> + 1/2<rho,(-Lap)^{-1} rho>,
/// with D built from A + A_p(t). The Coulomb term is dropped when coulomb is off.
double canonical_energy(const State& s, const Model& m);

/// 1/2||Pi||^2 + 1/2||curl A||^2 + 1/2<psi, H0 psi>, H0 = 1/2 D^2 + phi + 1/2 A0.
double hamiltonian_paper(const State& s, const Model& m);

/// Base functional + eta <Pi, A>.
double lyapunov_phi(const State& s, const Model& m);

/// ||A||_H1^2 + ||Pi||^2 + ||psi||_H1^2.
double state_norm2(const State& s);

DiagnosticsRow diagnostics(const State& s, const Model& m);

struct RunResult {
  explicit RunResult(State s) : final_state(std::move(s)) {}

  std::vector<DiagnosticsRow> rows;
  /// Accumulated charge loss at each recorded row.
  std::vector<double> dissipated;
  State final_state;
  bool diverged = false;
  double diverged_at = 0.0;
  std::string message;
};

using SnapshotHook = std::function<void(const State&, long step)>;

/// Integrates to m.params.T, recording every `record_every` steps (and at
/// the end). Stops with partial output on divergence.
RunResult run(const State& initial, const Model& m, int record_every = 1, const SnapshotHook& hook = nullptr,
              int snapshot_every = 0);

struct GradCheckReport {
  double quadratic = 0.0;  // psi = 0 part
  double full = 0.0;       // coupled state
  double laplacian = 0.0;  // D_A sum_k ||d_k A||^2 vs -2 Lap A
  double rhs_form = 0.0;   // rhs vs Hamiltonian form plus damping
  double max() const;
};

/// Central finite differences of canonical_energy against analytic
/// gradients along random and gradient directions.
GradCheckReport grad_check(const State& s, const Model& m, double step = 1e-5, int directions = 4);

enum class InitialKind { Ground, Random, Scaled };

struct InitialSpec {
  InitialKind kind = InitialKind::Ground;
  double charge = 1.0;   // Q of psi before scaling
  double A_norm = 0.0;   // L2 norm of A before scaling
  double Pi_norm = 0.0;  // L2 norm of Pi before scaling
  double scale = 1.0;    // overall factor (Scaled kind)
  int max_mode = 3;      // random content on modes k_i <= max_mode
};

/// Divergence-free A, Pi and psi with the requested norms; deterministic per seed.
State make_initial(const DomainPtr& d, const InitialSpec& spec, std::uint64_t seed);

/// Random divergence-free field on modes k_i <= max_mode with unit L2 norm.
RealVectorField random_solenoidal(const DomainPtr& d, std::uint64_t seed, const std::string& stream, int max_mode);
ComplexScalarField random_wave(const DomainPtr& d, std::uint64_t seed, const std::string& stream, int max_mode);

}  // namespace msdd
