#pragma once

#include <string>
#include <vector>

#include "msdd/field.hpp"
#include "msdd/matter.hpp"

namespace msdd {

/// One pumping term c cos(omega t + theta) e, where e is the Leray
/// projection of sum_i direction_i * (MaxwellVector mode k on component i),
/// normalized to unit L2.
struct PumpTerm {
  std::array<int, 3> mode{0, 1, 1};
  std::array<double, 3> direction{1.0, 0.0, 0.0};
  double amplitude = 0.0;
  double omega = 0.0;
  double phase = 0.0;
};

struct PumpSpec {
  std::vector<PumpTerm> terms;
};

struct PumpValue {
  RealVectorField A;     // A_p(., t)
  RealVectorField dAdt;  // time derivative of A_p
};

/// A PumpSpec resolved against a domain: spatial profiles are projected and
/// normalized once.
class Pump {
 public:
  /// Throws InvalidPump when a term's mode is outside the grid, a parameter is
  /// non-finite, or its projected profile vanishes.
  Pump(DomainPtr domain, const PumpSpec& spec);

  PumpValue eval(double t) const;

  bool empty() const { return terms_.empty(); }
  /// True when every frequency is zero, so A_p does not depend on time.
  bool is_static() const;
  const std::vector<PumpTerm>& terms() const { return terms_; }
  const std::vector<RealVectorField>& profiles() const { return profiles_; }
  const DomainPtr& domain_ptr() const { return domain_; }

 private:
  DomainPtr domain_;
  std::vector<PumpTerm> terms_;
  std::vector<RealVectorField> profiles_;
};

PumpValue pump_eval(const Pump& pump, double t);

/// Sup norms of |A_p|, |grad A_p| (Frobenius) and |dA_p/dt| over the
/// collocation nodes and `samples` equispaced times in [0, T].
struct PumpBounds {
  double sup_A = 0.0;
  double sup_grad_A = 0.0;
  double sup_dAdt = 0.0;
  double total() const { return sup_A + sup_grad_A + sup_dAdt; }
};

PumpBounds pump_sup_bounds(const Pump& pump, double T, int samples = 64);

/// Named static potentials. Unused parameters are ignored by each preset.
///   constant      phi = value
///   well          phi = base + depth * prod_i x_i (L_i - x_i)
///   soft-coulomb  phi = offset - charge / sqrt(|x - c|^2 + softening^2), c = box centre
struct PotentialPreset {
  std::string name = "constant";
  double value = 1.0;
  double base = 1.0;
  double depth = 1.0;
  double offset = 10.0;
  double charge = 1.0;
  double softening = 0.5;
};

/// Throws InvalidPotential for an unknown name or when min phi <= 0 on the grid.
PotentialSet phi_preset(const BoxDomain& d, const PotentialPreset& preset);

}  // namespace msdd
