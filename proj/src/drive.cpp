#include "msdd/drive.hpp"

#include <cmath>

#include "msdd/gauge.hpp"
#include "msdd/operators.hpp"

namespace msdd {

Pump::Pump(DomainPtr domain, const PumpSpec& spec) : domain_(std::move(domain)), terms_(spec.terms) {
  const BoxDomain& d = *domain_;
  for (size_t m = 0; m < terms_.size(); ++m) {
    const PumpTerm& term = terms_[m];
    const std::string tag = "pump term " + std::to_string(m + 1);
    for (double v : {term.amplitude, term.omega, term.phase, term.direction[0], term.direction[1], term.direction[2]}) {
      if (!std::isfinite(v)) throw InvalidPump(tag + ": non-finite parameter");
    }
    for (int a = 0; a < 3; ++a) {
      if (term.mode[a] < 0 || term.mode[a] > d.modes(a)) throw InvalidPump(tag + ": mode outside the grid");
    }
    RealVectorField e(domain_, Basis::MaxwellVector);
    for (int c = 0; c < 3; ++c) {
      if (e.has_mode(c, term.mode[0], term.mode[1], term.mode[2])) {
        e.at(c, term.mode[0], term.mode[1], term.mode[2]) = term.direction[c];
      }
    }
    e = leray_project(e);
    const double n = norm(e, NormKind::L2);
    if (!(n > 1e-12)) throw InvalidPump(tag + ": profile vanishes after divergence-free projection");
    e *= 1.0 / n;
    profiles_.push_back(std::move(e));
  }
}

bool Pump::is_static() const {
  for (const PumpTerm& t : terms_) {
    if (t.omega != 0.0) return false;
  }
  return true;
}

PumpValue Pump::eval(double t) const {
  PumpValue out{RealVectorField(domain_, Basis::MaxwellVector), RealVectorField(domain_, Basis::MaxwellVector)};
  for (size_t m = 0; m < terms_.size(); ++m) {
    const PumpTerm& term = terms_[m];
    const double arg = term.omega * t + term.phase;
    const double ca = term.amplitude * std::cos(arg);
    const double cd = -term.amplitude * term.omega * std::sin(arg);
    for (int c = 0; c < 3; ++c) {
      out.A[c] += ca * profiles_[m][c];
      out.dAdt[c] += cd * profiles_[m][c];
    }
  }
  return out;
}

PumpValue pump_eval(const Pump& pump, double t) { return pump.eval(t); }

PumpBounds pump_sup_bounds(const Pump& pump, double T, int samples) {
  PumpBounds b;
  if (pump.empty()) return b;
  const BoxDomain& d = *pump.domain_ptr();
  const int n = std::max(samples, 1);
  for (int s = 0; s <= n; ++s) {
    const double t = T * s / n;
    const PumpValue v = pump.eval(t);
    Eigen::ArrayXd a2 = Eigen::ArrayXd::Zero(d.node_count());
    Eigen::ArrayXd g2 = a2, d2 = a2;
    for (int c = 0; c < 3; ++c) {
      const Layout lay = v.A.layout(c);
      a2 += synthesize<double>(d, lay, v.A[c]).square();
      d2 += synthesize<double>(d, lay, v.dAdt[c]).square();
      for (int axis = 0; axis < 3; ++axis) {
        const auto [dl, dc] = partial_derivative<double>(d, lay, v.A[c], axis);
        g2 += synthesize<double>(d, dl, dc).square();
      }
    }
    b.sup_A = std::max(b.sup_A, std::sqrt(a2.maxCoeff()));
    b.sup_grad_A = std::max(b.sup_grad_A, std::sqrt(g2.maxCoeff()));
    b.sup_dAdt = std::max(b.sup_dAdt, std::sqrt(d2.maxCoeff()));
    if (pump.is_static()) break;
  }
  return b;
}

PotentialSet phi_preset(const BoxDomain& d, const PotentialPreset& p) {
  const std::array<Index, 3> ext = d.node_extents();
  Nodal<double> phi(d.node_count());
  for (Index i2 = 0; i2 < ext[2]; ++i2) {
    for (Index i1 = 0; i1 < ext[1]; ++i1) {
      for (Index i0 = 0; i0 < ext[0]; ++i0) {
        const std::array<double, 3> x{d.node(0, i0), d.node(1, i1), d.node(2, i2)};
        double v = 0.0;
        if (p.name == "constant") {
          v = p.value;
        } else if (p.name == "well") {
          double prod = 1.0;
          for (int a = 0; a < 3; ++a) prod *= x[a] * (d.length(a) - x[a]);
          v = p.base + p.depth * prod;
        } else if (p.name == "soft-coulomb") {
          double r2 = 0.0;
          for (int a = 0; a < 3; ++a) r2 += (x[a] - 0.5 * d.length(a)) * (x[a] - 0.5 * d.length(a));
          v = p.offset - p.charge / std::sqrt(r2 + p.softening * p.softening);
        } else {
          throw InvalidPotential("unknown potential preset '" + p.name + "'");
        }
        phi(i0 + ext[0] * (i1 + ext[1] * i2)) = v;
      }
    }
  }
  return PotentialSet::from_samples(d, std::move(phi));
}

}  // namespace msdd
