#pragma once

#include <array>
#include <memory>

#include <Eigen/Dense>

namespace msdd {

using Index = Eigen::Index;

/// One-dimensional trigonometric factor of a basis function.
enum class AxisKind { Sine, Cosine };

/// The three tensor-product families used for the fields of the model.
///
///   DirichletScalar  sin x sin x sin                        (psi, A0, rho)
///   MaxwellVector    component i: cos along axis i, sin elsewhere (A, Pi, j)
///   CurlDualVector   component i: sin along axis i, cos elsewhere (curl A)
///
/// Sine axes carry modes k = 1..N, cosine axes k = 0..N.
enum class Basis { DirichletScalar, MaxwellVector, CurlDualVector };

const char* to_string(Basis b);

AxisKind axis_kind(Basis basis, int component, int axis);

/// Coefficient-array shape of one component of a family.
struct Layout {
  std::array<AxisKind, 3> kinds;
  std::array<Index, 3> extents;

  Index size() const { return extents[0] * extents[1] * extents[2]; }
  Index flat(Index i0, Index i1, Index i2) const { return i0 + extents[0] * (i1 + extents[1] * i2); }

  /// Mode number stored at array position `idx` along `axis`.
  int mode(int axis, Index idx) const {
    return kinds[axis] == AxisKind::Sine ? static_cast<int>(idx) + 1 : static_cast<int>(idx);
  }
  /// Array position of mode `k`, or -1 when the axis does not carry it.
  Index position(int axis, int k) const {
    const Index idx = kinds[axis] == AxisKind::Sine ? k - 1 : k;
    return (idx < 0 || idx >= extents[axis]) ? -1 : idx;
  }
};

/// Rectangular cavity [0,L1]x[0,L2]x[0,L3] with N_i modes per axis.
///
/// Collocation nodes are the N_i + 1 midpoints x_j = (j + 1/2) L_i / (N_i + 1).
/// On that grid the orthonormal sine modes k = 1..N and cosine modes
/// k = 0..N are exactly orthogonal under the midpoint rule, so quadrature
/// inner products of band-limited fields equal coefficient inner products.
class BoxDomain {
 public:
  /// Throws InvalidDomain unless every L_i > 0 and N_i >= 2.
  static std::shared_ptr<const BoxDomain> make(const std::array<double, 3>& lengths,
                                               const std::array<int, 3>& modes);

  double length(int axis) const { return lengths_[axis]; }
  int modes(int axis) const { return modes_[axis]; }
  const std::array<double, 3>& lengths() const { return lengths_; }
  const std::array<int, 3>& mode_counts() const { return modes_; }

  Index nodes(int axis) const { return modes_[axis] + 1; }
  std::array<Index, 3> node_extents() const { return {nodes(0), nodes(1), nodes(2)}; }
  Index node_count() const { return nodes(0) * nodes(1) * nodes(2); }
  double node(int axis, Index j) const { return (static_cast<double>(j) + 0.5) * spacing(axis); }
  double spacing(int axis) const { return lengths_[axis] / static_cast<double>(nodes(axis)); }
  /// Midpoint-rule weight of every node.
  double cell_volume() const { return spacing(0) * spacing(1) * spacing(2); }
  double volume() const { return lengths_[0] * lengths_[1] * lengths_[2]; }

  /// kappa = k pi / L.
  double wavenumber(int axis, int k) const;

  Layout layout(Basis basis, int component) const;

  /// |kappa|^2 for every coefficient of one component, in layout order.
  const Eigen::ArrayXd& kappa_squared(Basis basis, int component) const;
  /// kappa_axis for every coefficient of one component, in layout order.
  const Eigen::ArrayXd& kappa(Basis basis, int component, int axis) const;

  /// Nodes x extent: value of each normalized 1D basis function at each node.
  const Eigen::MatrixXd& synthesis(int axis, AxisKind kind) const;
  /// extent x Nodes: weighted adjoint of synthesis (h * S^T).
  const Eigen::MatrixXd& analysis(int axis, AxisKind kind) const;

  /// Normalized 1D basis function at an arbitrary coordinate.
  double basis_value(int axis, AxisKind kind, int k, double x) const;

  /// Largest |kappa|^2 over all represented modes.
  double max_kappa_squared() const;

  bool same_as(const BoxDomain& other) const {
    return lengths_ == other.lengths_ && modes_ == other.modes_;
  }

 private:
  BoxDomain(const std::array<double, 3>& lengths, const std::array<int, 3>& modes);

  std::array<double, 3> lengths_;
  std::array<int, 3> modes_;
  // [axis][kind]
  std::array<std::array<Eigen::MatrixXd, 2>, 3> synthesis_;
  std::array<std::array<Eigen::MatrixXd, 2>, 3> analysis_;
  // [family][component]; the scalar family uses component 0 only
  std::array<std::array<Eigen::ArrayXd, 3>, 3> kappa_sq_;
  // [family][component][axis]
  std::array<std::array<std::array<Eigen::ArrayXd, 3>, 3>, 3> kappa_;
};

using DomainPtr = std::shared_ptr<const BoxDomain>;

}  // namespace msdd
