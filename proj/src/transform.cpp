#include "msdd/field.hpp"

namespace msdd {

Eigen::ArrayXd apply_separable(const Eigen::ArrayXd& data, const std::array<Index, 3>& in,
                               const std::array<const Eigen::MatrixXd*, 3>& ops) {
  using Eigen::Map;
  using Eigen::MatrixXd;
  const Index e0 = in[0], e1 = in[1], e2 = in[2];
  if (data.size() != e0 * e1 * e2) throw DimensionError("separable transform: input size mismatch");
  for (int a = 0; a < 3; ++a) {
    if (ops[a]->cols() != in[a]) throw DimensionError("separable transform: operator shape mismatch");
  }
  const Index m0 = ops[0]->rows(), m1 = ops[1]->rows(), m2 = ops[2]->rows();

  // axis 0: (e0 x e1 e2) -> (m0 x e1 e2)
  MatrixXd s0 = (*ops[0]) * Map<const MatrixXd>(data.data(), e0, e1 * e2);

  // axis 1: each e2-slab is (m0 x e1) -> (m0 x m1)
  MatrixXd s1(m0, m1 * e2);
  const MatrixXd op1t = ops[1]->transpose();
  for (Index k = 0; k < e2; ++k) {
    s1.middleCols(k * m1, m1).noalias() = s0.middleCols(k * e1, e1) * op1t;
  }

  // axis 2: (m0 m1 x e2) -> (m0 m1 x m2)
  Eigen::ArrayXd out(m0 * m1 * m2);
  Map<MatrixXd>(out.data(), m0 * m1, m2).noalias() =
      Map<const MatrixXd>(s1.data(), m0 * m1, e2) * ops[2]->transpose();
  return out;
}

}  // namespace msdd
