#include "qosa/expectation.hpp"

#include <string>

namespace qosa {

HSMatrix Expectation::apply(const HSMatrix& x) const { return target_.project(x); }

HSMatrix Expectation::apply_twirl(const HSMatrix& x) const {
  const int n = ambient_dim();
  if (x.dim() != n) raise(ErrorCode::kDimensionMismatch, "apply_twirl: wrong matrix dimension");
  if (!target_.balance().balanced) {
    raise(ErrorCode::kNotBalanced,
          "twirl formula needs a homogeneously balanced target (dim " +
              std::to_string(target_.dim()) + ")");
  }
  // Summing over a basis of A itself lands in A'; the commutant basis gives E_A.
  const SubAlgebra& comm = target_.commutant();
  Eigen::MatrixXcd acc = Eigen::MatrixXcd::Zero(n, n);
  for (const auto& b : comm.basis()) acc += b.eigen() * x.eigen() * b.eigen().adjoint();
  return HSMatrix((acc * (double(n) / comm.dim())).eval());
}

double compose_trace(const Eigen::MatrixXcd& q1, const Eigen::MatrixXcd& q2) {
  if (q1.rows() != q2.rows()) raise(ErrorCode::kDimensionMismatch, "compose_trace: ambient mismatch");
  return (q1.adjoint() * q2).squaredNorm();
}

double compose_trace(const Expectation& e1, const Expectation& e2) {
  if (e1.ambient_dim() != e2.ambient_dim()) {
    raise(ErrorCode::kDimensionMismatch, "compose_trace: expectations act on different M_n");
  }
  return compose_trace(e1.target().basis_matrix(), e2.target().basis_matrix());
}

}  // namespace qosa
