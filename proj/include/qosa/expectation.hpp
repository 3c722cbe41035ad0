#pragma once

#include "qosa/algebra.hpp"

namespace qosa {

/// Trace-preserving conditional expectation onto a subalgebra, i.e. the
/// HS-orthogonal projection E(X) = sum_i <b_i, X> b_i.
class Expectation {
 public:
  explicit Expectation(SubAlgebra target) : target_(std::move(target)) {}

  const SubAlgebra& target() const { return target_; }
  int ambient_dim() const { return target_.ambient_dim(); }

  HSMatrix apply(const HSMatrix& x) const;

  /// (n/N') sum_k b'_k X b'_k^* over an orthonormal basis of the commutant
  /// A' (N' = dim A'). Agrees with apply() only when the target is
  /// homogeneously balanced; throws kNotBalanced otherwise.
  HSMatrix apply_twirl(const HSMatrix& x) const;

 private:
  SubAlgebra target_;
};

/// Tr(E1 E2) as an operator on M_n(C), via sum_k |E1(q_k)|^2 over an
/// orthonormal basis q_k of E2's target. Never materialises n^2 x n^2 maps.
double compose_trace(const Expectation& e1, const Expectation& e2);

/// Same quantity on raw orthonormal basis matrices: |Q1^* Q2|_F^2.
double compose_trace(const Eigen::MatrixXcd& q1, const Eigen::MatrixXcd& q2);

}  // namespace qosa
