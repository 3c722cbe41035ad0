#pragma once

// Unital *-subalgebras of M_n(C), stored as an HS-orthonormal basis.
//
// Up to unitary equivalence every subalgebra has the block form
//   A = (+)_k M_{n_k}(C) (x) 1_{m_k},   n = sum_k n_k m_k,
// with commutant (+)_k 1_{n_k} (x) M_{m_k}(C). structure() recovers the
// (n_k, m_k) list numerically from the minimal central projections.

#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "qosa/hscore.hpp"

namespace qosa {

struct Block {
  int n_k = 0;  // size of the matrix factor
  int m_k = 0;  // multiplicity
  bool operator==(const Block&) const = default;
  auto operator<=>(const Block&) const = default;
};

struct Balance {
  bool balanced = false;
  /// n_k / m_k when balanced.
  std::optional<double> ratio;
};

class SubAlgebra {
 public:
  /// Takes an already orthonormal basis without checking closure. Used by
  /// routines whose output is an algebra by construction.
  static SubAlgebra trusted(int n, std::vector<HSMatrix> orthonormal_basis,
                            double tol = kDefaultTol);
  static SubAlgebra trusted(int n, const Eigen::MatrixXcd& basis_columns,
                            double tol = kDefaultTol);

  /// Orthonormalises a spanning set and verifies the subalgebra invariants.
  /// Throws kInvariantViolation naming the failed check.
  static SubAlgebra from_span(int n, std::span<const HSMatrix> span, double tol = kDefaultTol);

  /// Like from_span, but keeps the given basis untouched when its Gram
  /// defect is within tol.
  static SubAlgebra from_basis(int n, std::vector<HSMatrix> basis, double tol = kDefaultTol);

  static SubAlgebra scalars(int n);
  static SubAlgebra full(int n);
  static SubAlgebra diagonal(int n);

  int ambient_dim() const { return n_; }
  int dim() const { return static_cast<int>(basis_.size()); }
  double tol() const { return tol_; }
  const std::vector<HSMatrix>& basis() const { return basis_; }
  /// n^2 x N, columns are vec(b_i); orthonormal.
  const Eigen::MatrixXcd& basis_matrix() const { return q_; }

  /// HS-orthogonal projection onto the span.
  HSMatrix project(const HSMatrix& x) const;
  Eigen::VectorXcd project_vec(const Eigen::VectorXcd& v) const;
  /// Distance from x to the span, relative to |x|.
  double relative_residual(const HSMatrix& x) const;
  bool contains(const HSMatrix& x, double tol) const;

  /// Throws kInvariantViolation if identity membership, adjoint closure or
  /// product closure fails at tol.
  void verify(double tol, const std::string& label = "algebra") const;

  // Cached structural data, computed at this algebra's own tol.
  const SubAlgebra& commutant() const;
  const SubAlgebra& center() const;
  const std::vector<Block>& structure() const;
  const Balance& balance() const;

 private:
  struct Cache;
  SubAlgebra(int n, std::vector<HSMatrix> basis, Eigen::MatrixXcd q, double tol);

  int n_ = 0;
  double tol_ = kDefaultTol;
  std::vector<HSMatrix> basis_;
  Eigen::MatrixXcd q_;
  std::shared_ptr<Cache> cache_;
};

/// Smallest unital *-subalgebra containing the generators.
SubAlgebra generate(int n, std::span<const HSMatrix> generators, double tol = kDefaultTol);

/// Null space of X -> ([b_i, X])_i, rank decided by singular values at
/// tol * (largest singular value).
SubAlgebra commutant(const SubAlgebra& a, double tol);
/// A intersected with A', via principal angles.
SubAlgebra center(const SubAlgebra& a, double tol);
/// Block list (n_k, m_k), sorted. Throws kStructureDetection when the
/// numerical data does not round to a consistent integer structure.
std::vector<Block> structure(const SubAlgebra& a, double tol);
Balance is_homogeneously_balanced(const SubAlgebra& a, double tol);

/// Dimension of span(A) intersected with span(B), via principal angles.
int intersection_dim(const SubAlgebra& a, const SubAlgebra& b, double tol);
/// span(inner) subset of span(outer).
bool contains(const SubAlgebra& outer, const SubAlgebra& inner, double tol);

/// F = E_{C1} + sum_j (E_{A_j} - E_{C1}). For pairwise quasi-orthogonal
/// inputs this is the orthogonal projection onto A_1 + ... + A_k.
class SumProjection {
 public:
  explicit SumProjection(std::vector<SubAlgebra> algebras);

  int ambient_dim() const { return n_; }
  HSMatrix apply(const HSMatrix& x) const;
  /// Superoperator trace of F: 1 + sum_j (dim A_j - 1).
  int trace() const;
  /// Numerical dimension of A_1 + ... + A_k.
  int rank(double tol) const;

 private:
  int n_;
  std::vector<SubAlgebra> algebras_;
};

SumProjection subspace_sum_projection(std::span<const SubAlgebra> algebras);

}  // namespace qosa
