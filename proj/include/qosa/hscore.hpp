#pragma once

// Dense complex square matrices with the Hilbert-Schmidt geometry
// <A,B> = Tr(A* B). Every other module builds on these primitives.

#include <complex>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "qosa/error.hpp"

namespace qosa {

using Complex = std::complex<double>;

inline constexpr double kDefaultTol = 1e-9;

class HSMatrix {
 public:
  /// Wraps an Eigen matrix; throws kInvalidArgument unless it is square with dim >= 1.
  explicit HSMatrix(Eigen::MatrixXcd m);
  /// Row-major initializer, mostly for tests and small literals.
  HSMatrix(std::initializer_list<std::initializer_list<Complex>> rows);

  static HSMatrix identity(int n);
  static HSMatrix zero(int n);
  /// e_{row,col}: the matrix unit with a single 1.
  static HSMatrix unit(int n, int row, int col);
  static HSMatrix diagonal(std::span<const Complex> diag);
  /// |v><v| / <v,v>.
  static HSMatrix projector(const Eigen::VectorXcd& v);

  int dim() const { return static_cast<int>(m_.rows()); }
  const Eigen::MatrixXcd& eigen() const { return m_; }
  Complex operator()(int r, int c) const { return m_(r, c); }

  HSMatrix adjoint() const { return HSMatrix(m_.adjoint().eval()); }
  Complex trace() const { return m_.trace(); }
  /// Hilbert-Schmidt norm sqrt(Tr(X* X)).
  double norm() const { return m_.norm(); }

  /// Column-major vectorisation; the HS inner product becomes the
  /// standard one on C^{n^2}.
  Eigen::VectorXcd vec() const;
  static HSMatrix from_vec(const Eigen::VectorXcd& v, int n);

  HSMatrix& operator+=(const HSMatrix& o);
  HSMatrix& operator-=(const HSMatrix& o);
  HSMatrix& operator*=(Complex s);

  friend HSMatrix operator+(HSMatrix a, const HSMatrix& b) { return a += b; }
  friend HSMatrix operator-(HSMatrix a, const HSMatrix& b) { return a -= b; }
  friend HSMatrix operator*(HSMatrix a, Complex s) { return a *= s; }
  friend HSMatrix operator*(Complex s, HSMatrix a) { return a *= s; }
  friend HSMatrix operator*(const HSMatrix& a, const HSMatrix& b);

  bool operator==(const HSMatrix& o) const { return m_ == o.m_; }

 private:
  Eigen::MatrixXcd m_;
};

/// <A,B> = Tr(A* B).
Complex hs_inner(const HSMatrix& a, const HSMatrix& b);

/// tau = Tr / n, so tau(I) = 1.
Complex normalized_trace(const HSMatrix& x);

/// X - tau(X) I.
HSMatrix traceless_part(const HSMatrix& x);

HSMatrix kron(const HSMatrix& a, const HSMatrix& b);

/// Largest |entry| of A - B; used for entrywise comparisons in checks.
double max_abs_diff(const HSMatrix& a, const HSMatrix& b);

/// Re-orthogonalised (two pass) Gram-Schmidt in the HS inner product.
/// An input whose residual after projection is at most tol times the
/// largest input norm is treated as dependent and dropped. Empty input
/// gives empty output.
std::vector<HSMatrix> hs_orthonormalize(std::span<const HSMatrix> mats,
                                        double tol = kDefaultTol);

/// Incremental orthonormal basis of vectorised matrices. Shared by the
/// orthonormaliser above and by algebra generation.
class VecBasis {
 public:
  explicit VecBasis(Eigen::Index length) : length_(length) {}

  Eigen::Index size() const { return static_cast<Eigen::Index>(cols_.size()); }
  Eigen::Index length() const { return length_; }

  /// Attempts to extend the basis by v. Returns true if the residual of v
  /// exceeds tol * scale; scale defaults to the norm of v itself.
  bool add(const Eigen::VectorXcd& v, double tol, double scale = -1.0);

  /// Residual of v after removing its component in the current span.
  Eigen::VectorXcd residual(const Eigen::VectorXcd& v) const;

  /// n^2 x N matrix with the basis vectors as columns.
  Eigen::MatrixXcd matrix() const;

 private:
  Eigen::Index length_;
  std::vector<Eigen::VectorXcd> cols_;
};

}  // namespace qosa
