#include "qosa/hscore.hpp"

#include <algorithm>
#include <string>

namespace qosa {

const char* to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::kDimensionMismatch: return "dimension mismatch";
    case ErrorCode::kInvalidArgument: return "invalid argument";
    case ErrorCode::kNotBalanced: return "not homogeneously balanced";
    case ErrorCode::kHypothesisViolated: return "hypothesis violated";
    case ErrorCode::kStructureDetection: return "structure detection failed";
    case ErrorCode::kNotOrthonormal: return "not orthonormal";
    case ErrorCode::kNotPrime: return "not prime";
    case ErrorCode::kTooLarge: return "too large";
    case ErrorCode::kNotUnitary: return "not unitary";
    case ErrorCode::kSchemaError: return "schema error";
    case ErrorCode::kInvariantViolation: return "invariant violation";
    case ErrorCode::kUnknownPreset: return "unknown preset";
    case ErrorCode::kIo: return "I/O error";
  }
  return "unknown error";
}

HSMatrix::HSMatrix(Eigen::MatrixXcd m) : m_(std::move(m)) {
  if (m_.rows() != m_.cols() || m_.rows() < 1) {
    raise(ErrorCode::kInvalidArgument,
          "HSMatrix must be square with dim >= 1, got " + std::to_string(m_.rows()) + "x" +
              std::to_string(m_.cols()));
  }
}

HSMatrix::HSMatrix(std::initializer_list<std::initializer_list<Complex>> rows) {
  const auto n = static_cast<Eigen::Index>(rows.size());
  Eigen::MatrixXcd m(n, n);
  Eigen::Index r = 0;
  for (const auto& row : rows) {
    if (static_cast<Eigen::Index>(row.size()) != n) {
      raise(ErrorCode::kInvalidArgument, "HSMatrix literal is not square");
    }
    Eigen::Index c = 0;
    for (const auto& v : row) m(r, c++) = v;
    ++r;
  }
  *this = HSMatrix(std::move(m));
}

HSMatrix HSMatrix::identity(int n) { return HSMatrix(Eigen::MatrixXcd::Identity(n, n)); }

HSMatrix HSMatrix::zero(int n) { return HSMatrix(Eigen::MatrixXcd::Zero(n, n)); }

HSMatrix HSMatrix::unit(int n, int row, int col) {
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(n, n);
  m(row, col) = 1.0;
  return HSMatrix(std::move(m));
}

HSMatrix HSMatrix::diagonal(std::span<const Complex> diag) {
  const auto n = static_cast<Eigen::Index>(diag.size());
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) m(i, i) = diag[static_cast<std::size_t>(i)];
  return HSMatrix(std::move(m));
}

HSMatrix HSMatrix::projector(const Eigen::VectorXcd& v) {
  const double nn = v.squaredNorm();
  if (nn == 0.0) raise(ErrorCode::kInvalidArgument, "projector onto the zero vector");
  return HSMatrix((v * v.adjoint() / nn).eval());
}

Eigen::VectorXcd HSMatrix::vec() const {
  return Eigen::Map<const Eigen::VectorXcd>(m_.data(), m_.size());
}

HSMatrix HSMatrix::from_vec(const Eigen::VectorXcd& v, int n) {
  if (v.size() != static_cast<Eigen::Index>(n) * n) {
    raise(ErrorCode::kDimensionMismatch, "vector length does not match n^2");
  }
  return HSMatrix(Eigen::Map<const Eigen::MatrixXcd>(v.data(), n, n).eval());
}

namespace {
void require_same_dim(const HSMatrix& a, const HSMatrix& b, const char* op) {
  if (a.dim() != b.dim()) {
    raise(ErrorCode::kDimensionMismatch, std::string(op) + ": dimensions " +
                                             std::to_string(a.dim()) + " and " +
                                             std::to_string(b.dim()));
  }
}
}  // namespace

HSMatrix& HSMatrix::operator+=(const HSMatrix& o) {
  require_same_dim(*this, o, "operator+");
  m_ += o.m_;
  return *this;
}

HSMatrix& HSMatrix::operator-=(const HSMatrix& o) {
  require_same_dim(*this, o, "operator-");
  m_ -= o.m_;
  return *this;
}

HSMatrix& HSMatrix::operator*=(Complex s) {
  m_ *= s;
  return *this;
}

HSMatrix operator*(const HSMatrix& a, const HSMatrix& b) {
  require_same_dim(a, b, "operator*");
  return HSMatrix((a.m_ * b.m_).eval());
}

Complex hs_inner(const HSMatrix& a, const HSMatrix& b) {
  require_same_dim(a, b, "hs_inner");
  // Tr(A* B) = sum_ij conj(A_ij) B_ij
  return (a.eigen().conjugate().cwiseProduct(b.eigen())).sum();
}

Complex normalized_trace(const HSMatrix& x) { return x.trace() / static_cast<double>(x.dim()); }

HSMatrix traceless_part(const HSMatrix& x) {
  return x - normalized_trace(x) * HSMatrix::identity(x.dim());
}

HSMatrix kron(const HSMatrix& a, const HSMatrix& b) {
  const auto na = a.dim();
  const auto nb = b.dim();
  Eigen::MatrixXcd m(na * nb, na * nb);
  for (int i = 0; i < na; ++i) {
    for (int j = 0; j < na; ++j) {
      m.block(i * nb, j * nb, nb, nb) = a(i, j) * b.eigen();
    }
  }
  return HSMatrix(std::move(m));
}

double max_abs_diff(const HSMatrix& a, const HSMatrix& b) {
  require_same_dim(a, b, "max_abs_diff");
  return (a.eigen() - b.eigen()).cwiseAbs().maxCoeff();
}

Eigen::VectorXcd VecBasis::residual(const Eigen::VectorXcd& v) const {
  Eigen::VectorXcd r = v;
  for (int pass = 0; pass < 2; ++pass) {
    for (const auto& q : cols_) r -= q.dot(r) * q;
  }
  return r;
}

bool VecBasis::add(const Eigen::VectorXcd& v, double tol, double scale) {
  if (v.size() != length_) raise(ErrorCode::kDimensionMismatch, "VecBasis::add length");
  if (scale < 0.0) scale = v.norm();
  if (scale == 0.0) return false;
  if (size() >= length_) return false;
  Eigen::VectorXcd r = residual(v);
  const double rn = r.norm();
  if (rn <= tol * scale) return false;
  cols_.push_back(r / rn);
  return true;
}

Eigen::MatrixXcd VecBasis::matrix() const {
  Eigen::MatrixXcd q(length_, size());
  for (Eigen::Index i = 0; i < size(); ++i) q.col(i) = cols_[static_cast<std::size_t>(i)];
  return q;
}

std::vector<HSMatrix> hs_orthonormalize(std::span<const HSMatrix> mats, double tol) {
  std::vector<HSMatrix> out;
  if (mats.empty()) return out;
  const int n = mats.front().dim();
  double scale = 0.0;
  for (const auto& m : mats) {
    if (m.dim() != n) raise(ErrorCode::kDimensionMismatch, "hs_orthonormalize: mixed dimensions");
    scale = std::max(scale, m.norm());
  }
  VecBasis basis(static_cast<Eigen::Index>(n) * n);
  for (const auto& m : mats) basis.add(m.vec(), tol, scale);
  const Eigen::MatrixXcd q = basis.matrix();
  out.reserve(static_cast<std::size_t>(q.cols()));
  for (Eigen::Index i = 0; i < q.cols(); ++i) out.push_back(HSMatrix::from_vec(q.col(i), n));
  return out;
}

}  // namespace qosa
