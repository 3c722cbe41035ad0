#include "qosa/algebra.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <mutex>
#include <random>
#include <string>

namespace qosa {

struct SubAlgebra::Cache {
  std::once_flag commutant_once, center_once, structure_once, balance_once;
  std::unique_ptr<SubAlgebra> commutant, center;
  std::vector<Block> structure;
  Balance balance;
};

namespace {

Eigen::MatrixXcd columns_of(const std::vector<HSMatrix>& mats, int n) {
  Eigen::MatrixXcd q(static_cast<Eigen::Index>(n) * n, static_cast<Eigen::Index>(mats.size()));
  for (std::size_t i = 0; i < mats.size(); ++i) q.col(static_cast<Eigen::Index>(i)) = mats[i].vec();
  return q;
}

std::vector<HSMatrix> matrices_of(const Eigen::MatrixXcd& q, int n) {
  std::vector<HSMatrix> out;
  out.reserve(static_cast<std::size_t>(q.cols()));
  for (Eigen::Index i = 0; i < q.cols(); ++i) out.push_back(HSMatrix::from_vec(q.col(i), n));
  return out;
}

Eigen::MatrixXcd ekron(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b) {
  Eigen::MatrixXcd m(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      m.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return m;
}

void require_same_ambient(const SubAlgebra& a, const SubAlgebra& b, const char* op) {
  if (a.ambient_dim() != b.ambient_dim()) {
    raise(ErrorCode::kDimensionMismatch, std::string(op) + ": ambient dimensions " +
                                             std::to_string(a.ambient_dim()) + " and " +
                                             std::to_string(b.ambient_dim()));
  }
}

// Cosines of the principal angles between two orthonormal column sets, with
// the corresponding left singular vectors.
Eigen::JacobiSVD<Eigen::MatrixXcd> principal_angles(const Eigen::MatrixXcd& qa,
                                                    const Eigen::MatrixXcd& qb) {
  return Eigen::JacobiSVD<Eigen::MatrixXcd>(qa.adjoint() * qb, Eigen::ComputeThinU);
}

int numerical_rank(const Eigen::MatrixXcd& m, double tol) {
  if (m.size() == 0) return 0;
  Eigen::BDCSVD<Eigen::MatrixXcd> svd(m);
  const auto& s = svd.singularValues();
  if (s.size() == 0 || s(0) == 0.0) return 0;
  int r = 0;
  for (Eigen::Index i = 0; i < s.size(); ++i) {
    if (s(i) > tol * s(0)) ++r;
  }
  return r;
}

}  // namespace

SubAlgebra::SubAlgebra(int n, std::vector<HSMatrix> basis, Eigen::MatrixXcd q, double tol)
    : n_(n), tol_(tol), basis_(std::move(basis)), q_(std::move(q)),
      cache_(std::make_shared<Cache>()) {
  if (basis_.empty() || static_cast<long>(basis_.size()) > static_cast<long>(n) * n) {
    raise(ErrorCode::kInvariantViolation,
          "subalgebra dimension " + std::to_string(basis_.size()) + " outside [1, n^2]");
  }
}

SubAlgebra SubAlgebra::trusted(int n, std::vector<HSMatrix> orthonormal_basis, double tol) {
  for (const auto& b : orthonormal_basis) {
    if (b.dim() != n) raise(ErrorCode::kDimensionMismatch, "basis element has wrong dimension");
  }
  Eigen::MatrixXcd q = columns_of(orthonormal_basis, n);
  return SubAlgebra(n, std::move(orthonormal_basis), std::move(q), tol);
}

SubAlgebra SubAlgebra::trusted(int n, const Eigen::MatrixXcd& basis_columns, double tol) {
  if (basis_columns.rows() != static_cast<Eigen::Index>(n) * n) {
    raise(ErrorCode::kDimensionMismatch, "basis columns must have length n^2");
  }
  return SubAlgebra(n, matrices_of(basis_columns, n), basis_columns, tol);
}

SubAlgebra SubAlgebra::from_span(int n, std::span<const HSMatrix> span, double tol) {
  for (const auto& b : span) {
    if (b.dim() != n) raise(ErrorCode::kDimensionMismatch, "spanning element has wrong dimension");
  }
  auto basis = hs_orthonormalize(span, tol);
  if (basis.empty()) raise(ErrorCode::kInvariantViolation, "empty span cannot contain the identity");
  auto a = trusted(n, std::move(basis), tol);
  a.verify(tol);
  return a;
}

SubAlgebra SubAlgebra::from_basis(int n, std::vector<HSMatrix> basis, double tol) {
  for (const auto& b : basis) {
    if (b.dim() != n) raise(ErrorCode::kDimensionMismatch, "basis element has wrong dimension");
  }
  if (basis.empty()) raise(ErrorCode::kInvariantViolation, "empty basis cannot contain the identity");
  const Eigen::MatrixXcd q = columns_of(basis, n);
  const Eigen::MatrixXcd gram = q.adjoint() * q;
  const double defect =
      (gram - Eigen::MatrixXcd::Identity(gram.rows(), gram.cols())).cwiseAbs().maxCoeff();
  if (defect <= tol) {
    SubAlgebra a(n, std::move(basis), q, tol);
    a.verify(tol);
    return a;
  }
  return from_span(n, basis, tol);
}

SubAlgebra SubAlgebra::scalars(int n) {
  return trusted(n, {HSMatrix::identity(n) * Complex(1.0 / std::sqrt(double(n)))});
}

SubAlgebra SubAlgebra::full(int n) {
  std::vector<HSMatrix> units;
  for (int c = 0; c < n; ++c) {
    for (int r = 0; r < n; ++r) units.push_back(HSMatrix::unit(n, r, c));
  }
  return trusted(n, std::move(units));
}

SubAlgebra SubAlgebra::diagonal(int n) {
  std::vector<HSMatrix> units;
  for (int i = 0; i < n; ++i) units.push_back(HSMatrix::unit(n, i, i));
  return trusted(n, std::move(units));
}

Eigen::VectorXcd SubAlgebra::project_vec(const Eigen::VectorXcd& v) const {
  if (v.size() != q_.rows()) raise(ErrorCode::kDimensionMismatch, "project: wrong length");
  return q_ * (q_.adjoint() * v);
}

HSMatrix SubAlgebra::project(const HSMatrix& x) const {
  if (x.dim() != n_) {
    raise(ErrorCode::kDimensionMismatch, "project: matrix of dim " + std::to_string(x.dim()) +
                                             " onto algebra in M_" + std::to_string(n_));
  }
  return HSMatrix::from_vec(project_vec(x.vec()), n_);
}

double SubAlgebra::relative_residual(const HSMatrix& x) const {
  const double nx = x.norm();
  if (nx == 0.0) return 0.0;
  const Eigen::VectorXcd v = x.vec();
  return (v - project_vec(v)).norm() / nx;
}

bool SubAlgebra::contains(const HSMatrix& x, double tol) const { return relative_residual(x) <= tol; }

void SubAlgebra::verify(double tol, const std::string& label) const {
  if (!contains(HSMatrix::identity(n_), tol)) {
    raise(ErrorCode::kInvariantViolation, label + ": identity is not in the span");
  }
  for (std::size_t i = 0; i < basis_.size(); ++i) {
    if (!contains(basis_[i].adjoint(), tol)) {
      raise(ErrorCode::kInvariantViolation,
            label + ": not closed under adjoint (basis element " + std::to_string(i) + ")");
    }
  }
  const Eigen::Index n2 = q_.rows();
  Eigen::MatrixXcd products(n2, dim());
  for (int i = 0; i < dim(); ++i) {
    const auto& bi = basis_[static_cast<std::size_t>(i)].eigen();
    for (int j = 0; j < dim(); ++j) {
      Eigen::MatrixXcd p = bi * basis_[static_cast<std::size_t>(j)].eigen();
      products.col(j) = Eigen::Map<const Eigen::VectorXcd>(p.data(), n2);
    }
    const Eigen::MatrixXcd resid = products - q_ * (q_.adjoint() * products);
    // basis elements have unit HS norm, so |b_i b_j| <= 1
    for (int j = 0; j < dim(); ++j) {
      if (resid.col(j).norm() > tol) {
        raise(ErrorCode::kInvariantViolation, label + ": not closed under products (basis " +
                                                  std::to_string(i) + " * " + std::to_string(j) +
                                                  ")");
      }
    }
  }
}

const SubAlgebra& SubAlgebra::commutant() const {
  std::call_once(cache_->commutant_once, [this] {
    cache_->commutant = std::make_unique<SubAlgebra>(qosa::commutant(*this, tol_));
  });
  return *cache_->commutant;
}

const SubAlgebra& SubAlgebra::center() const {
  std::call_once(cache_->center_once, [this] {
    cache_->center = std::make_unique<SubAlgebra>(qosa::center(*this, tol_));
  });
  return *cache_->center;
}

const std::vector<Block>& SubAlgebra::structure() const {
  std::call_once(cache_->structure_once,
                 [this] { cache_->structure = qosa::structure(*this, tol_); });
  return cache_->structure;
}

const Balance& SubAlgebra::balance() const {
  std::call_once(cache_->balance_once,
                 [this] { cache_->balance = qosa::is_homogeneously_balanced(*this, tol_); });
  return cache_->balance;
}

SubAlgebra generate(int n, std::span<const HSMatrix> generators, double tol) {
  if (n < 1) raise(ErrorCode::kInvalidArgument, "generate: n must be >= 1");
  std::vector<Eigen::MatrixXcd> gens;
  for (const auto& g : generators) {
    if (g.dim() != n) raise(ErrorCode::kDimensionMismatch, "generate: generator has wrong dimension");
    const double norm = g.norm();
    if (norm == 0.0) continue;
    gens.push_back(g.eigen() / norm);
    gens.push_back(g.eigen().adjoint() / norm);
  }

  const Eigen::Index n2 = static_cast<Eigen::Index>(n) * n;
  VecBasis basis(n2);
  auto as_vec = [n2](const Eigen::MatrixXcd& m) {
    return Eigen::VectorXcd(Eigen::Map<const Eigen::VectorXcd>(m.data(), n2));
  };
  basis.add(as_vec(Eigen::MatrixXcd::Identity(n, n)), tol);
  for (const auto& g : gens) basis.add(as_vec(g), tol, 1.0);

  // Span of all words: close the span under right multiplication by the
  // (normalised) generators and their adjoints.
  Eigen::Index processed = 0;
  while (processed < basis.size() && basis.size() < n2) {
    const Eigen::MatrixXcd q = basis.matrix();
    const Eigen::Index end = basis.size();
    for (Eigen::Index i = processed; i < end && basis.size() < n2; ++i) {
      const Eigen::VectorXcd col = q.col(i);
      const Eigen::Map<const Eigen::MatrixXcd> b(col.data(), n, n);
      for (const auto& g : gens) {
        const Eigen::MatrixXcd p = b * g;
        basis.add(as_vec(p), tol, 1.0);
      }
    }
    processed = end;
  }
  return SubAlgebra::trusted(n, basis.matrix(), tol);
}

SubAlgebra commutant(const SubAlgebra& a, double tol) {
  const int n = a.ambient_dim();
  const Eigen::Index n2 = static_cast<Eigen::Index>(n) * n;
  const Eigen::MatrixXcd id = Eigen::MatrixXcd::Identity(n, n);
  // vec(bX - Xb) = (I (x) b - b^T (x) I) vec(X)
  Eigen::MatrixXcd stacked(n2 * a.dim(), n2);
  for (int i = 0; i < a.dim(); ++i) {
    const auto& b = a.basis()[static_cast<std::size_t>(i)].eigen();
    stacked.middleRows(n2 * i, n2) = ekron(id, b) - ekron(b.transpose(), id);
  }
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(stacked, Eigen::ComputeFullV);
  const auto& s = svd.singularValues();
  // Basis elements have unit norm, so the map norm is at most 2; the floor
  // keeps rounding noise from counting as rank when A is the scalars.
  const double threshold = tol * std::max(s.size() > 0 ? s(0) : 0.0, 1.0);
  std::vector<Eigen::Index> null_cols;
  for (Eigen::Index i = 0; i < n2; ++i) {
    if (i >= s.size() || s(i) <= threshold) null_cols.push_back(i);
  }
  Eigen::MatrixXcd q(n2, static_cast<Eigen::Index>(null_cols.size()));
  for (std::size_t k = 0; k < null_cols.size(); ++k) {
    q.col(static_cast<Eigen::Index>(k)) = svd.matrixV().col(null_cols[k]);
  }
  return SubAlgebra::trusted(n, q, a.tol());
}

SubAlgebra center(const SubAlgebra& a, double tol) {
  const SubAlgebra& comm = (tol == a.tol()) ? a.commutant() : commutant(a, tol);
  const auto& qa = a.basis_matrix();
  auto svd = principal_angles(qa, comm.basis_matrix());
  const auto& s = svd.singularValues();
  std::vector<Eigen::Index> keep;
  for (Eigen::Index i = 0; i < s.size(); ++i) {
    if (1.0 - s(i) <= tol) keep.push_back(i);
  }
  Eigen::MatrixXcd q(qa.rows(), static_cast<Eigen::Index>(keep.size()));
  for (std::size_t k = 0; k < keep.size(); ++k) {
    q.col(static_cast<Eigen::Index>(k)) = qa * svd.matrixU().col(keep[k]);
  }
  if (q.cols() == 0) {
    raise(ErrorCode::kStructureDetection, "center came out empty; tolerance too tight");
  }
  return SubAlgebra::trusted(a.ambient_dim(), q, a.tol());
}

std::vector<Block> structure(const SubAlgebra& a, double tol) {
  const int n = a.ambient_dim();
  const SubAlgebra& z = (tol == a.tol()) ? a.center() : center(a, tol);
  const int zdim = z.dim();

  std::vector<Eigen::MatrixXcd> hermitian;
  for (const auto& b : z.basis()) {
    const Eigen::MatrixXcd& m = b.eigen();
    hermitian.push_back((m + m.adjoint()) / 2.0);
    hermitian.push_back((m - m.adjoint()) / Complex(0.0, 2.0));
  }

  // Eigenspaces of a generic self-adjoint central element are exactly the
  // minimal central projections.
  std::mt19937_64 rng(0x5157A11CEULL);
  std::uniform_real_distribution<double> coef(-1.0, 1.0);
  std::vector<Eigen::MatrixXcd> blocks;
  constexpr int kAttempts = 4;  // first draw plus three resamples
  for (int attempt = 0; attempt < kAttempts && blocks.empty(); ++attempt) {
    Eigen::MatrixXcd h = Eigen::MatrixXcd::Zero(n, n);
    for (const auto& m : hermitian) h += coef(rng) * m;
    h = ((h + h.adjoint()) / 2.0).eval();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(h);
    const auto& ev = es.eigenvalues();
    const double scale = std::max(ev.cwiseAbs().maxCoeff(), 1e-300);
    std::vector<int> starts{0};
    double min_gap = std::numeric_limits<double>::infinity();
    for (int i = 1; i < n; ++i) {
      const double gap = ev(i) - ev(i - 1);
      if (gap > 1e-6 * scale) {
        starts.push_back(i);
        min_gap = std::min(min_gap, gap);
      }
    }
    if (static_cast<int>(starts.size()) != zdim) continue;
    if (zdim > 1 && min_gap < 1e-4 * scale) continue;
    starts.push_back(n);
    for (std::size_t k = 0; k + 1 < starts.size(); ++k) {
      blocks.push_back(es.eigenvectors().middleCols(starts[k], starts[k + 1] - starts[k]));
    }
  }
  if (blocks.empty()) {
    raise(ErrorCode::kStructureDetection, "could not separate " + std::to_string(zdim) +
                                              " minimal central projections");
  }

  auto near_int = [](double x, int& out) {
    const double r = std::round(x);
    out = static_cast<int>(r);
    return std::abs(x - r) <= 1e-6 && out > 0;
  };

  std::vector<Block> out;
  int sum_sq = 0;
  int sum_nm = 0;
  for (const auto& v : blocks) {
    const Eigen::Index d = v.cols();
    Eigen::MatrixXcd compressed(d * d, a.dim());
    for (int i = 0; i < a.dim(); ++i) {
      const Eigen::MatrixXcd c = v.adjoint() * a.basis()[static_cast<std::size_t>(i)].eigen() * v;
      compressed.col(i) = Eigen::Map<const Eigen::VectorXcd>(c.data(), d * d);
    }
    const int local_dim = numerical_rank(compressed, tol);
    Block blk;
    if (!near_int(std::sqrt(double(local_dim)), blk.n_k) ||
        !near_int(double(d) / blk.n_k, blk.m_k)) {
      raise(ErrorCode::kStructureDetection,
            "central block of size " + std::to_string(d) + " carries a " +
                std::to_string(local_dim) + "-dimensional algebra, not of the form M_k (x) 1_m");
    }
    sum_sq += blk.n_k * blk.n_k;
    sum_nm += blk.n_k * blk.m_k;
    out.push_back(blk);
  }
  if (sum_sq != a.dim() || sum_nm != n) {
    raise(ErrorCode::kStructureDetection,
          "inconsistent structure: sum n_k^2 = " + std::to_string(sum_sq) + " (dim " +
              std::to_string(a.dim()) + "), sum n_k m_k = " + std::to_string(sum_nm) +
              " (n = " + std::to_string(n) + ")");
  }
  std::sort(out.begin(), out.end());
  return out;
}

Balance is_homogeneously_balanced(const SubAlgebra& a, double tol) {
  const auto& blocks = (tol == a.tol()) ? a.structure() : structure(a, tol);
  const Block& first = blocks.front();
  for (const auto& b : blocks) {
    if (b.n_k * first.m_k != first.n_k * b.m_k) return {false, std::nullopt};
  }
  return {true, double(first.n_k) / double(first.m_k)};
}

int intersection_dim(const SubAlgebra& a, const SubAlgebra& b, double tol) {
  require_same_ambient(a, b, "intersection_dim");
  auto svd = principal_angles(a.basis_matrix(), b.basis_matrix());
  const auto& s = svd.singularValues();
  int k = 0;
  for (Eigen::Index i = 0; i < s.size(); ++i) {
    if (1.0 - s(i) <= tol) ++k;
  }
  return k;
}

bool contains(const SubAlgebra& outer, const SubAlgebra& inner, double tol) {
  require_same_ambient(outer, inner, "contains");
  const auto& q = inner.basis_matrix();
  for (Eigen::Index i = 0; i < q.cols(); ++i) {
    const Eigen::VectorXcd v = q.col(i);
    if ((v - outer.project_vec(v)).norm() > tol) return false;
  }
  return true;
}

SumProjection::SumProjection(std::vector<SubAlgebra> algebras)
    : n_(algebras.empty() ? 0 : algebras.front().ambient_dim()), algebras_(std::move(algebras)) {
  if (algebras_.empty()) raise(ErrorCode::kInvalidArgument, "SumProjection needs an algebra");
  for (const auto& a : algebras_) require_same_ambient(algebras_.front(), a, "SumProjection");
}

HSMatrix SumProjection::apply(const HSMatrix& x) const {
  if (x.dim() != n_) raise(ErrorCode::kDimensionMismatch, "SumProjection::apply");
  const HSMatrix scalar_part = normalized_trace(x) * HSMatrix::identity(n_);
  HSMatrix out = scalar_part;
  for (const auto& a : algebras_) out += a.project(x) - scalar_part;
  return out;
}

int SumProjection::trace() const {
  int t = 1;
  for (const auto& a : algebras_) t += a.dim() - 1;
  return t;
}

int SumProjection::rank(double tol) const {
  Eigen::Index cols = 0;
  for (const auto& a : algebras_) cols += a.dim();
  Eigen::MatrixXcd all(static_cast<Eigen::Index>(n_) * n_, cols);
  Eigen::Index c = 0;
  for (const auto& a : algebras_) {
    all.middleCols(c, a.dim()) = a.basis_matrix();
    c += a.dim();
  }
  return numerical_rank(all, tol);
}

SumProjection subspace_sum_projection(std::span<const SubAlgebra> algebras) {
  return SumProjection(std::vector<SubAlgebra>(algebras.begin(), algebras.end()));
}

}  // namespace qosa
