#include "qosa/overlap.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>

#include "qosa/expectation.hpp"

namespace qosa {

namespace {

void require_same_ambient(const SubAlgebra& a, const SubAlgebra& b, const char* op) {
  if (a.ambient_dim() != b.ambient_dim()) {
    raise(ErrorCode::kDimensionMismatch, std::string(op) + ": algebras live in M_" +
                                             std::to_string(a.ambient_dim()) + " and M_" +
                                             std::to_string(b.ambient_dim()));
  }
}

void require_quasi_orthogonal(const SubAlgebra& a, const SubAlgebra& b, double tol,
                              const char* op) {
  const auto r = quasi_orthogonal(a, b, tol);
  if (!r.is_quasi_orthogonal) {
    raise(ErrorCode::kHypothesisViolated,
          std::string(op) + " requires quasi-orthogonal algebras (c = " +
              std::to_string(r.c_value) + ")");
  }
}

// Random unit-norm traceless element of A (zero if A is the scalars).
HSMatrix random_traceless(const SubAlgebra& a, std::mt19937_64& rng) {
  std::normal_distribution<double> g(0.0, 1.0);
  HSMatrix x = HSMatrix::zero(a.ambient_dim());
  for (const auto& b : a.basis()) x += Complex(g(rng), g(rng)) * b;
  x = traceless_part(x);
  const double nx = x.norm();
  if (nx <= 1e-12) return HSMatrix::zero(a.ambient_dim());
  return x * Complex(1.0 / nx);
}

}  // namespace

double c_value(const SubAlgebra& a, const SubAlgebra& b) {
  require_same_ambient(a, b, "c_value");
  return compose_trace(a.basis_matrix(), b.basis_matrix());
}

OverlapReport quasi_orthogonal(const SubAlgebra& a, const SubAlgebra& b, double tol) {
  require_same_ambient(a, b, "quasi_orthogonal");
  OverlapReport r;
  r.n = a.ambient_dim();
  r.dim_a = a.dim();
  r.dim_b = b.dim();
  r.c_value = c_value(a, b);

  const double n = r.n;
  std::vector<Complex> tb;
  tb.reserve(b.basis().size());
  for (const auto& y : b.basis()) tb.push_back(y.trace() / n);
  for (const auto& x : a.basis()) {
    const Complex tx = x.trace() / n;
    // tau(x y) = sum_ij x_ij y_ji / n
    const Eigen::MatrixXcd xt = x.eigen().transpose();
    for (std::size_t j = 0; j < b.basis().size(); ++j) {
      const Complex txy = xt.cwiseProduct(b.basis()[j].eigen()).sum() / n;
      r.max_trace_defect = std::max(r.max_trace_defect, std::abs(txy - tx * tb[j]));
    }
  }
  r.is_quasi_orthogonal = r.c_value <= 1.0 + tol && r.max_trace_defect <= tol;
  return r;
}

TraceFormulaCheck trace_formula_check(const SubAlgebra& a, const SubAlgebra& b, double tol) {
  require_same_ambient(a, b, "trace_formula_check");
  if (!is_homogeneously_balanced(a, a.tol()).balanced) {
    raise(ErrorCode::kNotBalanced, "trace formula: first algebra is not homogeneously balanced");
  }
  if (!is_homogeneously_balanced(b, b.tol()).balanced) {
    raise(ErrorCode::kNotBalanced, "trace formula: second algebra is not homogeneously balanced");
  }
  const double n = a.ambient_dim();
  TraceFormulaCheck r;
  r.lhs = c_value(a.commutant(), b.commutant());
  r.rhs = n * n * c_value(a, b) / (double(a.dim()) * double(b.dim()));
  r.pass = std::abs(r.lhs - r.rhs) <= tol * std::max(1.0, r.rhs);
  return r;
}

OhnoPetzCheck ohno_petz_check(const SubAlgebra& a, const SubAlgebra& b, double tol) {
  require_same_ambient(a, b, "ohno_petz_check");
  require_quasi_orthogonal(a, b, tol, "ohno_petz_check");
  OhnoPetzCheck r;
  r.commutants_qo = quasi_orthogonal(a.commutant(), b.commutant(), tol).is_quasi_orthogonal;
  const long n = a.ambient_dim();
  r.dim_product_is_n2 = long(a.dim()) * long(b.dim()) == n * n;
  r.agree = r.commutants_qo == r.dim_product_is_n2;
  return r;
}

CrossTermReport cross_term_defect(const SubAlgebra& a, const SubAlgebra& b, int samples,
                                  double tol, std::uint64_t seed) {
  require_same_ambient(a, b, "cross_term_defect");
  require_quasi_orthogonal(a, b, tol, "cross_term_defect");
  const SumProjection f({a, b});
  std::mt19937_64 rng(seed);
  CrossTermReport r;
  r.samples = samples;
  r.seed = seed;
  for (int s = 0; s < samples; ++s) {
    const HSMatrix x = random_traceless(a, rng);
    const HSMatrix y = random_traceless(b, rng);
    r.max_residual = std::max({r.max_residual, f.apply(x * y).norm(), f.apply(y * x).norm()});
  }
  return r;
}

ProductBasisReport product_basis_check(const SubAlgebra& a, const SubAlgebra& b, double tol) {
  require_same_ambient(a, b, "product_basis_check");
  require_quasi_orthogonal(a, b, tol, "product_basis_check");
  const int n = a.ambient_dim();
  const Eigen::Index n2 = static_cast<Eigen::Index>(n) * n;
  Eigen::MatrixXcd v(n2, static_cast<Eigen::Index>(a.dim()) * b.dim());
  Eigen::Index col = 0;
  for (const auto& x : a.basis()) {
    for (const auto& y : b.basis()) {
      const Eigen::MatrixXcd p = std::sqrt(double(n)) * x.eigen() * y.eigen();
      v.col(col++) = Eigen::Map<const Eigen::VectorXcd>(p.data(), n2);
    }
  }
  const Eigen::MatrixXcd gram = v.adjoint() * v;
  ProductBasisReport r;
  r.gram_defect = (gram - Eigen::MatrixXcd::Identity(gram.rows(), gram.cols())).cwiseAbs().maxCoeff();
  r.orthonormal = r.gram_defect <= tol;
  return r;
}

InjectivityReport vector_map_injectivity(const SubAlgebra& b, const Eigen::VectorXcd& x,
                                         double tol) {
  const int n = b.ambient_dim();
  if (x.size() != n) raise(ErrorCode::kDimensionMismatch, "vector_map_injectivity: vector length");
  const double xn = x.norm();
  if (xn == 0.0) raise(ErrorCode::kInvalidArgument, "vector_map_injectivity: zero vector");
  const Eigen::VectorXcd u = x / xn;
  Eigen::MatrixXcd images(n, b.dim());
  for (int k = 0; k < b.dim(); ++k) images.col(k) = b.basis()[static_cast<std::size_t>(k)].eigen() * u;
  Eigen::BDCSVD<Eigen::MatrixXcd> svd(images);
  const auto& s = svd.singularValues();
  InjectivityReport r;
  r.dim_b = b.dim();
  const double top = s.size() ? s(0) : 0.0;
  for (Eigen::Index i = 0; i < s.size(); ++i) {
    if (s(i) > tol * std::max(top, 1.0)) ++r.rank;
  }
  r.injective = r.rank == r.dim_b;
  return r;
}

}  // namespace qosa
