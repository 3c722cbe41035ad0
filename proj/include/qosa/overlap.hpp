#pragma once

// Quasi-orthogonality of subalgebra pairs and the overlap invariant
// c(A,B) = Tr(E_A E_B), together with checkable forms of the structural
// lemmas about quasi-orthogonal pairs.

#include <cstdint>

#include "qosa/algebra.hpp"

namespace qosa {

inline constexpr std::uint64_t kDefaultSeed = 20110316;

struct OverlapReport {
  double c_value = 0.0;
  bool is_quasi_orthogonal = false;
  /// max over basis pairs of |tau(a b) - tau(a) tau(b)|.
  double max_trace_defect = 0.0;
  int dim_a = 0;
  int dim_b = 0;
  int n = 0;
};

/// Quasi-orthogonal when both c <= 1 + tol and the trace defect is <= tol.
OverlapReport quasi_orthogonal(const SubAlgebra& a, const SubAlgebra& b, double tol = kDefaultTol);

/// c(A,B); symmetric, 1 <= c <= min(dim A, dim B).
double c_value(const SubAlgebra& a, const SubAlgebra& b);

struct TraceFormulaCheck {
  double lhs = 0.0;  // c(A', B')
  double rhs = 0.0;  // n^2 c(A,B) / (dim A dim B)
  bool pass = false;
};

/// Commutant trace formula. Throws kNotBalanced if either algebra is not
/// homogeneously balanced, since the identity need not hold then.
TraceFormulaCheck trace_formula_check(const SubAlgebra& a, const SubAlgebra& b,
                                      double tol = kDefaultTol);

struct OhnoPetzCheck {
  bool commutants_qo = false;
  bool dim_product_is_n2 = false;
  bool agree = false;
};

/// For quasi-orthogonal A, B: A' and B' are quasi-orthogonal iff
/// dim(A) dim(B) = n^2. Throws kHypothesisViolated if A, B are not
/// quasi-orthogonal.
OhnoPetzCheck ohno_petz_check(const SubAlgebra& a, const SubAlgebra& b, double tol = kDefaultTol);

struct CrossTermReport {
  double max_residual = 0.0;
  int samples = 0;
  std::uint64_t seed = kDefaultSeed;
};

/// Largest |F(a b)| and |F(b a)| over random unit traceless a in A, b in B,
/// F the projection onto A + B. Zero up to rounding for quasi-orthogonal
/// pairs. Throws kHypothesisViolated otherwise.
CrossTermReport cross_term_defect(const SubAlgebra& a, const SubAlgebra& b, int samples,
                                  double tol = kDefaultTol, std::uint64_t seed = kDefaultSeed);

struct ProductBasisReport {
  bool orthonormal = false;
  double gram_defect = 0.0;
};

/// Checks that {sqrt(n) a_i b_j} is orthonormal for orthonormal bases of
/// quasi-orthogonal A, B (hence dim A dim B <= n^2).
ProductBasisReport product_basis_check(const SubAlgebra& a, const SubAlgebra& b,
                                       double tol = kDefaultTol);

struct InjectivityReport {
  /// Rank of b -> b x on B.
  int rank = 0;
  int dim_b = 0;
  bool injective = false;
};

/// If B is quasi-orthogonal to an algebra containing the projection onto x,
/// then <x, b x> = tau(b) forces b -> b x to be injective on B. A rank
/// below dim B therefore rules such a pair out. x must be non-zero.
InjectivityReport vector_map_injectivity(const SubAlgebra& b, const Eigen::VectorXcd& x,
                                         double tol = kDefaultTol);

}  // namespace qosa
