#pragma once

// Numerical search for quasi-orthogonal systems: minimise the total overlap
// defect sum_{i<j} (c(U_i A_i U_i^*, U_j A_j U_j^*) - 1) over unitaries U_i
// by Riemannian gradient descent on U(n) with polar retraction and seeded
// random restarts.

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "qosa/constructions.hpp"
#include "qosa/overlap.hpp"

namespace qosa {

inline constexpr const char* kSearchDisclaimer =
    "numerical search only: a defect that stays above zero is evidence, not proof, that no "
    "such system exists";

struct SearchProblem {
  int n = 1;
  std::vector<SubAlgebra> prototypes;
  std::vector<std::string> names;  // empty or one per prototype
  std::vector<std::size_t> frozen;
  std::uint64_t seed = kDefaultSeed;
  int restarts = 8;
  int max_iters = 500;
  double tol_defect = 1e-10;
  /// Worker threads for restarts; 0 picks the hardware concurrency.
  int threads = 0;

  /// Throws kDimensionMismatch / kInvalidArgument.
  void validate() const;
  std::string name(std::size_t i) const;
};

struct RestartTrace {
  int index = 0;
  /// Defect after each accepted step, starting with the initial point.
  std::vector<double> history;
  int iterations = 0;
  double final_defect = 0.0;
};

struct SearchResult {
  double best_defect = 0.0;
  std::vector<HSMatrix> unitaries;
  /// c-values of the conjugated best system; diagonal holds dim A_i.
  Eigen::MatrixXd per_pair_c;
  int iterations = 0;
  int best_restart = 0;
  std::uint64_t seed = 0;
  bool converged = false;
  std::vector<RestartTrace> restarts;
};

/// sum_{i<j} (c(A_i, A_j) - 1). Throws kDimensionMismatch.
double defect(std::span<const SubAlgebra> system);

/// Defect of the system U_i A_i U_i^*.
double defect_at(const SearchProblem& problem, std::span<const HSMatrix> unitaries);

/// Hermitian traceless G_i with d/dt defect(.., exp(i t H) U_i, ..)|_{t=0}
/// = Re Tr(G_i H) for every Hermitian H. Frozen entries get G_i = 0.
std::vector<HSMatrix> defect_gradient(const SearchProblem& problem,
                                      std::span<const HSMatrix> unitaries);

/// Deterministic for a given problem (including seed), independent of the
/// thread count.
SearchResult optimize(const SearchProblem& problem);

/// The best conjugated system, with search metadata.
SystemSpec result_system(const SearchProblem& problem, const SearchResult& result);

/// Per-pair c matrix, restart summaries and the disclaimer.
std::string report_json(const SearchProblem& problem, const SearchResult& result);
std::string report_text(const SearchProblem& problem, const SearchResult& result);

/// Writes the system file to `path` and the report to `<path>.report.json`.
void save_result(const SearchProblem& problem, const SearchResult& result,
                 const std::filesystem::path& path);

/// Problem file:
///   { "n": int,
///     "prototypes": [ { "kind": "masa" | "factor" | "algebra",
///                       "name": str?, "d": int (factor), "count": int?,
///                       "basis": [matrix...] (algebra) }, ... ],
///     "frozen": [int...]?, "seed": int?, "restarts": int?,
///     "max_iters": int?, "tol_defect": number? }
SearchProblem problem_from_json(std::string_view text, double tol = kDefaultTol);
SearchProblem load_problem(const std::filesystem::path& path, double tol = kDefaultTol);

}  // namespace qosa
