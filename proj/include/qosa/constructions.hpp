#pragma once

// Standard example algebras and candidate systems, and the .qosa.json
// system file format:
//
//   { "n": int,
//     "algebras": [ { "name": str, "basis": [ matrix, ... ] }, ... ],
//     "metadata": { str: str, ... } }
//
// where a matrix is a row-major array of rows, each entry a [re, im] pair.

#include <filesystem>
#include <map>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "qosa/algebra.hpp"

namespace qosa {

struct SystemEntry {
  std::string name;
  SubAlgebra algebra;
};

class SystemSpec {
 public:
  explicit SystemSpec(int n);

  int ambient_dim() const { return n_; }
  std::size_t size() const { return entries_.size(); }
  const std::vector<SystemEntry>& entries() const { return entries_; }

  /// Throws kDimensionMismatch for a foreign ambient dimension and
  /// kInvalidArgument for a duplicate name.
  void add(std::string name, SubAlgebra algebra);

  std::optional<std::size_t> index_of(std::string_view name) const;
  /// Throws kInvalidArgument when the name is unknown.
  const SubAlgebra& at(std::string_view name) const;

  std::map<std::string, std::string>& metadata() { return metadata_; }
  const std::map<std::string, std::string>& metadata() const { return metadata_; }

 private:
  int n_;
  std::vector<SystemEntry> entries_;
  std::map<std::string, std::string> metadata_;
};

/// Span of the rank-one projections onto an orthonormal basis of C^n.
/// Throws kNotOrthonormal.
SubAlgebra masa_from_basis(std::span<const Eigen::VectorXcd> vectors, double tol = kDefaultTol);

/// The p+1 mutually unbiased bases of C^p (computational basis plus the
/// quadratic-phase bases), as MASAs. p prime, p <= 13.
SystemSpec mub_family(int p, double tol = kDefaultTol);

/// M_d (x) 1_{n/d} inside M_n.
SubAlgebra factor_left(int d, int n);
/// 1_{n/d} (x) M_d inside M_n.
SubAlgebra factor_right(int d, int n);

/// M_j (x) 1 and 1 (x) M_k inside M_{jk}, named "left" and "right".
SystemSpec factor_pair(int j, int k);

/// The two single-qubit factors and the Bell-basis MASA in M_4.
SystemSpec bell_system();

/// Columns are the vectors of the discrete Fourier basis of C^n.
HSMatrix fourier_matrix(int n);

/// Haar-distributed unitary (QR of a complex Ginibre matrix, phases fixed).
HSMatrix random_unitary(int n, std::mt19937_64& rng);

bool is_unitary(const HSMatrix& u, double tol);

/// U A U^*. Throws kNotUnitary.
SubAlgebra conjugate(const SubAlgebra& a, const HSMatrix& u, double tol = kDefaultTol);

std::string to_json(const SystemSpec& spec);
/// Parses and re-verifies every algebra at tol. Throws kSchemaError with a
/// JSON location, or kInvariantViolation naming the algebra and check.
SystemSpec from_json(std::string_view text, double tol = kDefaultTol);

void save(const SystemSpec& spec, const std::filesystem::path& path);
SystemSpec load(const std::filesystem::path& path, double tol = kDefaultTol);

/// Reads { "vectors": [ [ [re, im], ... ], ... ] } for masa_from_basis.
std::vector<Eigen::VectorXcd> load_vectors(const std::filesystem::path& path);

}  // namespace qosa
