#pragma once

// Exact-rational obstruction certificates for hypothesised quasi-orthogonal
// systems. Nothing in here touches floating point: c-values enter either
// through the commutant trace formula applied to integer dimensions or
// through proved bounds.

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <boost/rational.hpp>

namespace qosa {

using Rational = boost::rational<std::int64_t>;

/// "p/q", or "p" for integers.
std::string to_string(const Rational& r);

/// Evaluates +, -, *, / and parentheses over integer literals exactly.
/// Used to replay the arithmetic recorded in derivation steps.
Rational evaluate_expression(std::string_view expr);

struct SignatureItem {
  enum class Kind { kMasa, kFactor, kAbelian };
  Kind kind = Kind::kMasa;
  int param = 0;  // d for Factor(d), m for Abelian(m)

  static SignatureItem masa() { return {Kind::kMasa, 0}; }
  static SignatureItem factor(int d) { return {Kind::kFactor, d}; }
  static SignatureItem abelian(int m) { return {Kind::kAbelian, m}; }

  std::int64_t dim(int ambient_n) const;
  std::string label() const;
};

struct SystemSignature {
  int ambient_n = 1;
  std::vector<SignatureItem> entries;
};

struct TrivialConditions {
  bool embeddable = true;        // (1) every item exists inside M_n
  bool pairwise_products = true; // (2) dim_i dim_j <= n^2
  bool dimension_count = true;   // (3) sum (dim_j - 1) <= n^2 - 1
  bool decomposition = false;    // equality in (3)
  std::int64_t traceless_sum = 0;
  std::int64_t traceless_capacity = 0;
  std::optional<std::int64_t> masa_capacity;   // n + 1, when MASAs are present
  std::optional<std::int64_t> qubit_capacity;  // (4^k - 1)/3 for n = 2^k with M_2 items
  std::vector<std::string> violations;

  bool all_pass() const { return embeddable && pairwise_products && dimension_count; }
};

TrivialConditions trivial_conditions(const SystemSignature& sig);

enum class Verdict { kFeasibleUnknown, kInfeasible };
const char* to_string(Verdict v);

struct OverlapItem {
  std::int64_t dim = 1;
  Rational c{1};
};

struct AppliformulaBounds {
  /// 1 - k + sum c_j
  Rational lower;
  /// n^2 + sum (c_j - dim_j): what the projection-trace argument yields.
  Rational upper;
  /// n^2 - 1 + sum (c_j - dim_j): the commonly quoted form, one below
  /// `upper`. Reported for comparison only; it is violated already by
  /// C = M_n against the scalars, so verdicts never use it.
  Rational upper_as_published;
  Verdict verdict = Verdict::kFeasibleUnknown;
  /// Amount by which dim_C misses [lower, upper]; zero when feasible.
  Rational slack{0};
};

/// Bounds on dim(C) for a subalgebra C measured against a quasi-orthogonal
/// system with the given dimensions and c(A_j, C) values (c_j >= 1).
AppliformulaBounds appliformula_bounds(int n, std::span<const OverlapItem> items, Rational dim_c);

struct PauliBound {
  /// Maximiser of sum lambda_i^2 over sum lambda_i = 0, lambda_i in [-1, 1].
  std::vector<int> vertex;
  Rational max_sum_squares;
  /// m * max_sum_squares: bound on Tr(E(X)^2) for a Pauli image X.
  Rational max_trace;
  /// (3 max_trace + n) / n: bound on c(M_2 copy, target).
  Rational c_bound;
};

/// Target algebra whose self-adjoint elements have t eigenvalues of
/// multiplicity m each (m t = n). Exact vertex enumeration.
PauliBound pauli_bound(int block_mult, int blocks, int n);

struct DerivationValue {
  std::string name;
  Rational value;
  /// Arithmetic that reproduces `value` via evaluate_expression; may be empty.
  std::string expression;
};

struct DerivationStep {
  std::string statement;
  std::vector<DerivationValue> values;
  /// The established result this step relies on.
  std::string anchor;
};

struct ObstructionReport {
  std::string preset;
  std::vector<DerivationStep> steps;
  Verdict verdict = Verdict::kFeasibleUnknown;
  Rational slack{0};

  std::string to_text() const;
  /// Step list with each value as {"num", "den"}.
  std::string to_json() const;
};

/// Names accepted by certify_preset.
std::vector<std::string> preset_names();

/// Presets: "mn2-one-factor", "mn2-three-factors" (both use n, the
/// ambient algebra being M_{n^2}), "m6-6masa-1factor", "m6-5masa-3factor".
/// Throws kUnknownPreset.
ObstructionReport certify_preset(std::string_view name, int n = 2);

/// Number of maps s on {0..k-1} with s(s(x)) = x and s(x) != x, by enumeration.
std::int64_t count_fixed_point_free_involutions(int k);

}  // namespace qosa
