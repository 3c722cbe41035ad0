#include "qosa/certify.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

#include <json.hpp>

#include "qosa/error.hpp"

namespace qosa {

std::string to_string(const Rational& r) {
  if (r.denominator() == 1) return std::to_string(r.numerator());
  return std::to_string(r.numerator()) + "/" + std::to_string(r.denominator());
}

namespace {

class ExprParser {
 public:
  explicit ExprParser(std::string_view s) : s_(s) {}

  Rational parse() {
    Rational v = expr();
    skip();
    if (pos_ != s_.size()) fail("trailing input");
    return v;
  }

 private:
  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }
  bool eat(char c) {
    skip();
    if (pos_ < s_.size() && s_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }
  [[noreturn]] void fail(const std::string& what) const {
    raise(ErrorCode::kInvalidArgument,
          "expression '" + std::string(s_) + "': " + what + " at offset " + std::to_string(pos_));
  }

  Rational expr() {
    Rational v = term();
    for (;;) {
      if (eat('+')) {
        v += term();
      } else if (eat('-')) {
        v -= term();
      } else {
        return v;
      }
    }
  }

  Rational term() {
    Rational v = factor();
    for (;;) {
      if (eat('*')) {
        v *= factor();
      } else if (eat('/')) {
        Rational d = factor();
        if (d == Rational(0)) fail("division by zero");
        v /= d;
      } else {
        return v;
      }
    }
  }

  Rational factor() {
    if (eat('-')) return -factor();
    if (eat('(')) {
      Rational v = expr();
      if (!eat(')')) fail("expected ')'");
      return v;
    }
    skip();
    const std::size_t start = pos_;
    std::int64_t v = 0;
    while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) {
      v = v * 10 + (s_[pos_] - '0');
      ++pos_;
    }
    if (pos_ == start) fail("expected a number");
    return Rational(v);
  }

  std::string_view s_;
  std::size_t pos_ = 0;
};

}  // namespace

Rational evaluate_expression(std::string_view expr) { return ExprParser(expr).parse(); }

std::int64_t SignatureItem::dim(int ambient_n) const {
  switch (kind) {
    case Kind::kMasa: return ambient_n;
    case Kind::kFactor: return static_cast<std::int64_t>(param) * param;
    case Kind::kAbelian: return param;
  }
  return 0;
}

std::string SignatureItem::label() const {
  switch (kind) {
    case Kind::kMasa: return "Masa";
    case Kind::kFactor: return "Factor(" + std::to_string(param) + ")";
    case Kind::kAbelian: return "Abelian(" + std::to_string(param) + ")";
  }
  return "?";
}

TrivialConditions trivial_conditions(const SystemSignature& sig) {
  const int n = sig.ambient_n;
  if (n < 1) raise(ErrorCode::kInvalidArgument, "ambient dimension must be >= 1");
  TrivialConditions out;
  const std::int64_t n2 = static_cast<std::int64_t>(n) * n;
  out.traceless_capacity = n2 - 1;

  bool has_masa = false;
  bool has_qubit = false;
  for (std::size_t i = 0; i < sig.entries.size(); ++i) {
    const auto& e = sig.entries[i];
    if (e.kind != SignatureItem::Kind::kMasa && e.param < 1) {
      raise(ErrorCode::kInvalidArgument, e.label() + ": parameter must be >= 1");
    }
    bool fits = true;
    if (e.kind == SignatureItem::Kind::kFactor) fits = n % e.param == 0;
    if (e.kind == SignatureItem::Kind::kAbelian) fits = e.param <= n;
    if (!fits) {
      out.embeddable = false;
      out.violations.push_back("item " + std::to_string(i) + " " + e.label() +
                               " does not embed unitally in M_" + std::to_string(n));
    }
    has_masa = has_masa || e.kind == SignatureItem::Kind::kMasa;
    has_qubit = has_qubit || (e.kind == SignatureItem::Kind::kFactor && e.param == 2);
    out.traceless_sum += e.dim(n) - 1;
  }

  for (std::size_t i = 0; i < sig.entries.size(); ++i) {
    for (std::size_t j = i + 1; j < sig.entries.size(); ++j) {
      const std::int64_t p = sig.entries[i].dim(n) * sig.entries[j].dim(n);
      if (p > n2) {
        out.pairwise_products = false;
        out.violations.push_back("items " + std::to_string(i) + ", " + std::to_string(j) +
                                 ": dimension product " + std::to_string(p) + " exceeds " +
                                 std::to_string(n2));
      }
    }
  }

  if (out.traceless_sum > out.traceless_capacity) {
    out.dimension_count = false;
    out.violations.push_back("sum of (dim - 1) is " + std::to_string(out.traceless_sum) +
                             ", exceeds " + std::to_string(out.traceless_capacity));
  }
  out.decomposition = out.traceless_sum == out.traceless_capacity;

  if (has_masa && n > 1) out.masa_capacity = n + 1;
  if (has_qubit && n > 1 && (n & (n - 1)) == 0) {
    int k = 0;
    while ((1 << k) < n) ++k;
    out.qubit_capacity = ((std::int64_t{1} << (2 * k)) - 1) / 3;
  }
  return out;
}

const char* to_string(Verdict v) {
  return v == Verdict::kInfeasible ? "infeasible" : "feasible-unknown";
}

AppliformulaBounds appliformula_bounds(int n, std::span<const OverlapItem> items, Rational dim_c) {
  if (n < 1) raise(ErrorCode::kInvalidArgument, "ambient dimension must be >= 1");
  AppliformulaBounds b;
  Rational sum_c{0};
  Rational sum_excess{0};
  for (const auto& it : items) {
    if (it.c < Rational(1)) {
      raise(ErrorCode::kInvalidArgument, "c-value " + to_string(it.c) + " is below 1");
    }
    if (it.dim < 1) raise(ErrorCode::kInvalidArgument, "dimension must be >= 1");
    sum_c += it.c;
    sum_excess += it.c - Rational(it.dim);
  }
  const auto k = static_cast<std::int64_t>(items.size());
  const Rational n2(static_cast<std::int64_t>(n) * n);
  b.lower = Rational(1 - k) + sum_c;
  b.upper = n2 + sum_excess;
  b.upper_as_published = b.upper - 1;
  if (dim_c > b.upper) {
    b.verdict = Verdict::kInfeasible;
    b.slack = dim_c - b.upper;
  } else if (dim_c < b.lower) {
    b.verdict = Verdict::kInfeasible;
    b.slack = b.lower - dim_c;
  }
  return b;
}

PauliBound pauli_bound(int block_mult, int blocks, int n) {
  if (block_mult < 1 || blocks < 1) {
    raise(ErrorCode::kInvalidArgument, "multiplicity and block count must be >= 1");
  }
  if (static_cast<std::int64_t>(block_mult) * blocks != n) {
    raise(ErrorCode::kInvalidArgument, "m * t must equal n");
  }
  if (blocks > 24) raise(ErrorCode::kTooLarge, "vertex enumeration limited to t <= 24");

  // Vertices of {sum = 0} cut with the cube: all coordinates but one at +-1,
  // the remaining one fixed by the sum and required to lie in [-1, 1].
  PauliBound out;
  out.max_sum_squares = Rational(-1);
  const int t = blocks;
  for (int free = 0; free < t; ++free) {
    const std::uint32_t patterns = std::uint32_t{1} << (t - 1);
    for (std::uint32_t mask = 0; mask < patterns; ++mask) {
      std::vector<int> lam(static_cast<std::size_t>(t), 0);
      int sum = 0;
      int bit = 0;
      for (int i = 0; i < t; ++i) {
        if (i == free) continue;
        lam[static_cast<std::size_t>(i)] = (mask >> bit++) & 1U ? 1 : -1;
        sum += lam[static_cast<std::size_t>(i)];
      }
      if (sum < -1 || sum > 1) continue;
      lam[static_cast<std::size_t>(free)] = -sum;
      std::int64_t sq = 0;
      for (int v : lam) sq += v * v;
      if (Rational(sq) > out.max_sum_squares) {
        out.max_sum_squares = Rational(sq);
        out.vertex = lam;
      }
    }
  }
  out.max_trace = out.max_sum_squares * block_mult;
  out.c_bound = (3 * out.max_trace + n) / Rational(n);
  return out;
}

std::int64_t count_fixed_point_free_involutions(int k) {
  if (k < 0 || k > 8) raise(ErrorCode::kTooLarge, "involution enumeration limited to k <= 8");
  std::int64_t total = 1;
  for (int i = 0; i < k; ++i) total *= k;
  std::int64_t count = 0;
  std::vector<int> s(static_cast<std::size_t>(k));
  for (std::int64_t code = 0; code < total; ++code) {
    std::int64_t c = code;
    for (int i = 0; i < k; ++i) {
      s[static_cast<std::size_t>(i)] = static_cast<int>(c % k);
      c /= k;
    }
    bool ok = true;
    for (int i = 0; i < k && ok; ++i) {
      const int si = s[static_cast<std::size_t>(i)];
      ok = si != i && s[static_cast<std::size_t>(si)] == i;
    }
    if (ok) ++count;
  }
  return count;
}

namespace {

std::string num(std::int64_t v) { return std::to_string(v); }
std::string num(const Rational& r) {
  if (r.denominator() == 1) return r.numerator() < 0 ? "(" + to_string(r) + ")" : to_string(r);
  return "(" + to_string(r) + ")";
}

// "n2 + count*(c - dim)" style expression for the projection-trace bound.
struct Group {
  std::int64_t count;
  Rational c;
  std::int64_t dim;
};

std::string bound_expression(std::int64_t lead, const std::vector<Group>& groups) {
  std::string e = num(lead);
  for (const auto& g : groups) {
    e += " + " + num(g.count) + "*(" + num(g.c) + " - " + num(g.dim) + ")";
  }
  return e;
}

std::vector<OverlapItem> expand(const std::vector<Group>& groups) {
  std::vector<OverlapItem> items;
  for (const auto& g : groups) {
    for (std::int64_t i = 0; i < g.count; ++i) items.push_back({g.dim, g.c});
  }
  return items;
}

void require_size(int n, int lo, int hi) {
  if (n < lo || n > hi) {
    raise(ErrorCode::kInvalidArgument,
          "preset parameter n must lie in [" + num(lo) + ", " + num(hi) + "], got " + num(n));
  }
}

constexpr const char* kAnchorCounting = "dimension count of traceless parts";
constexpr const char* kAnchorCommutantQo =
    "commutants of a quasi-orthogonal pair with dim(A) dim(B) = n^2 are quasi-orthogonal";
constexpr const char* kAnchorFactor = "a factor and its commutant are quasi-orthogonal";
constexpr const char* kAnchorTraceFormula =
    "trace formula c(A', B') = n^2 c(A, B) / (dim A dim B) for homogeneously balanced algebras";
constexpr const char* kAnchorBound =
    "projection-trace bound 1 - k + sum c_j <= dim C <= n^2 + sum (c_j - dim_j)";
constexpr const char* kAnchorPauli =
    "Pauli-image bound: Tr(E(X)^2) <= m max sum lambda_i^2 over traceless spectra in [-1, 1]";
constexpr const char* kAnchorTwoAlgebra =
    "a subalgebra of the sum of two quasi-orthogonal subalgebras lies in one of them or is "
    "isomorphic to C^2 (taken as given)";
constexpr const char* kAnchorDoubleCommutant = "double commutant theorem";

DerivationStep bound_step(const std::string& what, std::int64_t n2,
                          const std::vector<Group>& groups, const AppliformulaBounds& b,
                          const Rational& dim_c, bool with_lower = true) {
  DerivationStep s;
  s.statement = what;
  s.values.push_back({"upper bound on dim C", b.upper, bound_expression(n2, groups)});
  s.values.push_back({"upper bound on dim C, commonly quoted form (one lower)",
                      b.upper_as_published, bound_expression(n2 - 1, groups)});
  if (with_lower) {
    std::string lower_expr = num(1 - static_cast<std::int64_t>(expand(groups).size()));
    for (const auto& g : groups) lower_expr += " + " + num(g.count) + "*" + num(g.c);
    s.values.push_back({"lower bound on dim C", b.lower, lower_expr});
  }
  s.values.push_back({"dim C", dim_c, ""});
  s.anchor = kAnchorBound;
  return s;
}

DerivationStep verdict_step(const AppliformulaBounds& b, const Rational& dim_c) {
  DerivationStep s;
  if (b.verdict == Verdict::kInfeasible) {
    s.statement = "dim C lies outside the admissible interval, so the system cannot exist";
  } else {
    s.statement = "dim C lies inside the admissible interval; no contradiction";
  }
  s.values.push_back({"slack", b.slack,
                      b.verdict == Verdict::kInfeasible
                          ? (dim_c > b.upper ? num(dim_c) + " - " + num(b.upper)
                                             : num(b.lower) + " - " + num(dim_c))
                          : "0"});
  s.anchor = kAnchorBound;
  return s;
}

DerivationStep counting_step(const SystemSignature& sig, const std::string& desc) {
  const auto tc = trivial_conditions(sig);
  if (!tc.all_pass()) {
    raise(ErrorCode::kHypothesisViolated, "preset signature fails the trivial conditions");
  }
  const std::int64_t n = sig.ambient_n;
  std::int64_t masas = 0;
  std::vector<std::pair<std::int64_t, std::int64_t>> factors;  // (d, count)
  for (const auto& e : sig.entries) {
    if (e.kind == SignatureItem::Kind::kMasa) {
      ++masas;
    } else if (e.kind == SignatureItem::Kind::kFactor) {
      auto it = std::find_if(factors.begin(), factors.end(),
                             [&](const auto& p) { return p.first == e.param; });
      if (it == factors.end()) {
        factors.emplace_back(e.param, 1);
      } else {
        ++it->second;
      }
    }
  }
  std::string expr;
  if (masas > 0) expr = num(masas) + "*(" + num(n) + " - 1)";
  for (const auto& [d, count] : factors) {
    if (!expr.empty()) expr += " + ";
    expr += num(count) + "*(" + num(d * d) + " - 1)";
  }
  DerivationStep s;
  s.statement = desc + (tc.decomposition ? "; the traceless parts fill M_n exactly, so the "
                                           "system is a quasi-orthogonal decomposition"
                                         : "; the trivial conditions are satisfied");
  s.values.push_back({"sum of (dim - 1)", Rational(tc.traceless_sum), expr});
  s.values.push_back({"n^2 - 1", Rational(tc.traceless_capacity),
                      num(n) + "*" + num(n) + " - 1"});
  s.anchor = kAnchorCounting;
  return s;
}

ObstructionReport mn2_one_factor(int n) {
  require_size(n, 2, 1000);
  const std::int64_t nn = static_cast<std::int64_t>(n) * n;  // ambient dimension
  const std::int64_t n4 = nn * nn;
  ObstructionReport r;
  r.preset = "mn2-one-factor";

  SystemSignature sig{static_cast<int>(nn), {}};
  for (std::int64_t i = 0; i < nn; ++i) sig.entries.push_back(SignatureItem::masa());
  sig.entries.push_back(SignatureItem::factor(n));
  r.steps.push_back(counting_step(
      sig, "M_" + num(nn) + " with " + num(nn) + " MASAs A_j and one factor B = M_" + num(n)));

  DerivationStep s2;
  s2.statement =
      "every pair has dimension product n^2, so passing to commutants keeps the system "
      "quasi-orthogonal; A_j' = A_j and C := B' is quasi-orthogonal to every A_j";
  s2.values.push_back({"dim A_j * dim B", Rational(nn * nn), num(nn) + "*" + num(nn)});
  s2.values.push_back({"n^2", Rational(n4), num(nn) + "*" + num(nn)});
  s2.values.push_back({"c(A_j, C)", Rational(1), ""});
  s2.anchor = kAnchorCommutantQo;
  r.steps.push_back(s2);

  DerivationStep s3;
  s3.statement = "B is a factor, so c(B, C) = c(B, B') = 1";
  s3.values.push_back({"c(B, C)", Rational(1), ""});
  s3.anchor = kAnchorFactor;
  r.steps.push_back(s3);

  const Rational dim_c(n4 / (static_cast<std::int64_t>(n) * n));
  DerivationStep s4;
  s4.statement = "C = B' is a factor of dimension n^2 / dim B";
  s4.values.push_back({"dim C", dim_c, num(n4) + "/" + num(static_cast<std::int64_t>(n) * n)});
  s4.anchor = kAnchorDoubleCommutant;
  r.steps.push_back(s4);

  std::vector<Group> groups{{nn, Rational(1), nn}, {1, Rational(1), static_cast<std::int64_t>(n) * n}};
  const auto items = expand(groups);
  const auto b = appliformula_bounds(static_cast<int>(nn), items, dim_c);
  r.steps.push_back(bound_step("bound dim C against the decomposition", n4, groups, b, dim_c));
  r.steps.push_back(verdict_step(b, dim_c));
  r.verdict = b.verdict;
  r.slack = b.slack;
  return r;
}

ObstructionReport mn2_three_factors(int n) {
  require_size(n, 2, 1000);
  const std::int64_t nn = static_cast<std::int64_t>(n) * n;
  const std::int64_t n4 = nn * nn;
  ObstructionReport r;
  r.preset = "mn2-three-factors";

  SystemSignature sig{static_cast<int>(nn), {}};
  for (std::int64_t i = 0; i < nn - 2; ++i) sig.entries.push_back(SignatureItem::masa());
  for (int i = 0; i < 3; ++i) sig.entries.push_back(SignatureItem::factor(n));
  r.steps.push_back(counting_step(sig, "M_" + num(nn) + " with " + num(nn - 2) +
                                           " MASAs and three factors B_1, B_2, B_3 = M_" +
                                           num(n)));

  DerivationStep s2;
  s2.statement =
      "every pair has dimension product n^2, so the commutant system is again a "
      "quasi-orthogonal decomposition in which each MASA is its own commutant";
  s2.values.push_back({"dim A * dim B for every pair", Rational(n4), num(nn) + "*" + num(nn)});
  s2.values.push_back({"n^2", Rational(n4), num(nn) + "*" + num(nn)});
  s2.anchor = kAnchorCommutantQo;
  r.steps.push_back(s2);

  DerivationStep s3;
  s3.statement =
      "B_j' is quasi-orthogonal to B_j and to every MASA, hence lies in the sum of the two "
      "other factors; having dimension above 2 it equals one of them";
  s3.values.push_back({"dim B_j'", Rational(n4 / nn), num(n4) + "/" + num(nn)});
  s3.values.push_back({"dimension of C^2", Rational(2), ""});
  s3.anchor = kAnchorTwoAlgebra;
  r.steps.push_back(s3);

  DerivationStep s4;
  s4.statement =
      "so B_j' = B_s(j) for a map s on {1, 2, 3}; B'' = B makes s an involution, and "
      "s(j) = j would make the non-abelian B_j equal its commutant, so s has no fixed point";
  s4.values.push_back({"fixed points required of s", Rational(0), ""});
  s4.anchor = kAnchorDoubleCommutant;
  r.steps.push_back(s4);

  const std::int64_t fpf = count_fixed_point_free_involutions(3);
  DerivationStep s5;
  s5.statement =
      "an involution on an odd set has a fixed point; enumeration of all maps on {1, 2, 3} "
      "finds no fixed-point-free involution";
  s5.values.push_back({"fixed-point-free involutions on 3 points", Rational(fpf), ""});
  s5.values.push_back({"minimum fixed points of an involution on 3 points", Rational(3 % 2),
                       "3 - 2*1"});
  s5.anchor = "parity of involutions";
  r.steps.push_back(s5);

  const Rational min_fixed(3 % 2);
  r.verdict = fpf == 0 ? Verdict::kInfeasible : Verdict::kFeasibleUnknown;
  r.slack = r.verdict == Verdict::kInfeasible ? min_fixed - Rational(0) : Rational(0);
  DerivationStep s6;
  s6.statement = r.verdict == Verdict::kInfeasible
                     ? "no admissible s exists, so the system cannot exist"
                     : "an admissible s exists; no contradiction";
  s6.values.push_back({"slack", r.slack, "1 - 0"});
  s6.anchor = "parity of involutions";
  r.steps.push_back(s6);
  return r;
}

ObstructionReport m6_six_masa_one_factor() {
  constexpr std::int64_t n = 6;
  ObstructionReport r;
  r.preset = "m6-6masa-1factor";

  SystemSignature sig{6, {}};
  for (int i = 0; i < 6; ++i) sig.entries.push_back(SignatureItem::masa());
  sig.entries.push_back(SignatureItem::factor(2));
  r.steps.push_back(counting_step(sig, "M_6 with six MASAs A_j and one factor B = M_2"));

  const Rational dim_c(36 / 4);
  DerivationStep s2;
  s2.statement = "take C := B', a factor M_3 of dimension n^2 / dim B";
  s2.values.push_back({"dim C", dim_c, "36/4"});
  s2.anchor = kAnchorDoubleCommutant;
  r.steps.push_back(s2);

  const Rational c_ac = Rational(n * n, 6 * 4) * 1;
  DerivationStep s3;
  s3.statement = "MASAs and factors are homogeneously balanced, and A_j' = A_j, so "
                 "c(A_j, C) = c(A_j', B') = n^2 c(A_j, B) / (dim A_j dim B)";
  s3.values.push_back({"c(A_j, C)", c_ac, "36*1/(6*4)"});
  s3.anchor = kAnchorTraceFormula;
  r.steps.push_back(s3);

  DerivationStep s4;
  s4.statement = "B is a factor, so c(B, C) = 1";
  s4.values.push_back({"c(B, C)", Rational(1), ""});
  s4.anchor = kAnchorFactor;
  r.steps.push_back(s4);

  std::vector<Group> groups{{6, c_ac, 6}, {1, Rational(1), 4}};
  const auto b = appliformula_bounds(6, expand(groups), dim_c);
  r.steps.push_back(bound_step("bound dim C against the system", 36, groups, b, dim_c));
  r.steps.push_back(verdict_step(b, dim_c));
  r.verdict = b.verdict;
  r.slack = b.slack;
  return r;
}

ObstructionReport m6_five_masa_three_factor() {
  constexpr std::int64_t n = 6;
  ObstructionReport r;
  r.preset = "m6-5masa-3factor";

  SystemSignature sig{6, {}};
  for (int i = 0; i < 5; ++i) sig.entries.push_back(SignatureItem::masa());
  for (int i = 0; i < 3; ++i) sig.entries.push_back(SignatureItem::factor(2));
  r.steps.push_back(
      counting_step(sig, "M_6 with five MASAs A_j and three factors B_1, B_2, B_3 = M_2"));

  const Rational dim_c(36 / 4);
  DerivationStep s2;
  s2.statement = "take C := B_1', a factor M_3 of dimension n^2 / dim B_1";
  s2.values.push_back({"dim C", dim_c, "36/4"});
  s2.anchor = kAnchorDoubleCommutant;
  r.steps.push_back(s2);

  const Rational c_ac = Rational(n * n, 6 * 4) * 1;
  DerivationStep s3;
  s3.statement = "c(A_j, C) = c(A_j', B_1') = n^2 c(A_j, B_1) / (dim A_j dim B_1)";
  s3.values.push_back({"c(A_j, C)", c_ac, "36*1/(6*4)"});
  s3.anchor = kAnchorTraceFormula;
  r.steps.push_back(s3);

  DerivationStep s4;
  s4.statement = "B_1 is a factor, so c(B_1, C) = 1";
  s4.values.push_back({"c(B_1, C)", Rational(1), ""});
  s4.anchor = kAnchorFactor;
  r.steps.push_back(s4);

  const auto pb = pauli_bound(2, 3, 6);
  DerivationStep s5;
  s5.statement =
      "self-adjoint elements of C = M_3 (x) 1_2 have three eigenvalues of multiplicity 2; a "
      "Pauli image in B_2 or B_3 has spectrum in [-1, 1] and trace 0, so c(B_j, C) is at most "
      "(3 m max sum lambda^2 + n) / n for j = 2, 3";
  s5.values.push_back({"max sum lambda_i^2", pb.max_sum_squares, "1 + 1 + 0"});
  s5.values.push_back({"max Tr(E_C(X)^2)", pb.max_trace, "2*2"});
  s5.values.push_back({"upper bound on c(B_j, C)", pb.c_bound, "(3*4 + 6)/6"});
  s5.anchor = kAnchorPauli;
  r.steps.push_back(s5);

  // c enters the upper bound with a positive sign, so replacing c(B_j, C) by
  // an upper bound for it keeps the bound valid; the lower bound would not
  // survive the substitution and is not used here.
  std::vector<Group> groups{{5, c_ac, 6}, {1, Rational(1), 4}, {2, pb.c_bound, 4}};
  const auto b = appliformula_bounds(6, expand(groups), dim_c);
  DerivationStep s6 = bound_step("bound dim C against the system, with c(B_j, C) replaced by its "
                                 "upper bound (the lower bound is not used)",
                                 36, groups, b, dim_c, false);
  r.steps.push_back(s6);
  AppliformulaBounds upper_only = b;
  if (dim_c > b.upper) {
    upper_only.verdict = Verdict::kInfeasible;
    upper_only.slack = dim_c - b.upper;
  } else {
    upper_only.verdict = Verdict::kFeasibleUnknown;
    upper_only.slack = 0;
  }
  r.steps.push_back(verdict_step(upper_only, dim_c));
  r.verdict = upper_only.verdict;
  r.slack = upper_only.slack;
  return r;
}

nlohmann::json rational_json(const Rational& r) {
  return {{"num", r.numerator()}, {"den", r.denominator()}};
}

}  // namespace

std::vector<std::string> preset_names() {
  return {"mn2-one-factor", "mn2-three-factors", "m6-6masa-1factor", "m6-5masa-3factor"};
}

ObstructionReport certify_preset(std::string_view name, int n) {
  if (name == "mn2-one-factor") return mn2_one_factor(n);
  if (name == "mn2-three-factors") return mn2_three_factors(n);
  if (name == "m6-6masa-1factor") return m6_six_masa_one_factor();
  if (name == "m6-5masa-3factor") return m6_five_masa_three_factor();
  std::string known;
  for (const auto& p : preset_names()) known += (known.empty() ? "" : ", ") + p;
  raise(ErrorCode::kUnknownPreset, "unknown preset '" + std::string(name) + "' (known: " + known + ")");
}

std::string ObstructionReport::to_text() const {
  std::ostringstream os;
  os << "preset: " << preset << "\n";
  for (std::size_t i = 0; i < steps.size(); ++i) {
    const auto& s = steps[i];
    os << "[" << i + 1 << "] " << s.statement << "\n";
    for (const auto& v : s.values) {
      os << "      " << v.name << " = " << to_string(v.value);
      if (!v.expression.empty()) os << "   (" << v.expression << ")";
      os << "\n";
    }
    os << "      uses: " << s.anchor << "\n";
  }
  os << "verdict: " << to_string(verdict) << " (slack " << to_string(slack) << ")\n";
  return os.str();
}

std::string ObstructionReport::to_json() const {
  nlohmann::json j;
  j["preset"] = preset;
  j["verdict"] = to_string(verdict);
  j["slack"] = rational_json(slack);
  j["steps"] = nlohmann::json::array();
  for (const auto& s : steps) {
    nlohmann::json js;
    js["statement"] = s.statement;
    js["anchor"] = s.anchor;
    js["values"] = nlohmann::json::array();
    for (const auto& v : s.values) {
      nlohmann::json jv = rational_json(v.value);
      jv["name"] = v.name;
      jv["text"] = to_string(v.value);
      if (!v.expression.empty()) jv["expression"] = v.expression;
      js["values"].push_back(jv);
    }
    j["steps"].push_back(js);
  }
  return j.dump(2);
}

}  // namespace qosa
