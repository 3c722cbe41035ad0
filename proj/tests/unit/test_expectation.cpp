#include <doctest.h>

#include <random>

#include "qosa/constructions.hpp"
#include "qosa/expectation.hpp"
#include "support/oracles.hpp"

using namespace qosa;
using oracle::Mat;

TEST_CASE("expectation onto the diagonal keeps the diagonal") {
  const Expectation e(SubAlgebra::diagonal(3));
  const HSMatrix x{{1, 2, 3}, {4, 5, 6}, {7, 8, 9}};
  const HSMatrix d = HSMatrix::diagonal(std::vector<Complex>{1, 5, 9});
  CHECK(max_abs_diff(e.apply(x), d) < 1e-14);
}

TEST_CASE("expectation onto M_2 (x) 1_2 is the normalised partial trace") {
  const Expectation e(factor_left(2, 4));
  std::mt19937_64 rng(2);
  const Mat x = oracle::random_matrix(4, rng);
  // (id (x) Tr/2)(X) (x) 1_2, written out entrywise
  Mat pt = Mat::Zero(2, 2);
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) pt(i, j) = (x(2 * i, 2 * j) + x(2 * i + 1, 2 * j + 1)) / 2.0;
  }
  const Mat expected = oracle::kron(pt, Mat::Identity(2, 2));
  CHECK((e.apply(HSMatrix(x)).eigen() - expected).norm() < 1e-12);
}

TEST_CASE("expectation laws on random algebras and inputs") {
  std::mt19937_64 rng(31);
  for (int t = 0; t < 30; ++t) {
    const int n = std::uniform_int_distribution<int>(2, 6)(rng);
    const auto span = oracle::random_balanced(n, rng);
    const Expectation e(oracle::algebra(span));
    const HSMatrix x(oracle::random_matrix(n, rng));
    const HSMatrix y(oracle::random_matrix(n, rng));
    const HSMatrix ex = e.apply(x);
    CHECK(max_abs_diff(e.apply(ex), ex) < 1e-10);
    CHECK(std::abs(hs_inner(ex, y) - hs_inner(x, e.apply(y))) < 1e-10);
    CHECK(std::abs(ex.trace() - x.trace()) < 1e-10);
    CHECK(max_abs_diff(e.apply(HSMatrix::identity(n)), HSMatrix::identity(n)) < 1e-12);
    // oracle: explicit projection matrix built from the raw spanning set
    const Mat p = oracle::projection(span);
    CHECK((ex.vec() - p * x.vec()).norm() < 1e-9);
    // balanced target: twirl agrees
    CHECK(max_abs_diff(e.apply_twirl(x), ex) < 1e-9);
  }
}

TEST_CASE("conditional expectation property E(a x b) = a E(x) b") {
  std::mt19937_64 rng(37);
  const auto alg = factor_left(2, 6);
  const Expectation e(alg);
  for (int t = 0; t < 10; ++t) {
    const HSMatrix x(oracle::random_matrix(6, rng));
    const HSMatrix a = alg.project(HSMatrix(oracle::random_matrix(6, rng)));
    const HSMatrix b = alg.project(HSMatrix(oracle::random_matrix(6, rng)));
    CHECK(max_abs_diff(e.apply(a * x * b), a * e.apply(x) * b) < 1e-10);
  }
}

TEST_CASE("twirl on scalars, full algebra and the diagonal") {
  std::mt19937_64 rng(19);
  const HSMatrix x(oracle::random_matrix(3, rng));
  const HSMatrix tau = normalized_trace(x) * HSMatrix::identity(3);
  CHECK(max_abs_diff(Expectation(SubAlgebra::scalars(3)).apply_twirl(x), tau) < 1e-12);
  CHECK(max_abs_diff(Expectation(SubAlgebra::full(3)).apply_twirl(x), x) < 1e-12);
  const auto& m = x.eigen();
  const HSMatrix d = HSMatrix::diagonal(std::vector<Complex>{m(0, 0), m(1, 1), m(2, 2)});
  CHECK(max_abs_diff(Expectation(SubAlgebra::diagonal(3)).apply_twirl(x), d) < 1e-12);
}

TEST_CASE("summing b X b^* over a basis of A itself gives the expectation onto A'") {
  std::mt19937_64 rng(29);
  for (int t = 0; t < 10; ++t) {
    const int n = std::uniform_int_distribution<int>(2, 6)(rng);
    const auto span = oracle::random_balanced(n, rng);
    const auto a = oracle::algebra(span);
    const Mat x = oracle::random_matrix(n, rng);
    Mat acc = Mat::Zero(n, n);
    for (const auto& b : a.basis()) acc += b.eigen() * x * b.eigen().adjoint();
    acc *= double(n) / a.dim();
    const Mat pc = oracle::projection(a.commutant());
    CHECK((oracle::vec(acc) - pc * oracle::vec(x)).norm() < 1e-9);
  }
}

TEST_CASE("twirl refuses unbalanced targets") {
  const auto a = oracle::algebra(oracle::block_span({{2, 1}, {1, 1}}));
  const Expectation e(a);
  try {
    (void)e.apply_twirl(HSMatrix::identity(3));
    FAIL("expected NotBalanced");
  } catch (const Error& err) {
    CHECK(err.code() == ErrorCode::kNotBalanced);
  }
  // and on that target the twirl formula would indeed be wrong
  Mat twirl = Mat::Zero(3, 3);
  const Mat x = Mat::Identity(3, 3);
  const auto& comm = a.commutant();
  for (const auto& b : comm.basis()) twirl += b.eigen() * x * b.eigen().adjoint();
  twirl *= 3.0 / comm.dim();
  CHECK((twirl - x).norm() > 1e-3);
}

TEST_CASE("compose_trace matches Tr(P_A P_B) from explicit superoperators") {
  std::mt19937_64 rng(41);
  for (int t = 0; t < 15; ++t) {
    const int n = std::uniform_int_distribution<int>(2, 4)(rng);
    const auto sa = oracle::random_balanced(n, rng);
    const auto sb = oracle::random_balanced(n, rng);
    const Expectation ea(oracle::algebra(sa));
    const Expectation eb(oracle::algebra(sb));
    const double expected = oracle::c_value(oracle::projection(sa), oracle::projection(sb));
    CHECK(compose_trace(ea, eb) == doctest::Approx(expected).epsilon(1e-10));
    CHECK(compose_trace(eb, ea) == doctest::Approx(expected).epsilon(1e-10));
  }
  // composing with itself gives the dimension
  const Expectation e(factor_left(2, 4));
  CHECK(compose_trace(e, e) == doctest::Approx(4.0));
}

TEST_CASE("expectation rejects foreign dimensions") {
  const Expectation e(SubAlgebra::diagonal(3));
  CHECK_THROWS_AS(e.apply(HSMatrix::identity(2)), Error);
}
