#include <doctest.h>

#include <random>

#include "qosa/hscore.hpp"
#include "support/oracles.hpp"

using namespace qosa;
using doctest::Approx;

namespace {

HSMatrix pauli_x() { return HSMatrix{{0, 1}, {1, 0}}; }
HSMatrix pauli_y() { return HSMatrix{{0, Complex(0, -1)}, {Complex(0, 1), 0}}; }
HSMatrix pauli_z() { return HSMatrix{{1, 0}, {0, -1}}; }

}  // namespace

TEST_CASE("hs_inner of identities is the dimension") {
  for (int n = 1; n <= 6; ++n) {
    const Complex v = hs_inner(HSMatrix::identity(n), HSMatrix::identity(n));
    CHECK(v.real() == Approx(n));
    CHECK(v.imag() == Approx(0.0));
  }
}

TEST_CASE("Pauli matrices are HS-orthogonal with norm^2 = 2") {
  const HSMatrix ps[] = {HSMatrix::identity(2), pauli_x(), pauli_y(), pauli_z()};
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < 4; ++j) {
      const Complex v = hs_inner(ps[i], ps[j]);
      CHECK(std::abs(v - Complex(i == j ? 2.0 : 0.0)) < 1e-14);
    }
  }
}

TEST_CASE("hs_inner is conjugate-linear in the first slot and Hermitian") {
  std::mt19937_64 rng(7);
  for (int t = 0; t < 20; ++t) {
    const HSMatrix a(oracle::random_matrix(4, rng));
    const HSMatrix b(oracle::random_matrix(4, rng));
    const Complex s(0.3, -1.7);
    CHECK(std::abs(hs_inner(a, b) - std::conj(hs_inner(b, a))) < 1e-12);
    CHECK(std::abs(hs_inner(s * a, b) - std::conj(s) * hs_inner(a, b)) < 1e-11);
    CHECK(std::abs(hs_inner(a, s * b) - s * hs_inner(a, b)) < 1e-11);
    // oracle: Tr(A^* B) directly
    CHECK(std::abs(hs_inner(a, b) - (a.eigen().adjoint() * b.eigen()).trace()) < 1e-11);
  }
}

TEST_CASE("normalized_trace and traceless_part") {
  CHECK(std::abs(normalized_trace(HSMatrix::identity(5)) - Complex(1.0)) < 1e-15);
  CHECK(std::abs(normalized_trace(pauli_z())) < 1e-15);
  const HSMatrix p = HSMatrix::unit(3, 0, 0);
  CHECK(normalized_trace(p).real() == Approx(1.0 / 3.0));
  const HSMatrix t = traceless_part(p);
  CHECK(std::abs(t.trace()) < 1e-15);
  CHECK(std::abs(hs_inner(HSMatrix::identity(3), t)) < 1e-15);
  CHECK(max_abs_diff(traceless_part(HSMatrix::identity(4)), HSMatrix::zero(4)) < 1e-15);
}

TEST_CASE("kron satisfies the mixed-product and trace rules") {
  std::mt19937_64 rng(11);
  const HSMatrix a(oracle::random_matrix(2, rng));
  const HSMatrix b(oracle::random_matrix(3, rng));
  const HSMatrix c(oracle::random_matrix(2, rng));
  const HSMatrix d(oracle::random_matrix(3, rng));
  CHECK(max_abs_diff(kron(a, b) * kron(c, d), kron(a * c, b * d)) < 1e-12);
  CHECK(std::abs(kron(a, b).trace() - a.trace() * b.trace()) < 1e-12);
  CHECK(kron(HSMatrix::identity(2), HSMatrix::identity(3)) == HSMatrix::identity(6));
}

TEST_CASE("vec is column-major and round-trips") {
  const HSMatrix m{{1, 2}, {3, 4}};
  const auto v = m.vec();
  CHECK(v(0) == Complex(1));
  CHECK(v(1) == Complex(3));
  CHECK(v(2) == Complex(2));
  CHECK(HSMatrix::from_vec(v, 2) == m);
  CHECK_THROWS_AS(HSMatrix::from_vec(v, 3), Error);
}

TEST_CASE("hs_orthonormalize drops dependent members") {
  const std::vector<HSMatrix> span{pauli_x(), pauli_z(), pauli_x() + pauli_z(),
                                   2.0 * HSMatrix::identity(2)};
  const auto q = hs_orthonormalize(span, kDefaultTol);
  REQUIRE(q.size() == 3);
  for (std::size_t i = 0; i < q.size(); ++i) {
    for (std::size_t j = 0; j < q.size(); ++j) {
      CHECK(std::abs(hs_inner(q[i], q[j]) - Complex(i == j ? 1.0 : 0.0)) < 1e-14);
    }
  }
  CHECK(hs_orthonormalize({}, kDefaultTol).empty());
}

TEST_CASE("hs_orthonormalize keeps the span of random families") {
  std::mt19937_64 rng(3);
  std::vector<HSMatrix> span;
  for (int k = 0; k < 5; ++k) span.emplace_back(oracle::random_matrix(3, rng));
  span.push_back(span[0] + 2.0 * span[3]);
  const auto q = hs_orthonormalize(span, kDefaultTol);
  CHECK(q.size() == 5);
  std::vector<oracle::Mat> raw;
  for (const auto& s : span) raw.push_back(s.eigen());
  const auto p = oracle::projection(raw);
  for (const auto& b : q) CHECK((p * b.vec() - b.vec()).norm() < 1e-10);
}

TEST_CASE("HSMatrix rejects non-square input and mismatched operations") {
  CHECK_THROWS_AS(HSMatrix(Eigen::MatrixXcd(2, 3)), Error);
  CHECK_THROWS_AS(HSMatrix(Eigen::MatrixXcd(0, 0)), Error);
  try {
    (void)(HSMatrix::identity(2) + HSMatrix::identity(3));
    FAIL("expected a dimension mismatch");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kDimensionMismatch);
  }
  CHECK_THROWS_AS(hs_inner(HSMatrix::identity(2), HSMatrix::identity(3)), Error);
}
