#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <random>

#include "qosa/search.hpp"
#include "support/oracles.hpp"

using namespace qosa;
using oracle::Mat;

namespace {

std::string message_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.what();
  }
  return {};
}

Mat expi(const Mat& h, double t) {
  Eigen::SelfAdjointEigenSolver<Mat> es(h);
  Eigen::VectorXcd phases(h.rows());
  for (Eigen::Index i = 0; i < h.rows(); ++i) phases(i) = std::polar(1.0, t * es.eigenvalues()(i));
  return es.eigenvectors() * phases.asDiagonal() * es.eigenvectors().adjoint();
}

Mat random_hermitian_traceless(int n, std::mt19937_64& rng) {
  const Mat r = oracle::random_matrix(n, rng);
  Mat h = (r + r.adjoint()) / 2.0;
  h -= (h.trace() / double(n)) * Mat::Identity(n, n);
  return h;
}

SearchProblem masa_problem(int n, int count) {
  SearchProblem p;
  p.n = n;
  for (int i = 0; i < count; ++i) p.prototypes.push_back(SubAlgebra::diagonal(n));
  p.frozen = {0};
  return p;
}

std::filesystem::path data(const char* name) { return std::filesystem::path(QOSA_TEST_DATA_DIR) / name; }

}  // namespace

TEST_CASE("defect examples") {
  const std::vector<SubAlgebra> one{SubAlgebra::diagonal(3)};
  CHECK(defect(one) == 0.0);
  const auto fp = factor_pair(2, 2);
  const std::vector<SubAlgebra> pair{fp.entries()[0].algebra, fp.entries()[1].algebra};
  CHECK(std::abs(defect(pair)) < 1e-12);
  const std::vector<SubAlgebra> same{SubAlgebra::diagonal(2), SubAlgebra::diagonal(2)};
  CHECK(defect(same) == doctest::Approx(1.0));
  const std::vector<SubAlgebra> mixed{SubAlgebra::diagonal(2), SubAlgebra::diagonal(3)};
  CHECK_THROWS_AS(defect(mixed), Error);
}

TEST_CASE("analytic gradient matches central finite differences") {
  std::mt19937_64 rng(89);
  for (int trial = 0; trial < 6; ++trial) {
    SearchProblem p;
    p.n = trial < 3 ? 3 : 4;
    p.prototypes = {SubAlgebra::diagonal(p.n), SubAlgebra::diagonal(p.n), factor_left(p.n == 4 ? 2 : 1, p.n)};
    p.frozen = {0};
    std::vector<HSMatrix> us;
    for (int i = 0; i < 3; ++i) us.push_back(random_unitary(p.n, rng));
    const auto g = defect_gradient(p, us);
    REQUIRE(g.size() == 3);
    CHECK(g[0].norm() == 0.0);
    for (std::size_t i = 1; i < 3; ++i) {
      CHECK((g[i].eigen() - g[i].eigen().adjoint()).norm() < 1e-12);
      CHECK(std::abs(g[i].trace()) < 1e-12);
      const Mat h = random_hermitian_traceless(p.n, rng);
      const double step = 1e-6;
      auto at = [&](double t) {
        auto moved = us;
        moved[i] = HSMatrix((expi(h, t) * us[i].eigen()).eval());
        return defect_at(p, moved);
      };
      const double fd = (at(step) - at(-step)) / (2 * step);
      const double analytic = (g[i].eigen() * h).trace().real();
      CAPTURE(trial);
      CHECK(fd == doctest::Approx(analytic).epsilon(1e-5).scale(1.0));
    }
  }
}

TEST_CASE("defect is invariant under a common conjugation") {
  std::mt19937_64 rng(97);
  auto p = masa_problem(3, 3);
  p.prototypes.push_back(factor_left(1, 3));
  std::vector<HSMatrix> us;
  for (int i = 0; i < 4; ++i) us.push_back(random_unitary(3, rng));
  const double d0 = defect_at(p, us);
  const HSMatrix w = random_unitary(3, rng);
  std::vector<HSMatrix> moved;
  for (const auto& u : us) moved.push_back(w * u);
  CHECK(defect_at(p, moved) == doctest::Approx(d0).epsilon(1e-12));
}

TEST_CASE("optimize: two MASAs in M_2 become unbiased") {
  auto p = masa_problem(2, 2);
  p.restarts = 1;
  p.max_iters = 200;
  const auto r = optimize(p);
  CHECK(r.converged);
  CHECK(r.best_defect < 1e-8);
  CHECK(r.best_defect >= -kDefaultTol);
  CHECK(r.iterations <= 200);
  CHECK(r.seed == kDefaultSeed);
  CHECK(r.unitaries[0] == HSMatrix::identity(2));
  for (const auto& u : r.unitaries) CHECK(is_unitary(u, 1e-9));
  CHECK(r.per_pair_c(0, 0) == doctest::Approx(2.0));
  CHECK(r.per_pair_c(0, 1) == doctest::Approx(1.0).epsilon(1e-8));
}

TEST_CASE("optimize: accepted steps never increase the defect") {
  auto p = masa_problem(3, 3);
  p.restarts = 3;
  p.max_iters = 100;
  const auto r = optimize(p);
  REQUIRE(r.restarts.size() == 3);
  for (const auto& t : r.restarts) {
    REQUIRE_FALSE(t.history.empty());
    for (std::size_t k = 1; k < t.history.size(); ++k) CHECK(t.history[k] <= t.history[k - 1]);
    CHECK(t.final_defect == t.history.back());
  }
  double best = r.restarts.front().final_defect;
  for (const auto& t : r.restarts) best = std::min(best, t.final_defect);
  CHECK(r.best_defect == best);
}

TEST_CASE("optimize is bit-reproducible across thread counts and sensitive to the seed") {
  auto p = masa_problem(3, 3);
  p.restarts = 4;
  p.max_iters = 60;
  p.threads = 1;
  const auto a = optimize(p);
  p.threads = 4;
  const auto b = optimize(p);
  CHECK(a.best_defect == b.best_defect);
  CHECK(a.best_restart == b.best_restart);
  REQUIRE(a.unitaries.size() == b.unitaries.size());
  for (std::size_t i = 0; i < a.unitaries.size(); ++i) CHECK(a.unitaries[i] == b.unitaries[i]);
  p.seed = 12345;
  const auto c = optimize(p);
  CHECK_FALSE(c.unitaries[1] == a.unitaries[1]);
}

TEST_CASE("optimize: four MASAs in M_3 reach a complete set of unbiased bases") {
  const auto p = load_problem(data("four_masa_dim3.problem.json"));
  const auto r = optimize(p);
  CHECK(r.best_defect < 1e-6);
  const auto sys = result_system(p, r);
  for (std::size_t i = 0; i < sys.size(); ++i) {
    for (std::size_t j = i + 1; j < sys.size(); ++j) {
      CHECK(c_value(sys.entries()[i].algebra, sys.entries()[j].algebra) ==
            doctest::Approx(1.0).epsilon(1e-6));
    }
  }
}

TEST_CASE("Abelian(n+1) against M_n in M_2n keeps a defect margin for n = 3, 4, 5") {
  // Soft evidence only: the defect minimum stays away from zero.
  for (int n = 3; n <= 5; ++n) {
    // n rank-one projections and one of rank n
    std::vector<Mat> span{Mat::Identity(2 * n, 2 * n)};
    for (int i = 0; i < n; ++i) {
      Mat e = Mat::Zero(2 * n, 2 * n);
      e(i, i) = 1.0;
      span.push_back(e);
    }
    SearchProblem p;
    p.n = 2 * n;
    p.prototypes = {factor_left(n, 2 * n), oracle::algebra(span)};
    REQUIRE(p.prototypes[1].dim() == n + 1);
    p.frozen = {0};
    p.restarts = 4;
    p.max_iters = 300;
    p.tol_defect = 1e-8;
    const auto r = optimize(p);
    CAPTURE(n);
    MESSAGE("n = " << n << ": best defect " << r.best_defect);
    CHECK_FALSE(r.converged);
    CHECK(r.best_defect > 1e-3);
  }
}

TEST_CASE("save_result writes the system and a sidecar report") {
  auto p = masa_problem(2, 2);
  p.restarts = 1;
  const auto r = optimize(p);
  const auto path = std::filesystem::temp_directory_path() / "qosa_unit_search.qosa.json";
  save_result(p, r, path);
  const auto back = load(path);
  CHECK(back.size() == 2);
  CHECK(back.metadata().at("seed") == std::to_string(kDefaultSeed));
  auto side = path;
  side += ".report.json";
  REQUIRE(std::filesystem::exists(side));
  std::ifstream in(side);
  const auto j = nlohmann::json::parse(in);
  CHECK(j["disclaimer"] == kSearchDisclaimer);
  CHECK(j["per_pair_c"].size() == 2);
  CHECK(j["restart_summary"].size() == 1);
  std::filesystem::remove(path);
  std::filesystem::remove(side);
  CHECK(report_text(p, r).find(kSearchDisclaimer) != std::string::npos);
}

TEST_CASE("problem files: parsing and schema errors") {
  const auto p = problem_from_json(
      R"({"n": 4, "prototypes": [{"kind": "factor", "d": 2, "count": 3}, {"kind": "masa", "name": "m"}],
          "frozen": [0], "seed": 7, "restarts": 2, "max_iters": 10, "tol_defect": 1e-6})");
  CHECK(p.prototypes.size() == 4);
  CHECK(p.name(0) == "factor0");
  CHECK(p.name(3) == "m");
  CHECK(p.seed == 7);
  CHECK(p.restarts == 2);
  CHECK(p.tol_defect == 1e-6);

  auto msg = [](const char* text) { return message_of([&] { (void)problem_from_json(text); }); };
  CHECK(msg(R"({"n": 0})").find("$.n") == 0);
  CHECK(msg(R"({"n": 2, "prototypes": []})").find("$.prototypes") == 0);
  CHECK(msg(R"({"n": 2, "prototypes": [{"kind": "blob"}]})").find("$.prototypes[0].kind") == 0);
  CHECK(msg(R"({"n": 3, "prototypes": [{"kind": "factor", "d": 2}]})").find("$.prototypes[0].d") == 0);
  CHECK(msg(R"({"n": 2, "prototypes": [{"kind": "masa"}], "frozen": [3]})").find("$.frozen[0]") == 0);
  CHECK(msg(R"({"n": 2, "prototypes": [{"kind": "masa"}], "restarts": 0})").find("$.restarts") == 0);
  CHECK_THROWS_AS(load_problem("/nonexistent/problem.json"), Error);
}

TEST_CASE("SearchProblem::validate") {
  SearchProblem p;
  p.n = 2;
  CHECK_THROWS_AS(p.validate(), Error);
  p.prototypes = {SubAlgebra::diagonal(3)};
  CHECK_THROWS_AS(p.validate(), Error);
  p.prototypes = {SubAlgebra::diagonal(2)};
  p.frozen = {1};
  CHECK_THROWS_AS(p.validate(), Error);
}
