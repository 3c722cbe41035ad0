#include "qosa/search.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>
#include <random>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "json_io.hpp"

namespace qosa {

using nlohmann::json;

void SearchProblem::validate() const {
  if (n < 1) raise(ErrorCode::kInvalidArgument, "search problem: n must be >= 1");
  if (prototypes.empty()) raise(ErrorCode::kInvalidArgument, "search problem: no prototypes");
  for (std::size_t i = 0; i < prototypes.size(); ++i) {
    if (prototypes[i].ambient_dim() != n) {
      raise(ErrorCode::kDimensionMismatch, "search problem: prototype " + std::to_string(i) +
                                               " lives in M_" +
                                               std::to_string(prototypes[i].ambient_dim()) +
                                               ", expected M_" + std::to_string(n));
    }
  }
  if (!names.empty() && names.size() != prototypes.size()) {
    raise(ErrorCode::kInvalidArgument, "search problem: names do not match prototypes");
  }
  for (auto f : frozen) {
    if (f >= prototypes.size()) {
      raise(ErrorCode::kInvalidArgument,
            "search problem: frozen index " + std::to_string(f) + " out of range");
    }
  }
  if (restarts < 1) raise(ErrorCode::kInvalidArgument, "search problem: restarts must be >= 1");
  if (max_iters < 0) raise(ErrorCode::kInvalidArgument, "search problem: max_iters must be >= 0");
  if (!(tol_defect >= 0.0)) raise(ErrorCode::kInvalidArgument, "search problem: tol_defect < 0");
}

std::string SearchProblem::name(std::size_t i) const {
  return names.empty() ? "A" + std::to_string(i) : names[i];
}

double defect(std::span<const SubAlgebra> system) {
  double total = 0.0;
  for (std::size_t i = 0; i < system.size(); ++i) {
    for (std::size_t j = i + 1; j < system.size(); ++j) {
      if (system[i].ambient_dim() != system[j].ambient_dim()) {
        raise(ErrorCode::kDimensionMismatch, "defect: algebras in different ambient dimensions");
      }
      total += c_value(system[i], system[j]) - 1.0;
    }
  }
  return total;
}

namespace {

// Working state: the conjugated bases as columns vec(U a_k U^*).
struct Evaluator {
  const SearchProblem& problem;
  std::vector<bool> is_frozen;

  explicit Evaluator(const SearchProblem& p) : problem(p), is_frozen(p.prototypes.size(), false) {
    for (auto f : p.frozen) is_frozen[f] = true;
  }

  std::vector<Eigen::MatrixXcd> conjugated(std::span<const HSMatrix> us) const {
    const int n = problem.n;
    std::vector<Eigen::MatrixXcd> qs;
    qs.reserve(us.size());
    for (std::size_t i = 0; i < us.size(); ++i) {
      const auto& basis = problem.prototypes[i].basis();
      const Eigen::MatrixXcd& u = us[i].eigen();
      Eigen::MatrixXcd q(static_cast<Eigen::Index>(n) * n, static_cast<Eigen::Index>(basis.size()));
      for (std::size_t k = 0; k < basis.size(); ++k) {
        const Eigen::MatrixXcd b = u * basis[k].eigen() * u.adjoint();
        q.col(static_cast<Eigen::Index>(k)) = Eigen::Map<const Eigen::VectorXcd>(b.data(), b.size());
      }
      qs.push_back(std::move(q));
    }
    return qs;
  }

  static double value(const std::vector<Eigen::MatrixXcd>& qs) {
    double total = 0.0;
    for (std::size_t i = 0; i < qs.size(); ++i) {
      for (std::size_t j = i + 1; j < qs.size(); ++j) {
        total += (qs[i].adjoint() * qs[j]).squaredNorm() - 1.0;
      }
    }
    return total;
  }

  double value(std::span<const HSMatrix> us) const { return value(conjugated(us)); }

  // d/dt |E_j(b)|^2 along b -> b + i t [H, b] is 2 Re <E_j(b), i[H, b]>
  // = 2 Re i Tr(H [b, E_j(b)^*]); summing over the basis b of algebra i and
  // all j != i gives Re Tr(H M) with M = 2i sum [b, E_j(b)^*], whose
  // Hermitian part is the gradient.
  std::vector<HSMatrix> gradient(std::span<const HSMatrix> us) const {
    const int n = problem.n;
    const auto qs = conjugated(us);
    std::vector<HSMatrix> grads;
    grads.reserve(qs.size());
    for (std::size_t i = 0; i < qs.size(); ++i) {
      if (is_frozen[i]) {
        grads.push_back(HSMatrix::zero(n));
        continue;
      }
      Eigen::MatrixXcd proj = Eigen::MatrixXcd::Zero(qs[i].rows(), qs[i].cols());
      for (std::size_t j = 0; j < qs.size(); ++j) {
        if (j == i) continue;
        proj += qs[j] * (qs[j].adjoint() * qs[i]);
      }
      Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(n, n);
      for (Eigen::Index k = 0; k < qs[i].cols(); ++k) {
        const Eigen::Map<const Eigen::MatrixXcd> b(qs[i].col(k).data(), n, n);
        const Eigen::Map<const Eigen::MatrixXcd> y(proj.col(k).data(), n, n);
        m += b * y.adjoint() - y.adjoint() * b;
      }
      m *= Complex(0.0, 2.0);
      Eigen::MatrixXcd g = 0.5 * (m + m.adjoint());
      g -= (g.trace() / static_cast<double>(n)) * Eigen::MatrixXcd::Identity(n, n);
      grads.push_back(HSMatrix(std::move(g)));
    }
    return grads;
  }
};

Eigen::MatrixXcd polar(const Eigen::MatrixXcd& a) {
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(a, Eigen::ComputeFullU | Eigen::ComputeFullV);
  return svd.matrixU() * svd.matrixV().adjoint();
}

// U <- polar((I - i eta G) U)
std::vector<HSMatrix> retract(std::span<const HSMatrix> us, std::span<const HSMatrix> grads,
                              double eta) {
  std::vector<HSMatrix> out;
  out.reserve(us.size());
  for (std::size_t i = 0; i < us.size(); ++i) {
    const int n = us[i].dim();
    const Eigen::MatrixXcd step =
        Eigen::MatrixXcd::Identity(n, n) - Complex(0.0, eta) * grads[i].eigen();
    out.emplace_back(polar((step * us[i].eigen()).eval()));
  }
  return out;
}

std::mt19937_64 restart_stream(std::uint64_t seed, int restart) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(restart), 0x5eedu};
  return std::mt19937_64(seq);
}

struct RestartOutcome {
  RestartTrace trace;
  std::vector<HSMatrix> unitaries;
};

RestartOutcome run_restart(const Evaluator& ev, int index) {
  const auto& p = ev.problem;
  auto rng = restart_stream(p.seed, index);
  std::vector<HSMatrix> us;
  for (std::size_t i = 0; i < p.prototypes.size(); ++i) {
    // Draw for every slot so frozen sets do not shift the other streams.
    HSMatrix u = random_unitary(p.n, rng);
    us.push_back(ev.is_frozen[i] ? HSMatrix::identity(p.n) : std::move(u));
  }

  RestartOutcome out;
  out.trace.index = index;
  double f = ev.value(us);
  out.trace.history.push_back(f);

  constexpr double kArmijo = 1e-4;
  constexpr double kMaxStep = 4.0;
  double eta = 0.1;
  int it = 0;
  while (it < p.max_iters && f > p.tol_defect) {
    const auto g = ev.gradient(us);
    double gg = 0.0;
    for (const auto& gi : g) gg += gi.eigen().squaredNorm();
    if (gg < 1e-30) break;

    bool accepted = false;
    for (int bt = 0; bt < 40; ++bt) {
      auto trial = retract(us, g, eta);
      const double ft = ev.value(trial);
      if (ft <= f - kArmijo * eta * gg) {
        us = std::move(trial);
        f = ft;
        accepted = true;
        break;
      }
      eta *= 0.5;
    }
    if (!accepted) break;
    ++it;
    out.trace.history.push_back(f);
    eta = std::min(2.0 * eta, kMaxStep);
  }
  out.trace.iterations = it;
  out.trace.final_defect = f;
  out.unitaries = std::move(us);
  return out;
}

std::string fmt12(double v) {
  std::ostringstream os;
  os << std::setprecision(12) << v;
  return os.str();
}

}  // namespace

double defect_at(const SearchProblem& problem, std::span<const HSMatrix> unitaries) {
  problem.validate();
  if (unitaries.size() != problem.prototypes.size()) {
    raise(ErrorCode::kDimensionMismatch, "defect_at: one unitary per prototype expected");
  }
  return Evaluator(problem).value(unitaries);
}

std::vector<HSMatrix> defect_gradient(const SearchProblem& problem,
                                      std::span<const HSMatrix> unitaries) {
  problem.validate();
  if (unitaries.size() != problem.prototypes.size()) {
    raise(ErrorCode::kDimensionMismatch, "defect_gradient: one unitary per prototype expected");
  }
  return Evaluator(problem).gradient(unitaries);
}

SearchResult optimize(const SearchProblem& problem) {
  problem.validate();
  const Evaluator ev(problem);
  std::vector<RestartOutcome> outcomes(static_cast<std::size_t>(problem.restarts));

  int workers = problem.threads > 0 ? problem.threads
                                    : static_cast<int>(std::thread::hardware_concurrency());
  workers = std::clamp(workers, 1, problem.restarts);
  if (workers == 1) {
    for (int r = 0; r < problem.restarts; ++r) outcomes[static_cast<std::size_t>(r)] = run_restart(ev, r);
  } else {
    std::vector<std::thread> pool;
    std::vector<std::exception_ptr> errors(static_cast<std::size_t>(workers));
    for (int w = 0; w < workers; ++w) {
      pool.emplace_back([&, w] {
        try {
          for (int r = w; r < problem.restarts; r += workers) {
            outcomes[static_cast<std::size_t>(r)] = run_restart(ev, r);
          }
        } catch (...) {
          errors[static_cast<std::size_t>(w)] = std::current_exception();
        }
      });
    }
    for (auto& t : pool) t.join();
    for (auto& e : errors) {
      if (e) std::rethrow_exception(e);
    }
  }

  SearchResult res;
  res.seed = problem.seed;
  std::size_t best = 0;
  for (std::size_t r = 1; r < outcomes.size(); ++r) {
    if (outcomes[r].trace.final_defect < outcomes[best].trace.final_defect) best = r;
  }
  res.best_restart = static_cast<int>(best);
  res.best_defect = outcomes[best].trace.final_defect;
  res.iterations = outcomes[best].trace.iterations;
  res.unitaries = outcomes[best].unitaries;
  res.converged = res.best_defect <= problem.tol_defect;

  const auto qs = ev.conjugated(res.unitaries);
  const auto k = static_cast<Eigen::Index>(qs.size());
  res.per_pair_c = Eigen::MatrixXd::Zero(k, k);
  for (Eigen::Index i = 0; i < k; ++i) {
    for (Eigen::Index j = 0; j < k; ++j) {
      res.per_pair_c(i, j) =
          (qs[static_cast<std::size_t>(i)].adjoint() * qs[static_cast<std::size_t>(j)]).squaredNorm();
    }
  }
  for (auto& o : outcomes) res.restarts.push_back(std::move(o.trace));
  return res;
}

SystemSpec result_system(const SearchProblem& problem, const SearchResult& result) {
  SystemSpec spec(problem.n);
  for (std::size_t i = 0; i < problem.prototypes.size(); ++i) {
    spec.add(problem.name(i), conjugate(problem.prototypes[i], result.unitaries[i], 1e-8));
  }
  spec.metadata()["construction"] = "search";
  spec.metadata()["seed"] = std::to_string(result.seed);
  spec.metadata()["best_defect"] = fmt12(result.best_defect);
  spec.metadata()["best_restart"] = std::to_string(result.best_restart);
  spec.metadata()["note"] = kSearchDisclaimer;
  return spec;
}

namespace {

json history_summary(const std::vector<double>& h) {
  constexpr std::size_t kSamples = 16;
  json out = json::array();
  if (h.empty()) return out;
  if (h.size() <= kSamples) {
    for (std::size_t i = 0; i < h.size(); ++i) out.push_back({{"iter", i}, {"defect", h[i]}});
    return out;
  }
  for (std::size_t s = 0; s < kSamples; ++s) {
    const std::size_t i = s * (h.size() - 1) / (kSamples - 1);
    out.push_back({{"iter", i}, {"defect", h[i]}});
  }
  return out;
}

}  // namespace

std::string report_json(const SearchProblem& problem, const SearchResult& result) {
  json j;
  j["n"] = problem.n;
  j["seed"] = result.seed;
  j["restarts"] = problem.restarts;
  j["max_iters"] = problem.max_iters;
  j["tol_defect"] = problem.tol_defect;
  j["best_defect"] = result.best_defect;
  j["best_restart"] = result.best_restart;
  j["iterations"] = result.iterations;
  j["converged"] = result.converged;
  j["disclaimer"] = kSearchDisclaimer;
  j["names"] = json::array();
  for (std::size_t i = 0; i < problem.prototypes.size(); ++i) j["names"].push_back(problem.name(i));
  j["frozen"] = problem.frozen;
  j["per_pair_c"] = json::array();
  for (Eigen::Index r = 0; r < result.per_pair_c.rows(); ++r) {
    json row = json::array();
    for (Eigen::Index c = 0; c < result.per_pair_c.cols(); ++c) row.push_back(result.per_pair_c(r, c));
    j["per_pair_c"].push_back(row);
  }
  j["restart_summary"] = json::array();
  for (const auto& t : result.restarts) {
    j["restart_summary"].push_back({{"index", t.index},
                                    {"initial_defect", t.history.front()},
                                    {"final_defect", t.final_defect},
                                    {"iterations", t.iterations},
                                    {"history", history_summary(t.history)}});
  }
  return j.dump(2);
}

std::string report_text(const SearchProblem& problem, const SearchResult& result) {
  std::ostringstream os;
  os << "search: n = " << problem.n << ", " << problem.prototypes.size() << " algebras, seed "
     << result.seed << ", " << problem.restarts << " restarts\n";
  os << "best defect " << fmt12(result.best_defect) << " (restart " << result.best_restart << ", "
     << result.iterations << " iterations)";
  os << (result.converged ? ", within tol_defect " : ", above tol_defect ")
     << fmt12(problem.tol_defect) << "\n";
  if (!result.converged) {
    os << "margin: best defect exceeds tol_defect by " << fmt12(result.best_defect - problem.tol_defect)
       << "\n";
  }
  os << "pairwise c:\n";
  const auto k = result.per_pair_c.rows();
  for (Eigen::Index i = 0; i < k; ++i) {
    for (Eigen::Index jj = i + 1; jj < k; ++jj) {
      os << "  c(" << problem.name(static_cast<std::size_t>(i)) << ", "
         << problem.name(static_cast<std::size_t>(jj)) << ") = " << fmt12(result.per_pair_c(i, jj))
         << "\n";
    }
  }
  os << "note: " << kSearchDisclaimer << "\n";
  return os.str();
}

void save_result(const SearchProblem& problem, const SearchResult& result,
                 const std::filesystem::path& path) {
  save(result_system(problem, result), path);
  std::filesystem::path side = path;
  side += ".report.json";
  std::ofstream out(side, std::ios::binary | std::ios::trunc);
  if (!out) raise(ErrorCode::kIo, "cannot write '" + side.string() + "'");
  out << report_json(problem, result) << '\n';
  if (!out) raise(ErrorCode::kIo, "write to '" + side.string() + "' failed");
}

SearchProblem problem_from_json(std::string_view text, double tol) {
  using detail::schema_error;
  const json doc = detail::parse_json(text);
  if (!doc.is_object()) schema_error("$", "expected an object");
  if (!doc.contains("n") || !doc["n"].is_number_integer() || doc["n"].get<long>() < 1) {
    schema_error("$.n", "expected a positive integer");
  }
  SearchProblem p;
  p.n = doc["n"].get<int>();
  if (!doc.contains("prototypes") || !doc["prototypes"].is_array() || doc["prototypes"].empty()) {
    schema_error("$.prototypes", "expected a non-empty array");
  }
  const auto& protos = doc["prototypes"];
  for (std::size_t i = 0; i < protos.size(); ++i) {
    const std::string where = "$.prototypes[" + std::to_string(i) + "]";
    const auto& e = protos[i];
    if (!e.is_object() || !e.contains("kind") || !e["kind"].is_string()) {
      schema_error(where + ".kind", "expected \"masa\", \"factor\" or \"algebra\"");
    }
    const std::string kind = e["kind"].get<std::string>();
    int count = 1;
    if (e.contains("count")) {
      if (!e["count"].is_number_integer() || e["count"].get<long>() < 1) {
        schema_error(where + ".count", "expected a positive integer");
      }
      count = e["count"].get<int>();
    }
    std::string base = kind;
    if (e.contains("name")) {
      if (!e["name"].is_string()) schema_error(where + ".name", "expected a string");
      base = e["name"].get<std::string>();
    }
    std::optional<SubAlgebra> alg;
    if (kind == "masa") {
      alg = SubAlgebra::diagonal(p.n);
    } else if (kind == "factor") {
      if (!e.contains("d") || !e["d"].is_number_integer()) {
        schema_error(where + ".d", "expected an integer");
      }
      const int d = e["d"].get<int>();
      if (d < 1 || p.n % d != 0) schema_error(where + ".d", "must divide n");
      alg = factor_left(d, p.n);
    } else if (kind == "algebra") {
      if (!e.contains("basis") || !e["basis"].is_array() || e["basis"].empty()) {
        schema_error(where + ".basis", "expected a non-empty array of matrices");
      }
      std::vector<HSMatrix> basis;
      for (std::size_t k = 0; k < e["basis"].size(); ++k) {
        basis.push_back(
            detail::parse_matrix(e["basis"][k], p.n, where + ".basis[" + std::to_string(k) + "]"));
      }
      alg = SubAlgebra::from_basis(p.n, std::move(basis), tol);
    } else {
      schema_error(where + ".kind", "unknown kind '" + kind + "'");
    }
    for (int c = 0; c < count; ++c) {
      p.prototypes.push_back(*alg);
      p.names.push_back(count == 1 ? base : base + std::to_string(c));
    }
  }
  for (std::size_t i = 0; i < p.names.size(); ++i) {
    for (std::size_t j = i + 1; j < p.names.size(); ++j) {
      if (p.names[i] == p.names[j]) p.names[j] += "_" + std::to_string(j);
    }
  }
  if (doc.contains("frozen")) {
    if (!doc["frozen"].is_array()) schema_error("$.frozen", "expected an array of indices");
    for (std::size_t i = 0; i < doc["frozen"].size(); ++i) {
      const auto& f = doc["frozen"][i];
      if (!f.is_number_integer() || f.get<long>() < 0 ||
          f.get<std::size_t>() >= p.prototypes.size()) {
        schema_error("$.frozen[" + std::to_string(i) + "]", "expected a prototype index");
      }
      p.frozen.push_back(f.get<std::size_t>());
    }
  }
  auto read_int = [&](const char* key, auto& field, long lo) {
    if (!doc.contains(key)) return;
    if (!doc[key].is_number_integer() || doc[key].get<long>() < lo) {
      schema_error(std::string("$.") + key, "expected an integer >= " + std::to_string(lo));
    }
    field = doc[key].get<std::remove_reference_t<decltype(field)>>();
  };
  read_int("seed", p.seed, 0);
  read_int("restarts", p.restarts, 1);
  read_int("max_iters", p.max_iters, 0);
  if (doc.contains("tol_defect")) {
    if (!doc["tol_defect"].is_number() || doc["tol_defect"].get<double>() < 0.0) {
      schema_error("$.tol_defect", "expected a non-negative number");
    }
    p.tol_defect = doc["tol_defect"].get<double>();
  }
  p.validate();
  return p;
}

SearchProblem load_problem(const std::filesystem::path& path, double tol) {
  return problem_from_json(detail::read_file(path), tol);
}

}  // namespace qosa
