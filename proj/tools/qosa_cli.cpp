// qosa: command-line front end over the C API.
//
// Exit codes: 0 success, 1 computation succeeded but the property failed,
// 2 usage, input or library error.

#include <cerrno>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "qosa/qosa.h"

namespace {

using nlohmann::json;

constexpr int kExitOk = 0;
constexpr int kExitProperty = 1;
constexpr int kExitError = 2;
constexpr std::uint64_t kDefaultSearchSeed = 20110316;

struct Failure {
  std::string message;
};

void check(qosa_status s, const std::string& context) {
  if (s != QOSA_OK) {
    throw Failure{context + ": " + qosa_status_string(s) + ": " + qosa_last_error()};
  }
}

struct SystemDeleter {
  void operator()(qosa_system* p) const { qosa_system_free(p); }
};
struct CertificateDeleter {
  void operator()(qosa_certificate* p) const { qosa_certificate_free(p); }
};
struct ProblemDeleter {
  void operator()(qosa_search_problem* p) const { qosa_search_problem_free(p); }
};
struct ResultDeleter {
  void operator()(qosa_search_result* p) const { qosa_search_result_free(p); }
};
using SystemPtr = std::unique_ptr<qosa_system, SystemDeleter>;
using CertificatePtr = std::unique_ptr<qosa_certificate, CertificateDeleter>;
using ProblemPtr = std::unique_ptr<qosa_search_problem, ProblemDeleter>;
using ResultPtr = std::unique_ptr<qosa_search_result, ResultDeleter>;

std::string g12(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

std::string rational(std::int64_t num, std::int64_t den) {
  return den == 1 ? std::to_string(num) : std::to_string(num) + "/" + std::to_string(den);
}

void write_json(const std::string& path, const json& j) {
  if (path.empty()) return;
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Failure{"cannot write report '" + path + "'"};
  out << j.dump(2) << '\n';
  if (!out) throw Failure{"write to '" + path + "' failed"};
}

SystemPtr load_system(const std::string& path, double tol) {
  qosa_system* raw = nullptr;
  check(qosa_system_load(path.c_str(), tol, &raw), "loading '" + path + "'");
  return SystemPtr(raw);
}

std::size_t find(const qosa_system* sys, const std::string& name) {
  std::size_t idx = 0;
  check(qosa_system_find(sys, name.c_str(), &idx), "looking up '" + name + "'");
  return idx;
}

struct Member {
  std::string name;
  int dim;
};

std::vector<Member> members(const qosa_system* sys) {
  std::size_t k = 0;
  check(qosa_system_size(sys, &k), "system size");
  std::vector<Member> out;
  for (std::size_t i = 0; i < k; ++i) {
    const char* name = nullptr;
    int dim = 0;
    check(qosa_system_name(sys, i, &name), "system name");
    check(qosa_system_algebra_dim(sys, i, &dim), "algebra dimension");
    out.push_back({name, dim});
  }
  return out;
}

int ambient(const qosa_system* sys) {
  int n = 0;
  check(qosa_system_ambient_dim(sys, &n), "ambient dimension");
  return n;
}

std::string structure_text(const json& blocks) {
  std::string s;
  for (const auto& b : blocks) {
    if (!s.empty()) s += " + ";
    s += "M_" + std::to_string(b[0].get<int>()) + " (x) 1_" + std::to_string(b[1].get<int>());
  }
  return s;
}

json structure_json(const qosa_system* sys, std::size_t idx, double tol) {
  std::size_t count = 0;
  check(qosa_system_structure(sys, idx, tol, nullptr, 0, &count), "structure");
  std::vector<int> blocks(2 * count);
  check(qosa_system_structure(sys, idx, tol, blocks.data(), count, &count), "structure");
  json out = json::array();
  for (std::size_t k = 0; k < count; ++k) out.push_back({blocks[2 * k], blocks[2 * k + 1]});
  return out;
}

// ---- commands ----

int cmd_check(const std::string& file, double tol, const std::string& json_path) {
  auto sys = load_system(file, tol);
  const auto ms = members(sys.get());
  const int n = ambient(sys.get());
  std::cout << "system '" << file << "': M_" << n << ", " << ms.size() << " algebras, tol "
            << g12(tol) << "\n";
  for (const auto& m : ms) std::cout << "  " << m.name << "  dim " << m.dim << "\n";

  json report{{"command", "check"}, {"file", file}, {"n", n}, {"tol", tol}};
  report["algebras"] = json::array();
  for (const auto& m : ms) report["algebras"].push_back({{"name", m.name}, {"dim", m.dim}});

  std::vector<std::vector<double>> cm(ms.size(), std::vector<double>(ms.size(), 0.0));
  report["pairs"] = json::array();
  bool all_qo = true;
  for (std::size_t i = 0; i < ms.size(); ++i) {
    for (std::size_t j = i; j < ms.size(); ++j) {
      double c = 0.0;
      double defect = 0.0;
      int qo = 0;
      if (i == j) {
        check(qosa_system_c_value(sys.get(), i, j, &c), "c-value");
      } else {
        check(qosa_system_quasi_orthogonal(sys.get(), i, j, tol, &c, &defect, &qo),
              "quasi-orthogonality");
        all_qo = all_qo && qo;
        report["pairs"].push_back({{"a", ms[i].name},
                                   {"b", ms[j].name},
                                   {"c", c},
                                   {"trace_defect", defect},
                                   {"quasi_orthogonal", qo != 0}});
      }
      cm[i][j] = cm[j][i] = c;
    }
  }
  report["c_matrix"] = cm;

  std::cout << "pairwise c:\n";
  for (const auto& p : report["pairs"]) {
    std::cout << "  c(" << p["a"].get<std::string>() << ", " << p["b"].get<std::string>()
              << ") = " << g12(p["c"].get<double>()) << "  trace defect "
              << g12(p["trace_defect"].get<double>()) << "  "
              << (p["quasi_orthogonal"].get<bool>() ? "quasi-orthogonal" : "NOT quasi-orthogonal")
              << "\n";
  }
  long sum = 0;
  int decomposition = 0;
  check(qosa_system_dimension_count(sys.get(), &sum, &decomposition), "dimension count");
  const long cap = static_cast<long>(n) * n - 1;
  std::cout << "sum of (dim - 1) = " << sum << ", n^2 - 1 = " << cap << ": "
            << (decomposition ? "spans M_n (decomposition)" : "not a decomposition") << "\n";
  std::cout << (all_qo ? "all pairs quasi-orthogonal" : "some pairs are not quasi-orthogonal")
            << "\n";
  report["all_quasi_orthogonal"] = all_qo;
  report["traceless_sum"] = sum;
  report["decomposition"] = decomposition != 0;
  write_json(json_path, report);
  return all_qo ? kExitOk : kExitProperty;
}

int cmd_c(const std::string& file, const std::string& a, const std::string& b, double tol,
          const std::string& json_path) {
  auto sys = load_system(file, tol);
  const auto ia = find(sys.get(), a);
  const auto ib = find(sys.get(), b);
  double c = 0.0;
  check(qosa_system_c_value(sys.get(), ia, ib, &c), "c-value");
  std::cout << "c(" << a << ", " << b << ") = " << g12(c) << "\n";
  write_json(json_path, {{"command", "c"}, {"file", file}, {"a", a}, {"b", b}, {"c", c}});
  return kExitOk;
}

int cmd_commutant(const std::string& file, const std::string& name, const std::string& out,
                  std::string new_name, double tol, const std::string& json_path) {
  auto sys = load_system(file, tol);
  const auto idx = find(sys.get(), name);
  if (new_name.empty()) new_name = name + "'";
  qosa_system* raw = nullptr;
  check(qosa_system_commutant(sys.get(), idx, tol, new_name.c_str(), &raw), "commutant");
  SystemPtr comm(raw);
  int dim = 0;
  check(qosa_system_algebra_dim(comm.get(), 0, &dim), "algebra dimension");
  const json src_blocks = structure_json(sys.get(), idx, tol);
  const json blocks = structure_json(comm.get(), 0, tol);
  std::cout << name << ": " << structure_text(src_blocks) << "\n";
  std::cout << new_name << " (commutant): dim " << dim << ", " << structure_text(blocks) << "\n";
  if (!out.empty()) {
    check(qosa_system_save(comm.get(), out.c_str()), "writing '" + out + "'");
    std::cout << "wrote " << out << "\n";
  }
  write_json(json_path, {{"command", "commutant"},
                         {"file", file},
                         {"name", name},
                         {"commutant_name", new_name},
                         {"dim", dim},
                         {"structure", blocks},
                         {"out", out}});
  return kExitOk;
}

int finish_construct(SystemPtr sys, const std::string& kind, const std::string& out,
                     const std::string& json_path) {
  const auto ms = members(sys.get());
  const int n = ambient(sys.get());
  if (out.empty()) {
    char* text = nullptr;
    check(qosa_system_to_json(sys.get(), &text), "serialising");
    std::cout << text << "\n";
    qosa_string_free(text);
  } else {
    check(qosa_system_save(sys.get(), out.c_str()), "writing '" + out + "'");
    std::cout << kind << ": M_" << n << " system of " << ms.size() << " algebras\n";
    for (const auto& m : ms) std::cout << "  " << m.name << "  dim " << m.dim << "\n";
    std::cout << "wrote " << out << "\n";
  }
  json report{{"command", "construct"}, {"kind", kind}, {"n", n}, {"out", out}};
  report["algebras"] = json::array();
  for (const auto& m : ms) report["algebras"].push_back({{"name", m.name}, {"dim", m.dim}});
  write_json(json_path, report);
  return kExitOk;
}

int cmd_certify(const std::string& preset, int n, const std::string& json_path) {
  qosa_certificate* raw = nullptr;
  check(qosa_certify_preset(preset.c_str(), n, &raw), "certify");
  CertificatePtr cert(raw);
  std::cout << qosa_certificate_text(cert.get());
  int infeasible = 0;
  check(qosa_certificate_infeasible(cert.get(), &infeasible), "verdict");
  std::int64_t num = 0;
  std::int64_t den = 1;
  check(qosa_certificate_slack(cert.get(), &num, &den), "slack");
  json report{{"command", "certify"}, {"preset", preset}, {"n", n}};
  report["certificate"] = json::parse(qosa_certificate_json(cert.get()));
  report["slack_text"] = rational(num, den);
  write_json(json_path, report);
  return infeasible ? kExitOk : kExitProperty;
}

int cmd_search(const std::string& file, std::optional<std::uint64_t> seed,
               std::optional<int> restarts, const std::string& out, double tol,
               const std::string& json_path) {
  qosa_search_problem* raw = nullptr;
  check(qosa_search_problem_load(file.c_str(), tol, &raw), "loading '" + file + "'");
  ProblemPtr problem(raw);
  const std::uint64_t s = seed.value_or(kDefaultSearchSeed);
  check(qosa_search_problem_set_seed(problem.get(), s), "seed");
  if (restarts) check(qosa_search_problem_set_restarts(problem.get(), *restarts), "restarts");
  std::cout << "seed " << s << (seed ? "" : " (default)") << "\n";

  qosa_search_result* rraw = nullptr;
  check(qosa_search_run(problem.get(), &rraw), "search");
  ResultPtr result(rraw);
  std::cout << qosa_search_result_text(result.get());
  if (!out.empty()) {
    check(qosa_search_result_save(result.get(), out.c_str()), "writing '" + out + "'");
    std::cout << "wrote " << out << " and " << out << ".report.json\n";
  }
  int converged = 0;
  check(qosa_search_result_converged(result.get(), &converged), "result");
  json report{{"command", "search"}, {"problem", file}, {"seed", s}, {"out", out}};
  report["report"] = json::parse(qosa_search_result_report_json(result.get()));
  write_json(json_path, report);
  return converged ? kExitOk : kExitProperty;
}

double default_tolerance() {
  const char* env = std::getenv("QOSA_TOL");
  if (!env || !*env) return qosa_default_tolerance();
  char* end = nullptr;
  errno = 0;
  const double v = std::strtod(env, &end);
  if (errno != 0 || *end != '\0' || !(v > 0.0)) {
    throw Failure{std::string("QOSA_TOL must be a positive number, got '") + env + "'"};
  }
  return v;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Quasi-orthogonal subalgebra toolkit"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(qosa_version()));

  double global_tol = 0.0;
  std::optional<double> sub_tol;
  std::string json_path;
  app.add_option("--tol", global_tol, "Numerical tolerance (default 1e-9, or $QOSA_TOL)")
      ->check(CLI::PositiveNumber);
  app.add_option("--json", json_path, "Also write a JSON report to this path");

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--tol", sub_tol, "Tolerance for this command")->check(CLI::PositiveNumber);
    sub->add_option("--json", json_path, "Also write a JSON report to this path");
  };

  std::string file;
  std::string name_a;
  std::string name_b;
  std::string out;
  std::string new_name;

  auto* check_cmd = app.add_subcommand("check", "Pairwise c-values and quasi-orthogonality");
  check_cmd->add_option("file", file, "System file (.qosa.json)")->required();
  add_common(check_cmd);

  auto* c_cmd = app.add_subcommand("c", "c-value of two named algebras");
  c_cmd->add_option("file", file, "System file")->required();
  c_cmd->add_option("a", name_a, "First algebra")->required();
  c_cmd->add_option("b", name_b, "Second algebra")->required();
  add_common(c_cmd);

  auto* comm_cmd = app.add_subcommand("commutant", "Commutant of a named algebra");
  comm_cmd->add_option("file", file, "System file")->required();
  comm_cmd->add_option("algebra", name_a, "Algebra name")->required();
  comm_cmd->add_option("--out", out, "Write the commutant as a system file");
  comm_cmd->add_option("--name", new_name, "Name of the commutant in the output");
  add_common(comm_cmd);

  auto* cons_cmd = app.add_subcommand("construct", "Build a standard system");
  cons_cmd->require_subcommand(1);
  int p = 0;
  int fj = 0;
  int fk = 0;
  std::string vec_file;
  auto* mub_cmd = cons_cmd->add_subcommand("mub", "p + 1 mutually unbiased MASAs in M_p");
  mub_cmd->add_option("--p", p, "Prime p <= 13")->required();
  auto* fp_cmd = cons_cmd->add_subcommand("factor-pair", "M_j (x) 1 and 1 (x) M_k in M_jk");
  fp_cmd->add_option("j", fj)->required()->check(CLI::PositiveNumber);
  fp_cmd->add_option("k", fk)->required()->check(CLI::PositiveNumber);
  auto* bell_cmd = cons_cmd->add_subcommand("bell", "Two qubit factors and the Bell MASA in M_4");
  auto* mf_cmd = cons_cmd->add_subcommand("masa-from-file", "MASA of an orthonormal basis");
  mf_cmd->add_option("vectors", vec_file, "{\"vectors\": [[[re, im], ...], ...]}")->required();
  for (auto* sub : {mub_cmd, fp_cmd, bell_cmd, mf_cmd}) {
    sub->add_option("--out", out, "Output system file (default: print to stdout)");
    add_common(sub);
  }

  auto* cert_cmd = app.add_subcommand("certify", "Exact obstruction certificate for a preset");
  std::string preset;
  int cert_n = 2;
  bool list = false;
  cert_cmd->add_option("preset", preset, "Preset name");
  cert_cmd->add_option("--n", cert_n, "Parameter n for the M_{n^2} presets")
      ->check(CLI::Range(2, 1000));
  cert_cmd->add_flag("--list", list, "List presets");
  add_common(cert_cmd);

  auto* search_cmd = app.add_subcommand("search", "Numerical search for a quasi-orthogonal system");
  std::optional<std::uint64_t> seed;
  std::optional<int> restarts;
  search_cmd->add_option("problem", file, "Problem file")->required();
  search_cmd->add_option("--seed", seed, "Random seed (default 20110316)");
  search_cmd->add_option("--restarts", restarts, "Override the number of restarts")
      ->check(CLI::PositiveNumber);
  search_cmd->add_option("--out", out, "Write the best system and its report");
  add_common(search_cmd);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitError;
  }

  try {
    double tol = default_tolerance();
    if (app.count("--tol")) tol = global_tol;
    if (sub_tol) tol = *sub_tol;

    if (*check_cmd) return cmd_check(file, tol, json_path);
    if (*c_cmd) return cmd_c(file, name_a, name_b, tol, json_path);
    if (*comm_cmd) return cmd_commutant(file, name_a, out, new_name, tol, json_path);
    if (*cons_cmd) {
      qosa_system* raw = nullptr;
      std::string kind;
      if (*mub_cmd) {
        kind = "mub";
        check(qosa_construct_mub(p, tol, &raw), "construct mub");
      } else if (*fp_cmd) {
        kind = "factor-pair";
        check(qosa_construct_factor_pair(fj, fk, &raw), "construct factor-pair");
      } else if (*bell_cmd) {
        kind = "bell";
        check(qosa_construct_bell(&raw), "construct bell");
      } else {
        kind = "masa-from-file";
        check(qosa_construct_masa_from_file(vec_file.c_str(), tol, &raw),
              "construct masa-from-file");
      }
      return finish_construct(SystemPtr(raw), kind, out, json_path);
    }
    if (*cert_cmd) {
      if (list) {
        for (std::size_t i = 0; i < qosa_preset_count(); ++i) {
          std::cout << qosa_preset_name(i) << "\n";
        }
        return kExitOk;
      }
      if (preset.empty()) throw Failure{"certify: a preset name is required (see --list)"};
      return cmd_certify(preset, cert_n, json_path);
    }
    if (*search_cmd) return cmd_search(file, seed, restarts, out, tol, json_path);
  } catch (const Failure& f) {
    std::cerr << "qosa: error: " << f.message << "\n";
    return kExitError;
  } catch (const std::exception& e) {
    std::cerr << "qosa: error: " << e.what() << "\n";
    return kExitError;
  }
  return kExitError;
}
