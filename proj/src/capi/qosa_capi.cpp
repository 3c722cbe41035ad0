#include "qosa/qosa.h"

#include <cstring>
#include <exception>
#include <new>
#include <string>

#include "qosa/certify.hpp"
#include "qosa/constructions.hpp"
#include "qosa/overlap.hpp"
#include "qosa/search.hpp"

struct qosa_system {
  qosa::SystemSpec spec;
};

struct qosa_certificate {
  qosa::ObstructionReport report;
  std::string text;
  std::string json;
};

struct qosa_search_problem {
  qosa::SearchProblem problem;
};

struct qosa_search_result {
  qosa::SearchProblem problem;
  qosa::SearchResult result;
  std::string text;
  std::string json;
};

namespace {

thread_local std::string g_last_error;

qosa_status fail(qosa_status s, const std::string& msg) {
  g_last_error = msg;
  return s;
}

template <class F>
qosa_status guarded(F&& f) {
  try {
    f();
    return QOSA_OK;
  } catch (const qosa::Error& e) {
    return fail(static_cast<qosa_status>(static_cast<int>(e.code())), e.what());
  } catch (const std::bad_alloc&) {
    return fail(QOSA_E_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return fail(QOSA_E_INTERNAL, e.what());
  } catch (...) {
    return fail(QOSA_E_INTERNAL, "unknown exception");
  }
}

#define QOSA_REQUIRE(cond)                                                     \
  do {                                                                         \
    if (!(cond)) return fail(QOSA_E_INVALID_ARGUMENT, "null argument: " #cond); \
  } while (0)

qosa_status check_index(const qosa_system* sys, size_t i) {
  if (i >= sys->spec.size()) {
    return fail(QOSA_E_INVALID_ARGUMENT, "algebra index " + std::to_string(i) + " out of range");
  }
  return QOSA_OK;
}

}  // namespace

extern "C" {

const char* qosa_version(void) { return QOSA_VERSION_STRING; }

const char* qosa_status_string(qosa_status status) {
  if (status == QOSA_OK) return "ok";
  if (status == QOSA_E_INTERNAL) return "internal error";
  return qosa::to_string(static_cast<qosa::ErrorCode>(status));
}

const char* qosa_last_error(void) { return g_last_error.c_str(); }

double qosa_default_tolerance(void) { return qosa::kDefaultTol; }

void qosa_string_free(char* s) { delete[] s; }

qosa_status qosa_system_load(const char* path, double tol, qosa_system** out) {
  QOSA_REQUIRE(path && out);
  return guarded([&] { *out = new qosa_system{qosa::load(path, tol)}; });
}

qosa_status qosa_system_save(const qosa_system* sys, const char* path) {
  QOSA_REQUIRE(sys && path);
  return guarded([&] { qosa::save(sys->spec, path); });
}

qosa_status qosa_system_to_json(const qosa_system* sys, char** out) {
  QOSA_REQUIRE(sys && out);
  return guarded([&] {
    const std::string s = qosa::to_json(sys->spec);
    char* buf = new char[s.size() + 1];
    std::memcpy(buf, s.c_str(), s.size() + 1);
    *out = buf;
  });
}

void qosa_system_free(qosa_system* sys) { delete sys; }

qosa_status qosa_system_ambient_dim(const qosa_system* sys, int* n) {
  QOSA_REQUIRE(sys && n);
  *n = sys->spec.ambient_dim();
  return QOSA_OK;
}

qosa_status qosa_system_size(const qosa_system* sys, size_t* count) {
  QOSA_REQUIRE(sys && count);
  *count = sys->spec.size();
  return QOSA_OK;
}

qosa_status qosa_system_name(const qosa_system* sys, size_t index, const char** name) {
  QOSA_REQUIRE(sys && name);
  if (auto s = check_index(sys, index)) return s;
  *name = sys->spec.entries()[index].name.c_str();
  return QOSA_OK;
}

qosa_status qosa_system_find(const qosa_system* sys, const char* name, size_t* index) {
  QOSA_REQUIRE(sys && name && index);
  const auto i = sys->spec.index_of(name);
  if (!i) return fail(QOSA_E_INVALID_ARGUMENT, std::string("no algebra named '") + name + "'");
  *index = *i;
  return QOSA_OK;
}

qosa_status qosa_system_algebra_dim(const qosa_system* sys, size_t index, int* dim) {
  QOSA_REQUIRE(sys && dim);
  if (auto s = check_index(sys, index)) return s;
  *dim = sys->spec.entries()[index].algebra.dim();
  return QOSA_OK;
}

qosa_status qosa_system_c_value(const qosa_system* sys, size_t i, size_t j, double* c) {
  QOSA_REQUIRE(sys && c);
  if (auto s = check_index(sys, i)) return s;
  if (auto s = check_index(sys, j)) return s;
  return guarded([&] {
    *c = qosa::c_value(sys->spec.entries()[i].algebra, sys->spec.entries()[j].algebra);
  });
}

qosa_status qosa_system_quasi_orthogonal(const qosa_system* sys, size_t i, size_t j, double tol,
                                         double* c, double* trace_defect,
                                         int* is_quasi_orthogonal) {
  QOSA_REQUIRE(sys);
  if (auto s = check_index(sys, i)) return s;
  if (auto s = check_index(sys, j)) return s;
  return guarded([&] {
    const auto r = qosa::quasi_orthogonal(sys->spec.entries()[i].algebra,
                                          sys->spec.entries()[j].algebra, tol);
    if (c) *c = r.c_value;
    if (trace_defect) *trace_defect = r.max_trace_defect;
    if (is_quasi_orthogonal) *is_quasi_orthogonal = r.is_quasi_orthogonal ? 1 : 0;
  });
}

qosa_status qosa_system_dimension_count(const qosa_system* sys, long* traceless_sum,
                                        int* is_decomposition) {
  QOSA_REQUIRE(sys);
  long sum = 0;
  for (const auto& e : sys->spec.entries()) sum += e.algebra.dim() - 1;
  const long n = sys->spec.ambient_dim();
  if (traceless_sum) *traceless_sum = sum;
  if (is_decomposition) *is_decomposition = sum == n * n - 1 ? 1 : 0;
  return QOSA_OK;
}

qosa_status qosa_system_structure(const qosa_system* sys, size_t index, double tol, int* blocks,
                                  size_t capacity, size_t* count) {
  QOSA_REQUIRE(sys && count && (blocks || capacity == 0));
  if (auto s = check_index(sys, index)) return s;
  return guarded([&] {
    const auto bl = qosa::structure(sys->spec.entries()[index].algebra, tol);
    *count = bl.size();
    for (size_t k = 0; k < bl.size() && k < capacity; ++k) {
      blocks[2 * k] = bl[k].n_k;
      blocks[2 * k + 1] = bl[k].m_k;
    }
  });
}

qosa_status qosa_system_commutant(const qosa_system* sys, size_t index, double tol,
                                  const char* name, qosa_system** out) {
  QOSA_REQUIRE(sys && name && out);
  if (auto s = check_index(sys, index)) return s;
  return guarded([&] {
    const auto& src = sys->spec.entries()[index];
    qosa::SystemSpec spec(sys->spec.ambient_dim());
    spec.add(name, qosa::commutant(src.algebra, tol));
    spec.metadata()["construction"] = "commutant";
    spec.metadata()["source"] = src.name;
    *out = new qosa_system{std::move(spec)};
  });
}

qosa_status qosa_construct_mub(int p, double tol, qosa_system** out) {
  QOSA_REQUIRE(out);
  return guarded([&] { *out = new qosa_system{qosa::mub_family(p, tol)}; });
}

qosa_status qosa_construct_factor_pair(int j, int k, qosa_system** out) {
  QOSA_REQUIRE(out);
  return guarded([&] { *out = new qosa_system{qosa::factor_pair(j, k)}; });
}

qosa_status qosa_construct_bell(qosa_system** out) {
  QOSA_REQUIRE(out);
  return guarded([&] { *out = new qosa_system{qosa::bell_system()}; });
}

qosa_status qosa_construct_masa_from_file(const char* path, double tol, qosa_system** out) {
  QOSA_REQUIRE(path && out);
  return guarded([&] {
    const auto vectors = qosa::load_vectors(path);
    auto masa = qosa::masa_from_basis(vectors, tol);
    qosa::SystemSpec spec(masa.ambient_dim());
    spec.add("masa", std::move(masa));
    spec.metadata()["construction"] = "masa-from-file";
    *out = new qosa_system{std::move(spec)};
  });
}

size_t qosa_preset_count(void) { return qosa::preset_names().size(); }

const char* qosa_preset_name(size_t index) {
  static const std::vector<std::string> names = qosa::preset_names();
  return index < names.size() ? names[index].c_str() : nullptr;
}

qosa_status qosa_certify_preset(const char* name, int n, qosa_certificate** out) {
  QOSA_REQUIRE(name && out);
  return guarded([&] {
    auto report = qosa::certify_preset(name, n);
    auto text = report.to_text();
    auto json = report.to_json();
    *out = new qosa_certificate{std::move(report), std::move(text), std::move(json)};
  });
}

qosa_status qosa_certificate_infeasible(const qosa_certificate* cert, int* infeasible) {
  QOSA_REQUIRE(cert && infeasible);
  *infeasible = cert->report.verdict == qosa::Verdict::kInfeasible ? 1 : 0;
  return QOSA_OK;
}

qosa_status qosa_certificate_slack(const qosa_certificate* cert, int64_t* num, int64_t* den) {
  QOSA_REQUIRE(cert && num && den);
  *num = cert->report.slack.numerator();
  *den = cert->report.slack.denominator();
  return QOSA_OK;
}

const char* qosa_certificate_text(const qosa_certificate* cert) {
  return cert ? cert->text.c_str() : nullptr;
}

const char* qosa_certificate_json(const qosa_certificate* cert) {
  return cert ? cert->json.c_str() : nullptr;
}

void qosa_certificate_free(qosa_certificate* cert) { delete cert; }

qosa_status qosa_search_problem_load(const char* path, double tol, qosa_search_problem** out) {
  QOSA_REQUIRE(path && out);
  return guarded([&] { *out = new qosa_search_problem{qosa::load_problem(path, tol)}; });
}

qosa_status qosa_search_problem_set_seed(qosa_search_problem* p, uint64_t seed) {
  QOSA_REQUIRE(p);
  p->problem.seed = seed;
  return QOSA_OK;
}

qosa_status qosa_search_problem_seed(const qosa_search_problem* p, uint64_t* seed) {
  QOSA_REQUIRE(p && seed);
  *seed = p->problem.seed;
  return QOSA_OK;
}

qosa_status qosa_search_problem_set_restarts(qosa_search_problem* p, int restarts) {
  QOSA_REQUIRE(p);
  if (restarts < 1) return fail(QOSA_E_INVALID_ARGUMENT, "restarts must be >= 1");
  p->problem.restarts = restarts;
  return QOSA_OK;
}

qosa_status qosa_search_problem_tol_defect(const qosa_search_problem* p, double* tol) {
  QOSA_REQUIRE(p && tol);
  *tol = p->problem.tol_defect;
  return QOSA_OK;
}

void qosa_search_problem_free(qosa_search_problem* p) { delete p; }

qosa_status qosa_search_run(const qosa_search_problem* p, qosa_search_result** out) {
  QOSA_REQUIRE(p && out);
  return guarded([&] {
    auto result = qosa::optimize(p->problem);
    auto text = qosa::report_text(p->problem, result);
    auto json = qosa::report_json(p->problem, result);
    *out = new qosa_search_result{p->problem, std::move(result), std::move(text), std::move(json)};
  });
}

qosa_status qosa_search_result_best_defect(const qosa_search_result* r, double* defect) {
  QOSA_REQUIRE(r && defect);
  *defect = r->result.best_defect;
  return QOSA_OK;
}

qosa_status qosa_search_result_converged(const qosa_search_result* r, int* converged) {
  QOSA_REQUIRE(r && converged);
  *converged = r->result.converged ? 1 : 0;
  return QOSA_OK;
}

const char* qosa_search_result_text(const qosa_search_result* r) {
  return r ? r->text.c_str() : nullptr;
}

const char* qosa_search_result_report_json(const qosa_search_result* r) {
  return r ? r->json.c_str() : nullptr;
}

qosa_status qosa_search_result_save(const qosa_search_result* r, const char* path) {
  QOSA_REQUIRE(r && path);
  return guarded([&] { qosa::save_result(r->problem, r->result, path); });
}

void qosa_search_result_free(qosa_search_result* r) { delete r; }

}  // extern "C"
