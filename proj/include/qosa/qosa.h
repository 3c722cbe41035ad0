/* C interface to the qosa library.
 *
 * Every function returns a qosa_status; QOSA_OK is zero. On failure the
 * message of the last error on the calling thread is available through
 * qosa_last_error() until the next failing call on that thread.
 * Objects are opaque handles released with the matching *_free function.
 * Strings returned by the library are owned by the handle they come from
 * unless stated otherwise. */
#ifndef QOSA_QOSA_H
#define QOSA_QOSA_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  if defined(QOSA_BUILDING_LIBRARY)
#    define QOSA_API __declspec(dllexport)
#  else
#    define QOSA_API __declspec(dllimport)
#  endif
#else
#  define QOSA_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum qosa_status {
  QOSA_OK = 0,
  QOSA_E_DIMENSION_MISMATCH = 1,
  QOSA_E_INVALID_ARGUMENT = 2,
  QOSA_E_NOT_BALANCED = 3,
  QOSA_E_HYPOTHESIS_VIOLATED = 4,
  QOSA_E_STRUCTURE_DETECTION = 5,
  QOSA_E_NOT_ORTHONORMAL = 6,
  QOSA_E_NOT_PRIME = 7,
  QOSA_E_TOO_LARGE = 8,
  QOSA_E_NOT_UNITARY = 9,
  QOSA_E_SCHEMA = 10,
  QOSA_E_INVARIANT_VIOLATION = 11,
  QOSA_E_UNKNOWN_PRESET = 12,
  QOSA_E_IO = 13,
  QOSA_E_INTERNAL = 99
} qosa_status;

typedef struct qosa_system qosa_system;
typedef struct qosa_certificate qosa_certificate;
typedef struct qosa_search_problem qosa_search_problem;
typedef struct qosa_search_result qosa_search_result;

QOSA_API const char* qosa_version(void);
QOSA_API const char* qosa_status_string(qosa_status status);
QOSA_API const char* qosa_last_error(void);
/* Default numerical tolerance (1e-9). */
QOSA_API double qosa_default_tolerance(void);
/* Releases strings documented as caller-owned. */
QOSA_API void qosa_string_free(char* s);

/* ---- systems of subalgebras ---- */

QOSA_API qosa_status qosa_system_load(const char* path, double tol, qosa_system** out);
QOSA_API qosa_status qosa_system_save(const qosa_system* sys, const char* path);
/* Caller-owned JSON text in the system file format. */
QOSA_API qosa_status qosa_system_to_json(const qosa_system* sys, char** out);
QOSA_API void qosa_system_free(qosa_system* sys);

QOSA_API qosa_status qosa_system_ambient_dim(const qosa_system* sys, int* n);
QOSA_API qosa_status qosa_system_size(const qosa_system* sys, size_t* count);
QOSA_API qosa_status qosa_system_name(const qosa_system* sys, size_t index, const char** name);
QOSA_API qosa_status qosa_system_find(const qosa_system* sys, const char* name, size_t* index);
QOSA_API qosa_status qosa_system_algebra_dim(const qosa_system* sys, size_t index, int* dim);

/* c(A_i, A_j) = Tr(E_i E_j). */
QOSA_API qosa_status qosa_system_c_value(const qosa_system* sys, size_t i, size_t j, double* c);
/* Pairwise quasi-orthogonality test; any output pointer may be NULL. */
QOSA_API qosa_status qosa_system_quasi_orthogonal(const qosa_system* sys, size_t i, size_t j,
                                                  double tol, double* c, double* trace_defect,
                                                  int* is_quasi_orthogonal);
/* Sum over members of (dim - 1), and whether it equals n^2 - 1. */
QOSA_API qosa_status qosa_system_dimension_count(const qosa_system* sys, long* traceless_sum,
                                                 int* is_decomposition);
/* Block structure as (n_k, m_k) pairs written to blocks[2k], blocks[2k+1].
 * *count receives the number of blocks; at most capacity are written. */
QOSA_API qosa_status qosa_system_structure(const qosa_system* sys, size_t index, double tol,
                                           int* blocks, size_t capacity, size_t* count);
/* New single-member system holding the commutant of member `index`. */
QOSA_API qosa_status qosa_system_commutant(const qosa_system* sys, size_t index, double tol,
                                           const char* name, qosa_system** out);

QOSA_API qosa_status qosa_construct_mub(int p, double tol, qosa_system** out);
QOSA_API qosa_status qosa_construct_factor_pair(int j, int k, qosa_system** out);
QOSA_API qosa_status qosa_construct_bell(qosa_system** out);
/* File { "vectors": [[[re, im], ...], ...] }; one MASA named "masa". */
QOSA_API qosa_status qosa_construct_masa_from_file(const char* path, double tol,
                                                   qosa_system** out);

/* ---- obstruction certificates ---- */

QOSA_API size_t qosa_preset_count(void);
QOSA_API const char* qosa_preset_name(size_t index);
QOSA_API qosa_status qosa_certify_preset(const char* name, int n, qosa_certificate** out);
/* 1 when the certificate establishes infeasibility. */
QOSA_API qosa_status qosa_certificate_infeasible(const qosa_certificate* cert, int* infeasible);
QOSA_API qosa_status qosa_certificate_slack(const qosa_certificate* cert, int64_t* num,
                                            int64_t* den);
QOSA_API const char* qosa_certificate_text(const qosa_certificate* cert);
QOSA_API const char* qosa_certificate_json(const qosa_certificate* cert);
QOSA_API void qosa_certificate_free(qosa_certificate* cert);

/* ---- numerical search ---- */

QOSA_API qosa_status qosa_search_problem_load(const char* path, double tol,
                                              qosa_search_problem** out);
QOSA_API qosa_status qosa_search_problem_set_seed(qosa_search_problem* p, uint64_t seed);
QOSA_API qosa_status qosa_search_problem_seed(const qosa_search_problem* p, uint64_t* seed);
QOSA_API qosa_status qosa_search_problem_set_restarts(qosa_search_problem* p, int restarts);
QOSA_API qosa_status qosa_search_problem_tol_defect(const qosa_search_problem* p, double* tol);
QOSA_API void qosa_search_problem_free(qosa_search_problem* p);

QOSA_API qosa_status qosa_search_run(const qosa_search_problem* p, qosa_search_result** out);
QOSA_API qosa_status qosa_search_result_best_defect(const qosa_search_result* r, double* defect);
QOSA_API qosa_status qosa_search_result_converged(const qosa_search_result* r, int* converged);
QOSA_API const char* qosa_search_result_text(const qosa_search_result* r);
QOSA_API const char* qosa_search_result_report_json(const qosa_search_result* r);
/* Writes the system file to path and the report to path + ".report.json". */
QOSA_API qosa_status qosa_search_result_save(const qosa_search_result* r, const char* path);
QOSA_API void qosa_search_result_free(qosa_search_result* r);

#ifdef __cplusplus
}
#endif

#endif /* QOSA_QOSA_H */
