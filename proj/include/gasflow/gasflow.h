#ifndef GASFLOW_GASFLOW_H
#define GASFLOW_GASFLOW_H

/*
 * C interface to the gasflow steady-state network solver.
 *
 * Handles are opaque and immutable once created; a network handle may be
 * shared by concurrent gf_solve calls. Every fallible call returns a
 * gf_status and records a message retrievable with gf_last_error() on the
 * calling thread. Strings returned by accessors stay valid for the lifetime
 * of the owning handle.
 */

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  if defined(GASFLOW_BUILDING_LIBRARY)
#    define GASFLOW_API __declspec(dllexport)
#  else
#    define GASFLOW_API __declspec(dllimport)
#  endif
#else
#  define GASFLOW_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef struct gf_network gf_network;
typedef struct gf_result gf_result;

typedef enum gf_status {
    GF_OK = 0,
    GF_ERR_IO = 1,
    GF_ERR_MALFORMED_INPUT = 2,
    GF_ERR_SCHEMA_VIOLATION = 3,
    GF_ERR_INCONSISTENT_BOUNDARY = 4,
    GF_ERR_INVALID_ARGUMENT = 5,
    GF_ERR_OVERFLOWING_COEFFICIENT = 6,
    GF_ERR_NO_PIPES = 7,
    GF_ERR_NOT_A_TREE = 8,
    GF_ERR_MULTIPLE_SLACKS = 9,
    GF_ERR_INTERNAL = 10
} gf_status;

typedef enum gf_eos_kind { GF_EOS_IDEAL = 0, GF_EOS_CNGA = 1 } gf_eos_kind;

typedef enum gf_classification {
    GF_E1_CONVERGED_IN_DOMAIN = 1,
    GF_E2_CONVERGED_OUT_OF_DOMAIN = 2,
    GF_E3_FAILED = 3
} gf_classification;

typedef enum gf_feasibility {
    GF_FEASIBLE = 0,
    GF_INFEASIBLE = 1,
    GF_INDETERMINATE = 2
} gf_feasibility;

typedef enum gf_failure {
    GF_FAILURE_NONE = 0,
    GF_FAILURE_MAX_ITERATIONS = 1,
    GF_FAILURE_NON_FINITE = 2,
    GF_FAILURE_SINGULAR_JACOBIAN = 3
} gf_failure;

typedef enum gf_certificate_reason {
    GF_CERT_NEGATIVE_COMPRESSOR_FLOW = 0,
    GF_CERT_NEGATIVE_POTENTIAL = 1
} gf_certificate_reason;

typedef struct gf_solve_options {
    double tolerance;        /* residual infinity-norm bound, default 1e-8 */
    int max_iterations;      /* default 2000 */
    uint64_t seed;           /* random initial guess */
    int dimensional;         /* non-zero: all nominal values one */
    int pressure_correction; /* non-zero (default): rerun with |p| after negative pressures */
    double nominal_l0;       /* <= 0 selects automatically */
    double nominal_p0;
    double nominal_v0;
} gf_solve_options;

typedef struct gf_validation {
    int a1_slack_present;
    int a2_compressor_ratios;
    int a3_slack_paths;
    int a4_non_pipe_cycles;
} gf_validation;

GASFLOW_API const char* gf_version(void);
GASFLOW_API const char* gf_last_error(void);
GASFLOW_API const char* gf_status_string(gf_status status);

/* Networks */
GASFLOW_API gf_status gf_network_parse(const char* text, size_t length, gf_network** out);
GASFLOW_API gf_status gf_network_load(const char* path, gf_network** out);
GASFLOW_API void gf_network_free(gf_network* net);

/* Copy of `net` using `kind`; other gas parameters are kept. */
GASFLOW_API gf_status gf_network_with_eos(const gf_network* net, gf_eos_kind kind, gf_network** out);

/* Scaled injections and redrawn compressor ratios, deterministic in `seed`. */
GASFLOW_API gf_status gf_network_perturb(const gf_network* net, uint64_t seed, double withdrawal_lo,
                                         double withdrawal_hi, double ratio_lo, double ratio_hi,
                                         gf_network** out);

/* Writes pass/fail (1/0) per assumption; returns GF_OK. `summary` may be NULL. */
GASFLOW_API gf_status gf_network_validate(const gf_network* net, gf_validation* out, const char** summary);

GASFLOW_API size_t gf_network_junction_count(const gf_network* net);
GASFLOW_API size_t gf_network_edge_count(const gf_network* net);
GASFLOW_API const char* gf_network_junction_id(const gf_network* net, size_t index);
GASFLOW_API int gf_network_junction_is_slack(const gf_network* net, size_t index);
GASFLOW_API const char* gf_network_edge_id(const gf_network* net, size_t index);
GASFLOW_API gf_eos_kind gf_network_eos_kind(const gf_network* net);

/* Solving */
GASFLOW_API void gf_solve_options_init(gf_solve_options* options);

/* Returns GF_OK whenever the solver ran, including E2/E3 outcomes. */
GASFLOW_API gf_status gf_solve(const gf_network* net, const gf_solve_options* options, gf_result** out);
GASFLOW_API void gf_result_free(gf_result* result);

GASFLOW_API gf_classification gf_result_classification(const gf_result* r);
GASFLOW_API gf_feasibility gf_result_feasibility(const gf_result* r);
GASFLOW_API gf_failure gf_result_failure(const gf_result* r);
GASFLOW_API const char* gf_result_diagnostic(const gf_result* r);
GASFLOW_API int gf_result_iterations(const gf_result* r);
GASFLOW_API double gf_result_residual(const gf_result* r);
GASFLOW_API double gf_result_wall_time(const gf_result* r);
GASFLOW_API int gf_result_pressure_corrected(const gf_result* r);
GASFLOW_API size_t gf_result_residual_history(const gf_result* r, double* buffer, size_t capacity);

GASFLOW_API size_t gf_result_certificate_count(const gf_result* r);
GASFLOW_API const char* gf_result_certificate_element(const gf_result* r, size_t index);
GASFLOW_API gf_certificate_reason gf_result_certificate_reason(const gf_result* r, size_t index);

/* Physical-unit solution (SI); present for E1 and E2. Copies at most
 * `capacity` values and returns the number available. */
GASFLOW_API int gf_result_has_solution(const gf_result* r);
GASFLOW_API size_t gf_result_pressures(const gf_result* r, double* buffer, size_t capacity);
GASFLOW_API size_t gf_result_densities(const gf_result* r, double* buffer, size_t capacity);
GASFLOW_API size_t gf_result_injections(const gf_result* r, double* buffer, size_t capacity);
GASFLOW_API size_t gf_result_flows(const gf_result* r, double* buffer, size_t capacity);

/* Solution document (format_version 1). The string is owned by the result. */
GASFLOW_API const char* gf_result_json(const gf_result* r);

#ifdef __cplusplus
}
#endif

#endif /* GASFLOW_GASFLOW_H */
