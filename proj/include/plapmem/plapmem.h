/*
 * plapmem C interface.
 *
 * Every function returning plm_status leaves a message retrievable with
 * plm_last_error() on failure. Messages are per thread.
 */
#ifndef PLAPMEM_PLAPMEM_H
#define PLAPMEM_PLAPMEM_H

#include <stddef.h>

#if defined(_WIN32)
#  if defined(PLAPMEM_BUILDING)
#    define PLM_API __declspec(dllexport)
#  else
#    define PLM_API __declspec(dllimport)
#  endif
#else
#  define PLM_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

/* Values 2..5 are the process exit codes used by the command-line tool. */
typedef enum plm_status {
    PLM_OK = 0,
    PLM_ERR_CONFIG = 2,
    PLM_ERR_DIVERGENCE = 3,
    PLM_ERR_LINEAR_SOLVE = 4,
    PLM_ERR_IO = 5,
    PLM_ERR_NUMERIC_INPUT = 6,
    PLM_ERR_ILL_POSED_STEP = 7,
    PLM_ERR_OUT_OF_RANGE = 8,
    PLM_ERR_INVALID_ARGUMENT = 9,
    PLM_ERR_INTERNAL = 10
} plm_status;

typedef struct plm_config plm_config;
typedef struct plm_run plm_run;

PLM_API const char* plm_version(void);

/* Message of the last failure on this thread; "" if none. */
PLM_API const char* plm_last_error(void);

/* Human-readable name of a status code. */
PLM_API const char* plm_status_name(plm_status status);

/* ---- configuration ---------------------------------------------------- */

PLM_API plm_status plm_config_from_file(const char* path, plm_config** out);
PLM_API plm_status plm_config_from_json(const char* json, plm_config** out);
PLM_API void plm_config_free(plm_config* config);

/* Canonical JSON echo of a parsed config. Writes at most `capacity` bytes
 * including the terminating NUL; *needed receives the full size (with NUL). */
PLM_API plm_status plm_config_to_json(const plm_config* config, char* buffer, size_t capacity,
                                      size_t* needed);

PLM_API plm_status plm_config_set_output_dir(plm_config* config, const char* dir);

/* Copies the output directory into `buffer` under the same size rules as
 * plm_config_to_json. */
PLM_API plm_status plm_config_output_dir(const plm_config* config, char* buffer,
                                         size_t capacity, size_t* needed);

/* ---- solving ---------------------------------------------------------- */

PLM_API plm_status plm_solve(const plm_config* config, plm_run** out);
PLM_API void plm_run_free(plm_run* run);

/* Time levels in the run (N + 1). */
PLM_API plm_status plm_run_num_levels(const plm_run* run, size_t* levels);

/* Interior coefficients per level. */
PLM_API plm_status plm_run_num_dofs(const plm_run* run, size_t* dofs);

PLM_API plm_status plm_run_time(const plm_run* run, size_t level, double* t);

/* Copies U (or Y) at `level` into `values`, which must hold num_dofs entries. */
PLM_API plm_status plm_run_u(const plm_run* run, size_t level, double* values, size_t capacity);
PLM_API plm_status plm_run_y(const plm_run* run, size_t level, double* values, size_t capacity);

/* b(t_k) = int U^2 at every level; `values` must hold num_levels entries. */
PLM_API plm_status plm_run_energy(const plm_run* run, double* values, size_t capacity);

/* Fixed-point iterations of step `step` (t_step -> t_step+1). */
PLM_API plm_status plm_run_iterations(const plm_run* run, size_t step, int* iterations);

/* L2 errors at T. PLM_ERR_INVALID_ARGUMENT when the problem has no exact
 * solution. */
PLM_API plm_status plm_run_errors(const plm_run* run, double* l2_u, double* l2_y);

/* Writes snapshots.csv, energy.csv, support.csv, diagnostics.csv and
 * config.json into `dir` (the config's output_dir when NULL). */
PLM_API plm_status plm_run_write(const plm_run* run, const char* dir);

/* ---- experiments ------------------------------------------------------ */

typedef struct plm_example_options {
    int has_p;
    double p;
    int has_lambda;
    double lambda;
    int parallel;
    /* 0 reads PLAPMEM_THREADS, falling back to the hardware concurrency. */
    unsigned threads;
} plm_example_options;

/* Runs experiment family `id` (1..4) into `out_dir`. Individual runs that
 * fail are listed in failures.csv; the status is then that of the first
 * failure, after every other run has been written. */
PLM_API plm_status plm_run_example(int id, const plm_example_options* options,
                                   const char* out_dir);

typedef void (*plm_check_callback)(const char* name, int passed, const char* detail,
                                   void* user);

/* Runs the built-in self-checks, reporting each through `callback` (may be
 * NULL). *failures receives the number of failed checks. */
PLM_API plm_status plm_verify(plm_check_callback callback, void* user, int* failures);

#ifdef __cplusplus
}
#endif

#endif /* PLAPMEM_PLAPMEM_H */
