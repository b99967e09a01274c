/*
 * C interface to the ggm library: joint estimation of Gaussian graphical
 * models with hidden nodes, its baselines, and the benchmark experiments.
 *
 * Every function returning ggm_status reports failures through the code and
 * a thread-local message available from ggm_last_error(). Objects are opaque
 * handles released with the matching *_free function; free functions accept
 * NULL.
 */
#ifndef GGM_GGM_H
#define GGM_GGM_H

#include <stddef.h>
#include <stdint.h>

#if defined(GGM_BUILDING_LIBRARY)
#define GGM_API __attribute__((visibility("default")))
#else
#define GGM_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum ggm_status {
    GGM_OK = 0,
    GGM_ERR_INVALID_INPUT = 1,
    GGM_ERR_NUMERICAL = 2,
    GGM_ERR_PARSE = 3,
    GGM_ERR_DEGENERATE = 4,
    GGM_ERR_CONFIG = 5,
    GGM_ERR_IO = 6,
    GGM_ERR_INTERNAL = 7
} ggm_status;

GGM_API const char* ggm_version(void);
GGM_API const char* ggm_status_name(ggm_status status);
/* Message of the last failure on the calling thread ("" if none). */
GGM_API const char* ggm_last_error(void);

/* ---- symmetric matrices ------------------------------------------------ */

typedef struct ggm_matrix ggm_matrix;

/* Row-major dim x dim input; symmetrized by averaging with its transpose. */
GGM_API ggm_status ggm_matrix_create(size_t dim, const double* row_major, ggm_matrix** out);
GGM_API ggm_status ggm_matrix_read_csv(const char* path, ggm_matrix** out);
GGM_API ggm_status ggm_matrix_write_csv(const ggm_matrix* m, const char* path);
GGM_API size_t ggm_matrix_dim(const ggm_matrix* m);
/* Copies dim*dim row-major entries into out (capacity len). */
GGM_API ggm_status ggm_matrix_copy(const ggm_matrix* m, double* out, size_t len);
GGM_API void ggm_matrix_free(ggm_matrix* m);

/* ---- solvers ------------------------------------------------------------ */

typedef enum ggm_admissible_set {
    GGM_ADMISSIBLE_SYMMETRIC = 0,
    GGM_ADMISSIBLE_NONPOSITIVE_OFFDIAG = 1
} ggm_admissible_set;

typedef struct ggm_solver_options {
    double step;
    size_t max_iters;
    double tol_primal;
    double tol_dual;
    double pd_floor;
    int adaptive_step;
    int penalize_diagonal;
    int fuse_latent_diagonal;
    ggm_admissible_set admissible_set;
} ggm_solver_options;

GGM_API void ggm_solver_options_default(ggm_solver_options* opts);

/* Per-layer and per-pair penalty weights for K layers (all start at 0). */
typedef struct ggm_weights ggm_weights;

GGM_API ggm_status ggm_weights_create(size_t layers, ggm_weights** out);
GGM_API ggm_status ggm_weights_set_layer(ggm_weights* w, size_t k, double rho, double beta);
GGM_API ggm_status ggm_weights_set_pair(ggm_weights* w, size_t k1, size_t k2, double rho_pair,
                                        double beta_pair);
GGM_API ggm_status ggm_weights_set_uniform(ggm_weights* w, double rho, double beta,
                                           double rho_pair, double beta_pair);
GGM_API void ggm_weights_free(ggm_weights* w);

typedef struct ggm_estimate ggm_estimate;

/* Joint estimator with hidden nodes over K = count observed covariances. */
GGM_API ggm_status ggm_solve_joint(const ggm_matrix* const* covs, size_t count,
                                   const ggm_weights* w, const ggm_solver_options* opts,
                                   ggm_estimate** out);
GGM_API ggm_status ggm_solve_lvgl(const ggm_matrix* cov, double rho, double beta,
                                  const ggm_solver_options* opts, ggm_estimate** out);
GGM_API ggm_status ggm_solve_gl(const ggm_matrix* cov, double lambda,
                                const ggm_solver_options* opts, ggm_estimate** out);
GGM_API ggm_status ggm_solve_ggl(const ggm_matrix* const* covs, size_t count, double lambda1,
                                 double lambda2, const ggm_solver_options* opts,
                                 ggm_estimate** out);

typedef enum ggm_oracle_kind { GGM_ORACLE_JOINT = 0, GGM_ORACLE_GGL = 1 } ggm_oracle_kind;

/* Reference projected-subgradient solver; O <= 5, K <= 3. For GGM_ORACLE_GGL
 * the weights' layer rho is lambda1 and pair rho is lambda2 (first pair). */
GGM_API ggm_status ggm_oracle_solve(ggm_oracle_kind kind, const ggm_matrix* const* covs,
                                    size_t count, const ggm_weights* w, double lambda1,
                                    double lambda2, size_t budget, ggm_estimate** out);

GGM_API size_t ggm_estimate_layers(const ggm_estimate* e);
/* Borrowed pointers, valid until the estimate is freed. */
GGM_API const ggm_matrix* ggm_estimate_s(const ggm_estimate* e, size_t k);
GGM_API const ggm_matrix* ggm_estimate_p(const ggm_estimate* e, size_t k);
GGM_API double ggm_estimate_objective(const ggm_estimate* e);
GGM_API size_t ggm_estimate_iterations(const ggm_estimate* e);
GGM_API int ggm_estimate_converged(const ggm_estimate* e);
GGM_API void ggm_estimate_free(ggm_estimate* e);

/* ---- metrics ------------------------------------------------------------ */

GGM_API ggm_status ggm_mean_normalized_error(const ggm_matrix* const* est,
                                             const ggm_matrix* const* truth, size_t count,
                                             double* out);

/* ---- experiments -------------------------------------------------------- */

typedef struct ggm_experiment ggm_experiment;
typedef struct ggm_table ggm_table;

/* id is "tc1", "tc2" or "tc3"; starts from that experiment's defaults. */
GGM_API ggm_status ggm_experiment_create(const char* id, ggm_experiment** out);
GGM_API ggm_status ggm_experiment_load_config(ggm_experiment* x, const char* path);
GGM_API ggm_status ggm_experiment_set(ggm_experiment* x, const char* key, const char* value);
/* Canonical key=value dump; the string lives until the next call on x. */
GGM_API const char* ggm_experiment_dump(ggm_experiment* x);
GGM_API ggm_status ggm_experiment_run(const ggm_experiment* x, ggm_table** out);
GGM_API void ggm_experiment_free(ggm_experiment* x);

GGM_API size_t ggm_table_rows(const ggm_table* t);
/* method: 0 GL, 1 GGL, 2 LVGL, 3 Joint. */
GGM_API double ggm_table_xaxis(const ggm_table* t, size_t row);
GGM_API double ggm_table_mean(const ggm_table* t, size_t row, int method);
GGM_API double ggm_table_median(const ggm_table* t, size_t row, int method);
GGM_API size_t ggm_table_solver_invocations(const ggm_table* t);
GGM_API ggm_status ggm_table_write_csv(const ggm_table* t, const char* path);
/* Writes the run manifest for the experiment that produced t. */
GGM_API ggm_status ggm_table_write_manifest(const ggm_table* t, const char* path);
GGM_API void ggm_table_free(ggm_table* t);

#ifdef __cplusplus
}
#endif

#endif /* GGM_GGM_H */
