/* C interface to the curvature toolkit. All functions return rp_status;
 * on failure rp_last_error() describes the problem for the calling thread.
 * Strings returned through char** are owned by the caller and released
 * with rp_string_free. */
#ifndef RICPERP_RICPERP_H
#define RICPERP_RICPERP_H

#include <stdint.h>

#if defined(_WIN32)
#define RP_API __declspec(dllexport)
#else
#define RP_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum rp_status {
  RP_OK = 0,
  RP_ERR_INVALID_ARGUMENT = 1,
  RP_ERR_SYMMETRY_VIOLATION = 2,
  RP_ERR_NON_FINITE = 3,
  RP_ERR_DIMENSION_MISMATCH = 4,
  RP_ERR_SINGULAR_METRIC = 5,
  RP_ERR_ZERO_VECTOR = 6,
  RP_ERR_NON_UNITARY_FRAME = 7,
  RP_ERR_UNSUPPORTED_FAMILY_RANK = 8,
  RP_ERR_OUT_OF_THEOREM_RANGE = 9,
  RP_ERR_LAMBDA_TOO_SMALL = 10,
  RP_ERR_EMPTY_GRID = 11,
  RP_ERR_INDEX_OUT_OF_RANGE = 12,
  RP_ERR_PARSE = 13,
  RP_ERR_IO = 14,
  RP_ERR_INTERNAL = 99
} rp_status;

typedef enum rp_verdict {
  RP_VERDICT_POSITIVE = 0,
  RP_VERDICT_NONNEGATIVE_BOUNDARY = 1,
  RP_VERDICT_FAILS = 2
} rp_verdict;

typedef enum rp_quantity {
  RP_QUANTITY_RIC_PERP_MIN = 0,
  RP_QUANTITY_H_MAX = 1,
  RP_QUANTITY_QB_MIN = 2,
  RP_QUANTITY_NU = 3
} rp_quantity;

/* Curvature tensor together with its metric at a point. */
typedef struct rp_tensor rp_tensor;

typedef struct rp_certify_options {
  int restarts;
  int max_iters;
  double step_tol;
  uint64_t seed;
  int grid_oracle; /* nonzero: dense-grid cross-check for n <= 3 */
  int threads;     /* 0: RICPERP_THREADS or hardware concurrency */
} rp_certify_options;

RP_API const char* rp_last_error(void);
RP_API const char* rp_status_name(rp_status status);
RP_API void rp_string_free(char* s);
RP_API void rp_certify_options_default(rp_certify_options* opts);

/* Tensors. Components are interleaved (re, im) pairs in [i][j][k][l] order;
 * metric may be NULL for the identity. */
RP_API rp_status rp_tensor_from_components(int n, const double* r_re_im, const double* metric_re_im,
                                           rp_tensor** out);
RP_API rp_status rp_tensor_from_json(const char* text, rp_tensor** out);
RP_API rp_status rp_tensor_load(const char* path, rp_tensor** out);
RP_API rp_status rp_tensor_save(const rp_tensor* t, const char* path);
RP_API rp_status rp_tensor_to_json(const rp_tensor* t, char** out);
RP_API int rp_tensor_dim(const rp_tensor* t);
RP_API void rp_tensor_free(rp_tensor* t);

/* Model spaces. */
RP_API rp_status rp_model_fubini_study(int n, rp_tensor** out);
RP_API rp_status rp_model_grassmannian_dual(int p, int q, rp_tensor** out);
RP_API rp_status rp_model_symmetric_dual(int r, rp_tensor** out);
RP_API rp_status rp_model_curve_product(double k1, double k2, rp_tensor** out);
RP_API rp_status rp_model_product(const rp_tensor* a, const rp_tensor* b, rp_tensor** out);

/* Pointwise quantities; x holds n interleaved (re, im) pairs. */
RP_API rp_status rp_ric_perp(const rp_tensor* t, const double* x_re_im, double* out);
RP_API rp_status rp_holo_sect(const rp_tensor* t, const double* x_re_im, double* out);
RP_API rp_status rp_nu_max(const rp_tensor* t, double* out);
RP_API rp_status rp_einstein_check(const rp_tensor* t, double tol, int* is_einstein, double* mu);

/* Certification. report_json, value and verdict may each be NULL. */
RP_API rp_status rp_certify(const rp_tensor* t, rp_quantity q, const rp_certify_options* opts,
                            char** report_json, double* value, rp_verdict* verdict);
RP_API rp_status rp_flat_classify(const rp_tensor* t, double tol, uint64_t seed, char** report_json);

/* Homogeneous space catalog. families_csv like "B,C,D". */
RP_API rp_status rp_cspace_classify(const char* family, int rank, int node, char** record_json);
RP_API rp_status rp_cspace_table(const char* families_csv, int max_rank, char** table_json);

/* Projectivized split bundles over P^n; lambda <= 0 skips the curvature check. */
RP_API rp_status rp_projbundle_check(int base_dim, const int* degrees, int r, double lambda,
                                     const rp_certify_options* opts, char** report_json,
                                     rp_verdict* verdict);
RP_API rp_status rp_projbundle_lambda_search(int base_dim, const int* degrees, int r, const double* grid,
                                             int grid_len, const rp_certify_options* opts,
                                             char** report_json);
/* Bundle input document to the curvature tensor of the total space (orthonormal frame). */
RP_API rp_status rp_projbundle_curvature(const char* input_json, rp_tensor** out);

#ifdef __cplusplus
}
#endif

#endif
