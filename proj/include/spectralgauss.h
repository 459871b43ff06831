#ifndef SPECTRALGAUSS_H
#define SPECTRALGAUSS_H

#include <stddef.h>
#include <stdint.h>

#if defined(SG_BUILDING_LIBRARY)
#define SG_API __attribute__((visibility("default")))
#else
#define SG_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum sg_status {
  SG_OK = 0,
  SG_ERR_DOMAIN = 1,   /* argument outside the mathematical domain */
  SG_ERR_CONFIG = 2,   /* malformed or inconsistent configuration */
  SG_ERR_NUMERIC = 3,  /* root finding, factorization or quadrature failed */
  SG_ERR_NULL = 4,     /* required pointer was NULL */
  SG_ERR_BUFFER = 5    /* output buffer too small; *needed tells the size */
} sg_status;

/* Message of the last failing call on this thread ("" after success). */
SG_API const char* sg_last_error(void);
SG_API const char* sg_version(void);

/* Special functions. */
SG_API sg_status sg_bessel_j(double nu, double x, double* out);
/* First `count` positive zeros of J_nu(r x); residuals may be NULL. */
SG_API sg_status sg_bessel_zeros(double nu, double r, size_t count, double* roots, double* residuals);

/* Reproducing kernel quantities of the FBM chain. */
SG_API sg_status sg_fbm_components(double H, double t, double z, double out4[4]); /* A, B, C, D */
SG_API sg_status sg_fbm_covariance(double H, int chain_norm, double s, double t, double* out);

/* Paley-Wiener expansions. */
typedef struct sg_pw sg_pw;

enum { SG_PW_INCREMENT = 0, SG_PW_SINCOS = 1 };
enum { SG_NORM_STANDARD = 0, SG_NORM_CHAIN = 1 };
enum { SG_MART_EVEN = 0, SG_MART_ODD = 1, SG_MART_EVEN_BRIDGE = 2 };

SG_API sg_status sg_pw_create_fbm(double H, double r, size_t N, int basis, int norm, sg_pw** out);
/* AR(n) with Theta(iz) = prod (iz - phi_k); n = 1 is OU with theta = phi_1. */
SG_API sg_status sg_pw_create_stationary(const double* phi, size_t n, double sigma2, double r, size_t N,
                                         sg_pw** out);
SG_API sg_status sg_pw_create_martingale(double H, double r, size_t N, int which, sg_pw** out);
SG_API void sg_pw_destroy(sg_pw* pw);

SG_API sg_status sg_pw_terms(const sg_pw* pw, size_t* out);
SG_API sg_status sg_pw_window(const sg_pw* pw, double* lo, double* hi);
/* lambda_n and sigma_n^2 for the first min(cap, terms) entries. */
SG_API sg_status sg_pw_spectrum(const sg_pw* pw, double* freq, double* var, size_t cap);
/* One real path on `grid` from stream (seed, stream). Complex increment
   expansions write the real part to `out` and the imaginary part to `imag`
   (which may be NULL for real bases). */
SG_API sg_status sg_pw_sample(const sg_pw* pw, uint64_t seed, uint64_t stream, const double* grid, size_t n,
                              double* out, double* imag);
SG_API sg_status sg_pw_covariance(const sg_pw* pw, double s, double t, double* out);
SG_API sg_status sg_pw_json(const sg_pw* pw, char* buf, size_t cap, size_t* needed);

/* Karhunen-Loeve bases. The config is a JSON object with "kernel" (bm,
   bm-bridge, ou, ar, fbm-even-martingale, fbm-odd-martingale,
   fbm-even-bridge, fbm-odd-bridge, ext-even-gamma, ext-odd-alpha), "hurst",
   "r", "theta", "sigma2", "phi" and "count". */
typedef struct sg_kl sg_kl;

SG_API sg_status sg_kl_create(const char* config_json, sg_kl** out);
SG_API void sg_kl_destroy(sg_kl* kl);
SG_API sg_status sg_kl_size(const sg_kl* kl, size_t* out);
SG_API sg_status sg_kl_eigenvalues(const sg_kl* kl, double* out, size_t cap);
SG_API sg_status sg_kl_eval(const sg_kl* kl, size_t n, double t, double* out);
SG_API sg_status sg_kl_kernel(const sg_kl* kl, double s, double t, double* out);
SG_API sg_status sg_kl_json(const sg_kl* kl, char* buf, size_t cap, size_t* needed);

/* Text-producing runs: JSON config in, text out. `pass` (may be NULL)
   reports the gate outcome where one exists. */
SG_API sg_status sg_kl_table_csv(const char* config_json, char* buf, size_t cap, size_t* needed, int* pass);
SG_API sg_status sg_nystrom_json(const char* config_json, char* buf, size_t cap, size_t* needed);
SG_API sg_status sg_rate_json(const char* config_json, char* buf, size_t cap, size_t* needed);
SG_API sg_status sg_martingale_json(const char* config_json, char* buf, size_t cap, size_t* needed);

/* Path transforms on a uniform grid starting at 0. */
enum { SG_TRANSFORM_EVEN = 0, SG_TRANSFORM_ODD = 1, SG_TRANSFORM_SINGLE_SIDED = 2 };
/* Forward transform at every grid time (first half of the grid for the
   single-sided transform); `out` holds n values ((n - 1)/2 + 1 single-sided). */
SG_API sg_status sg_martingale_forward(double H, int transform, const double* grid, const double* x, size_t n,
                                       double* out);
/* Endpoint reconstruction from martingale values on the grid. */
SG_API sg_status sg_martingale_inverse(double H, int transform, const double* grid, const double* m, size_t n,
                                       double* out);

/* Sampling runs producing CSV files and a manifest in memory. */
typedef struct sg_sample_result sg_sample_result;

SG_API sg_status sg_sample_run(const char* config_json, unsigned jobs, sg_sample_result** out);
SG_API void sg_sample_result_destroy(sg_sample_result* res);
SG_API size_t sg_sample_result_count(const sg_sample_result* res);
/* Index `count` returns the manifest. Pointers live until destroy. */
SG_API sg_status sg_sample_result_file(const sg_sample_result* res, size_t i, const char** name,
                                       const char** contents, size_t* length);

/* Acceptance suite. The callback receives one formatted line per criterion. */
typedef void (*sg_verify_callback)(int id, int pass, const char* line, void* user);
SG_API sg_status sg_verify(const char* config_json, sg_verify_callback cb, void* user, int* failures);

#ifdef __cplusplus
}
#endif

#endif
