/* Split-step Fourier toolkit for the cubic NLS on the torus: C interface.
 *
 * Every function returns an ssfm_status. On failure the message is available
 * through ssfm_last_error() (per thread, valid until the next call).
 * Strings returned through char** are owned by the caller and released with
 * ssfm_string_free. Coefficient arrays are interleaved (re, im) doubles in the
 * grid's mode order: j+K per axis, last axis fastest.
 */
#ifndef SSFM_SSFM_H
#define SSFM_SSFM_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define SSFM_API __declspec(dllexport)
#else
#define SSFM_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum ssfm_status {
  SSFM_OK = 0,
  SSFM_ASSUMPTION_FAILED = 1,
  SSFM_CONFIG_ERROR = 2,
  SSFM_BLOWUP = 3,
  SSFM_INVALID_ARGUMENT = 4,
  SSFM_NUMERICAL_ERROR = 5,
  SSFM_IO_ERROR = 6,
  SSFM_INTERNAL_ERROR = 7
} ssfm_status;

typedef enum ssfm_scheme {
  SSFM_LIE_TROTTER = 0,
  SSFM_STRANG_LINEAR_OUTSIDE = 1,
  SSFM_STRANG_NONLINEAR_OUTSIDE = 2
} ssfm_scheme;

typedef struct ssfm_config ssfm_config;
typedef struct ssfm_field ssfm_field;

SSFM_API const char* ssfm_version(void);
SSFM_API const char* ssfm_last_error(void);
SSFM_API void ssfm_string_free(char* s);

/* Run configuration: JSON object, unknown keys rejected. */
SSFM_API ssfm_status ssfm_config_parse(const char* json, ssfm_config** out);
SSFM_API ssfm_status ssfm_config_preset(const char* name, ssfm_config** out);
/* Overlay a JSON object of overrides (command-line flags, for instance). */
SSFM_API ssfm_status ssfm_config_merge(ssfm_config* cfg, const char* overrides_json);
SSFM_API ssfm_status ssfm_config_to_json(const ssfm_config* cfg, char** out);
SSFM_API void ssfm_config_free(ssfm_config* cfg);

/* Fields on the grid {-K..K-1}^d. n_coeffs counts complex entries: (2K)^d. */
SSFM_API ssfm_status ssfm_field_from_coeffs(int K, int d, const double* coeffs,
                                            size_t n_coeffs, ssfm_field** out);
SSFM_API ssfm_status ssfm_field_plane_wave(int K, int d, const int* ell, double rho,
                                           ssfm_field** out);
/* Random datum of the configuration (seed, epsilon, s, rho, ell). */
SSFM_API ssfm_status ssfm_field_random(const ssfm_config* cfg, ssfm_field** out);
SSFM_API size_t ssfm_field_size(const ssfm_field* f);
/* Copies 2 * ssfm_field_size(f) doubles into dst. */
SSFM_API ssfm_status ssfm_field_coeffs(const ssfm_field* f, double* dst, size_t n_doubles);
SSFM_API ssfm_status ssfm_field_sobolev_norm(const ssfm_field* f, double s, double* out);
SSFM_API ssfm_status ssfm_field_orbital_distance(const ssfm_field* f, const int* ell,
                                                 double s, double* out);
SSFM_API void ssfm_field_free(ssfm_field* f);

/* Advances f in place by n_steps steps. */
SSFM_API ssfm_status ssfm_integrate(ssfm_field* f, ssfm_scheme scheme, double h,
                                    int lambda, uint64_t n_steps);

SSFM_API ssfm_status ssfm_cfl_max_h(int d, int K, double rho0, int N, double* out);

/* Experiments. Reports are JSON documents written to *report_json. */
SSFM_API ssfm_status ssfm_check(const ssfm_config* cfg, char** report_json);
SSFM_API ssfm_status ssfm_simulate(const ssfm_config* cfg, char** summary_json);
/* Writes the CSV summary to *csv and per-point details to *rows_json (either may be NULL). */
SSFM_API ssfm_status ssfm_sweep(const ssfm_config* cfg, unsigned threads, char** csv,
                                char** rows_json);

#ifdef __cplusplus
}
#endif

#endif
