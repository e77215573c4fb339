/*
 * tlnoise C API.
 *
 * Thermal-noise spectra of coaxial lines with reflective terminations and of
 * a four-port splitter with reflective arms, plus a bounded least-squares
 * fitter. Objects are opaque handles released with the matching *_free call.
 * Every fallible call returns a tln_status; on failure tln_last_error()
 * describes the problem (thread-local, valid until the next call on the
 * same thread).
 */
#ifndef TLNOISE_H
#define TLNOISE_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  if defined(TLNOISE_BUILDING)
#    define TLN_API __declspec(dllexport)
#  else
#    define TLN_API __declspec(dllimport)
#  endif
#else
#  define TLN_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum tln_status {
    TLN_OK = 0,
    TLN_INVALID_ARGUMENT = 1,
    TLN_PARSE_ERROR = 2,
    TLN_VALIDATION_ERROR = 3,
    TLN_IO_ERROR = 4,
    TLN_FORMAT_ERROR = 5,
    TLN_NON_MONOTONIC_FREQUENCY = 6,
    TLN_RESONANCE_POLE = 7,
    TLN_UNMATCHED_SOURCE = 8,
    TLN_UNMATCHED_J1 = 9,
    TLN_DEGENERATE_SOURCE = 10,
    TLN_NON_POSITIVE_ARGUMENT = 11,
    TLN_ZERO_REFERENCE = 12,
    TLN_INSUFFICIENT_DATA = 13,
    TLN_NOT_CONVERGED = 14,
    TLN_ORACLE_MISMATCH = 15,
    TLN_INTERNAL_ERROR = 16
} tln_status;

typedef enum tln_termination_kind {
    TLN_SHORT = 0,
    TLN_OPEN = 1,
    TLN_MATCHED = 2,
    TLN_FINITE = 3
} tln_termination_kind;

typedef struct tln_config tln_config;
typedef struct tln_spectrum tln_spectrum;
typedef struct tln_fit tln_fit;

TLN_API const char* tln_version(void);
TLN_API const char* tln_status_name(tln_status status);
TLN_API const char* tln_last_error(void);

/* Configuration documents (JSON with comments). */
TLN_API tln_status tln_config_parse(const char* text, tln_config** out);
TLN_API tln_status tln_config_load(const char* path, tln_config** out);
TLN_API void tln_config_free(tln_config* config);
/* 1 for splitter mode, 0 for single-cable. */
TLN_API int tln_config_is_splitter(const tln_config* config);

/* Display-level spectrum over the config grid; the normalized relative power
 * is kept alongside for tln_spectrum_write_csv(..., normalized = 1). */
TLN_API tln_status tln_simulate(const tln_config* config, tln_spectrum** out);
TLN_API tln_status tln_spectrum_read_csv(const char* path, tln_spectrum** out);
/* Atomic write. normalized = 0 writes display levels, 1 relative power. */
TLN_API tln_status tln_spectrum_write_csv(const tln_spectrum* spectrum, const char* path,
                                          int normalized);
TLN_API size_t tln_spectrum_size(const tln_spectrum* spectrum);
TLN_API tln_status tln_spectrum_point(const tln_spectrum* spectrum, size_t index,
                                      double* frequency_hz, double* level, int* excluded);
TLN_API void tln_spectrum_free(tln_spectrum* spectrum);

/* Long-format sweep CSV over arm 3 or 4. rows_written may be NULL. */
TLN_API tln_status tln_sweep_write_csv(const tln_config* config, int arm, double from_m,
                                       double to_m, int steps, const char* path,
                                       size_t* rows_written);

/* free_params is a comma-separated list such as "L,a,sn". max_iterations <= 0
 * keeps the config value. Returns TLN_OK or TLN_NOT_CONVERGED with *out set;
 * any other status leaves *out NULL. */
TLN_API tln_status tln_fit_run(const tln_config* config, const tln_spectrum* observed,
                               const char* free_params, int max_iterations, tln_fit** out);
TLN_API int tln_fit_converged(const tln_fit* fit);
TLN_API double tln_fit_rss(const tln_fit* fit);
TLN_API int tln_fit_iterations(const tln_fit* fit);
TLN_API tln_status tln_fit_value(const tln_fit* fit, const char* name, double* out);
TLN_API const char* tln_fit_report_json(const tln_fit* fit);
TLN_API const char* tln_fit_report_text(const tln_fit* fit);
TLN_API tln_status tln_fit_write_report(const tln_fit* fit, const char* path);
TLN_API void tln_fit_free(tln_fit* fit);

/* Bounce series against the closed form at seeded random frequencies.
 * Returns TLN_ORACLE_MISMATCH when the maximum relative deviation is not
 * below 1e-10; the outputs are filled either way. */
TLN_API tln_status tln_oracle_check(const tln_config* config, int terms, int samples,
                                    uint64_t seed, double* max_deviation, int* evaluated);

/* Pointwise primitives. */
TLN_API tln_status tln_reflection_coefficient(tln_termination_kind kind, double re, double im,
                                              double z0, double* out_re, double* out_im);
TLN_API tln_status tln_wavenumber(double frequency_hz, double n, double* out);
TLN_API tln_status tln_thermal_source_power(double temperature_k, double resistance_ohm,
                                            double* out);
/* Linear power in V^2/Hz of the configured topology at one frequency. */
TLN_API tln_status tln_model_power(const tln_config* config, double frequency_hz, double* out);
TLN_API tln_status tln_total_noise_power(const tln_config* config, double frequency_hz,
                                         double* out);
TLN_API tln_status tln_limit_noise_power(const tln_config* config, double frequency_hz, int m3,
                                         int m4, double* out);

#ifdef __cplusplus
}
#endif

#endif /* TLNOISE_H */
