/* Entangled-photon ghost-imaging simulator: C interface.
 *
 * All objects are opaque and owned by the caller once returned; release
 * them with the matching *_free function. Functions returning gs_status
 * leave a message retrievable with gs_last_error() on failure (per thread).
 * Lengths are in millimetres unless a name says otherwise. */
#ifndef GHOSTSIM_H
#define GHOSTSIM_H

#include <stddef.h>

#if defined(_WIN32)
#  if defined(GHOSTSIM_BUILDING)
#    define GS_API __declspec(dllexport)
#  else
#    define GS_API __declspec(dllimport)
#  endif
#else
#  define GS_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum gs_status {
  GS_OK = 0,
  GS_ERR_INVALID_ARGUMENT = 1,
  GS_ERR_NUMERIC_DOMAIN = 2,
  GS_ERR_TRUNCATION = 3,
  GS_ERR_NORMALIZATION = 4,
  GS_ERR_UNDEFINED_CONTRAST = 5,
  GS_ERR_PARSE = 6,
  GS_ERR_CONFIG = 7,
  GS_ERR_IO = 8,
  GS_ERR_INTERNAL = 9
} gs_status;

typedef enum gs_format { GS_FORMAT_CSV = 0, GS_FORMAT_JSON = 1 } gs_format;

/* Per-point flag bits. */
#define GS_FLAG_G2_ZERO 1u
#define GS_FLAG_SNR_INF 2u
#define GS_FLAG_NOISE_CLAMPED 4u

typedef struct gs_config gs_config;
typedef struct gs_scan gs_scan;
typedef struct gs_sweep gs_sweep;

typedef struct gs_point {
  double x_r_mm;
  double g2;
  double g2_norm;
  double dg2;
  double dg2_norm;
  double dg2_avg_norm;
  double snr;
  double snr_avg;
  unsigned flags;
} gs_point;

typedef struct gs_sweep_summary {
  double aperture_mm;
  double peak_snr;
  double contrast; /* valid only when has_contrast != 0 */
  int has_contrast;
  double noise_amplitude;
  size_t n_peaks;
} gs_sweep_summary;

/* Last error message on this thread; never NULL. */
GS_API const char* gs_last_error(void);
GS_API const char* gs_status_name(gs_status status);

/* Configuration ----------------------------------------------------------- */
GS_API gs_status gs_config_load(const char* path, gs_config** out);
/* base_dir resolves relative tabulated paths; NULL means the working directory. */
GS_API gs_status gs_config_parse(const char* json_text, const char* base_dir, gs_config** out);
/* Fully resolved JSON; free with gs_string_free. */
GS_API gs_status gs_config_to_json(const gs_config* config, char** out);
GS_API gs_status gs_config_output_path(const gs_config* config, char** out);
GS_API gs_status gs_config_output_format(const gs_config* config, gs_format* out);
/* Requires a rect pupil. */
GS_API gs_status gs_config_set_aperture(gs_config* config, double D_mm);
GS_API gs_status gs_config_set_grids(gs_config* config, long long n_x, long long n_xp);
GS_API void gs_config_free(gs_config* config);
GS_API void gs_string_free(char* s);

/* Scan -------------------------------------------------------------------- */
/* threads = 0 uses all hardware threads; GHOSTSIM_THREADS caps either way. */
GS_API gs_status gs_scan_run(const gs_config* config, unsigned threads, gs_scan** out);
GS_API size_t gs_scan_size(const gs_scan* scan);
GS_API gs_status gs_scan_point(const gs_scan* scan, size_t index, gs_point* out);
GS_API double gs_scan_g2_max(const gs_scan* scan);
/* GS_ERR_UNDEFINED_CONTRAST when fewer than two peaks are found. */
GS_API gs_status gs_scan_contrast(const gs_scan* scan, double* out);
/* Atomic: on failure no file is left behind. */
GS_API gs_status gs_scan_write(const gs_scan* scan, const char* path, gs_format format);
GS_API void gs_scan_free(gs_scan* scan);

/* Aperture sweep (reference_arm.pupil.rect.D_mm) --------------------------- */
GS_API gs_status gs_sweep_run(const gs_config* config, const double* apertures_mm, size_t count, unsigned threads,
                              gs_sweep** out);
GS_API size_t gs_sweep_size(const gs_sweep* sweep);
GS_API gs_status gs_sweep_summary_at(const gs_sweep* sweep, size_t index, gs_sweep_summary* out);
GS_API gs_status gs_sweep_peak_position(const gs_sweep* sweep, size_t index, size_t peak, double* out);
/* Number of adjacent pairs where contrast fails to grow with aperture. */
GS_API size_t gs_sweep_monotonicity_violations(const gs_sweep* sweep);
GS_API gs_status gs_sweep_write_json(const gs_sweep* sweep, const char* path);
GS_API void gs_sweep_free(gs_sweep* sweep);

/* Built-in oracle suite --------------------------------------------------- */
typedef void (*gs_check_callback)(const char* name, int passed, const char* detail, void* user);
GS_API gs_status gs_validate(gs_check_callback callback, void* user, int* all_passed);

/* Test hook: multiplies every computed normalization scale. 1.0 restores. */
GS_API void gs_debug_set_norm_fault(double factor);

#ifdef __cplusplus
}
#endif

#endif
