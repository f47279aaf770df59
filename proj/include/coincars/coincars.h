/* C interface to the coincars simulator.
 *
 * Every function returns a coincars_status; on failure the message is
 * available from coincars_last_error() on the calling thread until the next
 * call into the library. Handles are opaque and owned by the caller, who
 * releases them with the matching *_free function (free(NULL) is a no-op).
 * Size/buffer pairs follow one convention: *len receives the required size,
 * and nothing is copied when cap is too small.
 */
#ifndef COINCARS_H
#define COINCARS_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  if defined(COINCARS_BUILDING)
#    define COINCARS_API __declspec(dllexport)
#  else
#    define COINCARS_API __declspec(dllimport)
#  endif
#else
#  define COINCARS_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum coincars_status {
    COINCARS_OK = 0,
    COINCARS_ERR_ARGUMENT = 1, /* null handle, bad size, value out of range */
    COINCARS_ERR_CONFIG = 2,   /* schema or input-file problem */
    COINCARS_ERR_DOMAIN = 3,   /* numerical-domain violation */
    COINCARS_ERR_IO = 4,
    COINCARS_ERR_INTERNAL = 5
} coincars_status;

COINCARS_API const char* coincars_last_error(void);
COINCARS_API const char* coincars_version(void);
/* 0 = hardware concurrency. */
COINCARS_API void coincars_set_max_threads(unsigned threads);

/* Scenarios */
typedef struct coincars_scenario coincars_scenario;

/* Accepts a scenario config or a sidecar written by the CLI. */
COINCARS_API coincars_status coincars_scenario_load(const char* path, coincars_scenario** out);
COINCARS_API coincars_status coincars_scenario_parse(const char* json_text, const char* base_dir,
                                                     coincars_scenario** out);
COINCARS_API void coincars_scenario_free(coincars_scenario* sc);
COINCARS_API coincars_status coincars_scenario_set_seed(coincars_scenario* sc, uint64_t seed);
COINCARS_API coincars_status coincars_scenario_get_seed(const coincars_scenario* sc, uint64_t* seed);
COINCARS_API coincars_status coincars_scenario_set_realizations(coincars_scenario* sc, uint64_t m);
COINCARS_API coincars_status coincars_scenario_get_realizations(const coincars_scenario* sc, uint64_t* m);
/* Fully resolved config as JSON text (NUL-terminated; *len counts the NUL). */
COINCARS_API coincars_status coincars_scenario_resolved_json(const coincars_scenario* sc, char* buf, size_t cap,
                                                             size_t* len);

/* Interference maps: intensity over (omega, Phi), omega rows, Phi columns. */
typedef struct coincars_map coincars_map;

COINCARS_API coincars_status coincars_map_build(const coincars_scenario* sc, coincars_map** out);
COINCARS_API void coincars_map_free(coincars_map* map);
COINCARS_API coincars_status coincars_map_dims(const coincars_map* map, size_t* n_omega, size_t* n_phase);
COINCARS_API coincars_status coincars_map_grids(const coincars_map* map, double* omega_start, double* omega_step,
                                                double* phase_start, double* phase_step);
COINCARS_API coincars_status coincars_map_values(const coincars_map* map, double* out, size_t cap);
COINCARS_API coincars_status coincars_map_strip_metric(const coincars_map* map, double* metric);
COINCARS_API coincars_status coincars_map_write_csv(const coincars_map* map, const char* path);

/* Frequency-integrated fringe curves */
typedef struct coincars_curve coincars_curve;

typedef struct coincars_visibility {
    int defined;
    double v_raw;
    double v_fit;
    double offset;
    double amplitude;
    double phase;
    double phase_max;
    double phase_min;
    double residual;
} coincars_visibility;

COINCARS_API coincars_status coincars_map_integrate(const coincars_map* map, coincars_curve** out);
COINCARS_API void coincars_curve_free(coincars_curve* curve);
COINCARS_API coincars_status coincars_curve_size(const coincars_curve* curve, size_t* n);
COINCARS_API coincars_status coincars_curve_values(const coincars_curve* curve, double* phase, double* intensity,
                                                   size_t cap);
COINCARS_API coincars_status coincars_curve_visibility(const coincars_curve* curve, coincars_visibility* report);
COINCARS_API coincars_status coincars_curve_write_csv(const coincars_curve* curve, const char* path);

typedef struct coincars_equalization {
    double attenuation;
    double visibility;
    double unequalized_visibility;
} coincars_equalization;

COINCARS_API coincars_status coincars_equalize_nrb(const coincars_scenario* sc, coincars_equalization* out);

/* Probe spectrum of the scenario's preview realization plus its temporal
 * profile. Either path may be NULL. */
COINCARS_API coincars_status coincars_probe_preview(const coincars_scenario* sc, const char* spectrum_csv,
                                                    const char* temporal_csv, double* correlation_length_cm1);

/* Layered media */
typedef struct coincars_stack coincars_stack;

COINCARS_API coincars_status coincars_stack_load(const char* path, coincars_stack** out);
COINCARS_API coincars_status coincars_stack_parse(const char* text, coincars_stack** out);
COINCARS_API coincars_status coincars_stack_random(size_t layers, double index_lo, double index_hi,
                                                   double thickness_lo_um, double thickness_hi_um, uint64_t seed,
                                                   coincars_stack** out);
COINCARS_API void coincars_stack_free(coincars_stack* stack);
COINCARS_API coincars_status coincars_stack_layer_count(const coincars_stack* stack, size_t* n);
/* Stack in the plain-text file format, round-trip precise. */
COINCARS_API coincars_status coincars_stack_text(const coincars_stack* stack, char* buf, size_t cap, size_t* len);
COINCARS_API coincars_status coincars_tmm_evaluate(const coincars_stack* stack, double wavenumber_cm1, double* t_re,
                                                   double* t_im, double* r_re, double* r_im);
COINCARS_API coincars_status coincars_tmm_write_csv(const coincars_stack* stack, double start_cm1, double step_cm1,
                                                    size_t count, const char* path);

/* Single-line pair analytics */
COINCARS_API coincars_status coincars_pair_visibility(double w_rs, int use_quadrature, double* v);
COINCARS_API coincars_status coincars_sweep_wrs_write_csv(double from, double to, double step, const char* path,
                                                          size_t* rows);

COINCARS_API coincars_status coincars_write_text_atomic(const char* path, const char* text);

#ifdef __cplusplus
}
#endif

#endif /* COINCARS_H */
