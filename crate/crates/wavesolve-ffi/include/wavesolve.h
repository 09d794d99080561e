#ifndef WAVESOLVE_H
#define WAVESOLVE_H

/* Generated by cbindgen; do not edit by hand. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

// Status codes of every fallible entry point.
typedef enum WsStatus {
  WS_STATUS_OK = 0,
  WS_STATUS_INVALID_ARGUMENT = 1,
  WS_STATUS_CONFIG_ERROR = 2,
  WS_STATUS_NUMERICAL_ERROR = 3,
  WS_STATUS_IO_ERROR = 4,
  WS_STATUS_INTERNAL_ERROR = 5,
} WsStatus;

// An opaque solver handle wrapping one run configuration.
typedef struct WsSolver WsSolver;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Library version as a static string (do not free).
const char *wavesolve_version(void);

// Latest error message of this thread, or NULL; free with
// `wavesolve_string_free`.
char *wavesolve_last_error(void);

// Creates a solver handle from a JSON configuration. Returns NULL on
// error (inspect `wavesolve_last_error`).
//
// # Safety
// `config_json` must be a valid NUL-terminated C string or NULL.
struct WsSolver *wavesolve_solver_new(const char *config_json);

// Destroys a handle created by `wavesolve_solver_new`.
//
// # Safety
// `solver` must be a pointer previously returned by `wavesolve_solver_new`
// and not yet freed; NULL is a no-op.
void wavesolve_solver_free(struct WsSolver *solver);

// Runs the handle's experiment; on success writes the report JSON to
// `report_out` (caller frees with `wavesolve_string_free`).
//
// # Safety
// `solver` must be a live handle and `report_out` a valid pointer.
enum WsStatus wavesolve_solver_run(const struct WsSolver *solver, char **report_out);

// One-shot convenience: config JSON in, report JSON out.
//
// # Safety
// `config_json` must be a valid NUL-terminated C string; `report_out` a
// valid pointer.
enum WsStatus wavesolve_run_json(const char *config_json, char **report_out);

// Runs both acoustic PML variants and returns the comparison report JSON.
//
// # Safety
// As for `wavesolve_run_json`.
enum WsStatus wavesolve_compare_json(const char *config_json, char **report_out);

// Solves and samples fields on a `grid` x `grid` mesh of cell centers,
// returning CSV text.
//
// # Safety
// As for `wavesolve_run_json`.
enum WsStatus wavesolve_export_csv(const char *config_json, size_t grid, char **csv_out);

// Frees a string returned by this library.
//
// # Safety
// `s` must originate from this library and not be freed twice; NULL is a
// no-op.
void wavesolve_string_free(char *s);

#ifdef __cplusplus
} // extern "C"
#endif // __cplusplus

#endif /* WAVESOLVE_H */
