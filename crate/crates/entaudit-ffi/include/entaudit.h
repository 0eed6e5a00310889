#ifndef ENTAUDIT_H
#define ENTAUDIT_H

/* Generated by cbindgen from entaudit-ffi; do not edit by hand. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

// Status code returned by every fallible entry point. Anything other
// than `EA_OK` leaves a message readable through `ea_last_error`.
typedef enum ea_status {
  // The call succeeded.
  EA_OK = 0,
  // A required pointer argument was null.
  EA_NULL_ARGUMENT = 1,
  // An argument was out of range or otherwise unusable.
  EA_INVALID_ARGUMENT = 2,
  // A name or JSON payload failed to parse or validate.
  EA_PARSE_ERROR = 3,
  // The operation is undefined for this measure/state combination.
  EA_UNSUPPORTED = 4,
  // An internal invariant failed; the library state is unharmed.
  EA_INTERNAL_ERROR = 5,
} ea_status;

// A registered entanglement measure. Opaque.
typedef struct ea_measure ea_measure;

// A bipartite state (pure vector or density operator). Opaque.
typedef struct ea_state ea_state;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Parses a state from its JSON form.
//
// On success `*out` owns the new state; release it with `ea_state_free`.
//
// # Safety
//
// `json` must be a NUL-terminated string and `out` a valid pointer.
enum ea_status ea_state_from_json(const char *json, struct ea_state **out);

// Creates a Haar-random pure state on factor dimensions `d1 x d2`,
// deterministic in `seed`.
//
// # Safety
//
// `out` must be a valid pointer.
enum ea_status ea_state_random_pure(size_t d1, size_t d2, uint64_t seed, struct ea_state **out);

// Serializes a state to its JSON form. The returned string is owned by
// the caller; release it with `ea_string_free`.
//
// # Safety
//
// `state` must come from this library and `out` must be a valid pointer.
enum ea_status ea_state_to_json(const struct ea_state *state, char **out);

// Reports the factor dimensions of a state.
//
// # Safety
//
// All pointers must be valid.
enum ea_status ea_state_dims(const struct ea_state *state, size_t *d1, size_t *d2);

// Reports whether a state is pure (`1`) or mixed (`0`).
//
// # Safety
//
// All pointers must be valid.
enum ea_status ea_state_is_pure(const struct ea_state *state, bool *out);

// Releases a state created by this library. Null is a no-op.
//
// # Safety
//
// `state` must come from this library and must not be used afterwards.
void ea_state_free(struct ea_state *state);

// Resolves a measure by name: `svn`, `gamma`, `shannon-schmidt`, or
// `svn-scaled:<c>` with a positive finite `c`.
//
// # Safety
//
// `name` must be a NUL-terminated string and `out` a valid pointer.
enum ea_status ea_measure_new(const char *name, struct ea_measure **out);

// Releases a measure created by this library. Null is a no-op.
//
// # Safety
//
// `measure` must come from this library and must not be used afterwards.
void ea_measure_free(struct ea_measure *measure);

// Evaluates a measure on a state, in nats. Mixed states require a
// measure with a mixed-state evaluator (`EA_UNSUPPORTED` otherwise).
//
// # Safety
//
// All pointers must be valid.
enum ea_status ea_evaluate(const struct ea_measure *measure,
                           const struct ea_state *state,
                           double *out);

// Writes the Schmidt coefficients of a pure state (descending) into
// `buffer`. Call with a null `buffer` to query the count via `written`;
// with a non-null `buffer`, `capacity` must cover the full count.
//
// # Safety
//
// `state` and `written` must be valid; `buffer`, when non-null, must
// point to at least `capacity` doubles.
enum ea_status ea_schmidt_coefficients(const struct ea_state *state,
                                       double *buffer,
                                       size_t capacity,
                                       size_t *written);

// Runs one postulate audit (axiom names as in the CLI: P1..P4, M1..M5,
// L4, L7, PROP6) and returns the report as JSON. The status reflects
// execution, not the audit verdict — read `passed` from the report.
//
// # Safety
//
// `measure` must come from this library; `axiom` must be NUL-terminated;
// `report_json` must be valid. Release the string with `ea_string_free`.
enum ea_status ea_audit(const struct ea_measure *measure,
                        const char *axiom,
                        size_t samples,
                        uint64_t seed,
                        double tolerance,
                        char **report_json);

// Runs a named demonstration (`p4-violation`, `m5-violation`,
// `trace-asymmetry`) and returns its report as JSON.
//
// # Safety
//
// `name` must be NUL-terminated and `report_json` valid. Release the
// string with `ea_string_free`.
enum ea_status ea_demo(const char *name, char **report_json);

// Releases a string returned by this library. Null is a no-op.
//
// # Safety
//
// `s` must come from this library and must not be used afterwards.
void ea_string_free(char *s);

// Returns the explanation of the most recent failure on this thread, or
// null when the last call succeeded. The pointer stays valid until the
// next library call on the same thread; do not free it.
const char *ea_last_error(void);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* ENTAUDIT_H */
