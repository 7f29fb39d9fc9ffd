#ifndef TRO_H
#define TRO_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Highest severity in a validation report.
 */
typedef enum TroSeverity {
  TRO_SEVERITY_NONE = 0,
  TRO_SEVERITY_INFO = 1,
  TRO_SEVERITY_WARN = 2,
  TRO_SEVERITY_ERROR = 3,
} TroSeverity;

typedef enum TroStatus {
  TRO_STATUS_OK = 0,
  TRO_STATUS_NULL_ARGUMENT = 1,
  TRO_STATUS_INVALID_UTF8 = 2,
  TRO_STATUS_PARSE_ERROR = 3,
  TRO_STATUS_INGEST_ERROR = 4,
  TRO_STATUS_INVALID_ARGUMENT = 5,
  TRO_STATUS_PANIC = 6,
} TroStatus;

/**
 * Opaque graph handle.
 */
typedef struct TroGraph TroGraph;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Last error message on this thread, or null. Valid until the next call
 * into this library from the same thread; do not free.
 */
const char *tro_last_error(void);

/**
 * # Safety
 * `s` must be null or a string returned by this library and not yet freed.
 */
void tro_string_free(char *s);

/**
 * # Safety
 * `out` must be a valid pointer.
 */
enum TroStatus tro_graph_new(struct TroGraph **out);

/**
 * # Safety
 * `g` must be null or a handle from this library that has not been freed.
 */
void tro_graph_free(struct TroGraph *g);

/**
 * Number of triples, or 0 for a null handle.
 *
 * # Safety
 * `g` must be null or a live handle.
 */
size_t tro_graph_len(const struct TroGraph *g);

/**
 * # Safety
 * `text` must be a NUL-terminated string and `out` a valid pointer.
 */
enum TroStatus tro_graph_parse_turtle(const char *text, struct TroGraph **out);

/**
 * Builds a graph from contract and role CSV text. `base` may be null for
 * the default data namespace. `rejected` may be null; otherwise it receives
 * the number of rows skipped as invalid.
 *
 * # Safety
 * String arguments must be null or NUL-terminated; `out` must be valid.
 */
enum TroStatus tro_graph_from_csv(const char *contracts_csv,
                                  const char *roles_csv,
                                  const char *base,
                                  struct TroGraph **out,
                                  size_t *rejected);

/**
 * # Safety
 * `g` must be a live handle and `out` a valid pointer.
 */
enum TroStatus tro_graph_to_turtle(const struct TroGraph *g, char **out);

/**
 * Sorted N-Triples. Fails with `InvalidArgument` if the graph has blank nodes.
 *
 * # Safety
 * `g` must be a live handle and `out` a valid pointer.
 */
enum TroStatus tro_graph_to_ntriples(const struct TroGraph *g, char **out);

/**
 * Validates against the builtin vocabulary. `report_json` receives the JSON
 * report; `max` (nullable) the highest severity found.
 *
 * # Safety
 * `g` must be a live handle and `report_json` a valid pointer.
 */
enum TroStatus tro_graph_validate(const struct TroGraph *g,
                                  char **report_json,
                                  enum TroSeverity *max);

/**
 * Candidate conflict-of-interest findings as a JSON array. Does not
 * validate first.
 *
 * # Safety
 * `g` must be a live handle and `out` a valid pointer.
 */
enum TroStatus tro_graph_detect(const struct TroGraph *g, char **out);

/**
 * The builtin vocabulary as a Turtle ontology.
 *
 * # Safety
 * `out` must be a valid pointer.
 */
enum TroStatus tro_vocabulary_turtle(char **out);

/**
 * # Safety
 * `name` must be NUL-terminated and `out` a valid pointer.
 */
enum TroStatus tro_normalize_name(const char *name, char **out);

/**
 * Dates are `YYYY-MM-DD`; `end` and `base` may be null.
 *
 * # Safety
 * String arguments must be null or NUL-terminated; `out` must be valid.
 */
enum TroStatus tro_mint_role_iri(const char *base,
                                 const char *person,
                                 const char *role_type,
                                 const char *start,
                                 const char *end,
                                 const char *org,
                                 char **out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* TRO_H */
