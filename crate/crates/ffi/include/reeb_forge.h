#ifndef REEB_FORGE_H
#define REEB_FORGE_H

/* Generated by cbindgen; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

#define REEB_OK 0

#define REEB_REJECTED 1

#define REEB_INVALID_INPUT 2

#define REEB_INTERNAL 3

#define REEB_NULL_POINTER 4

// Parsed and validated graph with its function.
typedef struct ReebGraph ReebGraph;

// Construction plan.
typedef struct ReebPlan ReebPlan;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Parses and validates a graph document.
//
// # Safety
// `json` must be a NUL-terminated string; `out` must be writable.
int32_t reeb_graph_parse(const char *json, struct ReebGraph **out);

// # Safety
// `graph` must come from [`reeb_graph_parse`] and not be freed yet, or be null.
void reeb_graph_free(struct ReebGraph *graph);

// Writes the realizability report as JSON. Returns `REEB_OK` if accepted,
// `REEB_REJECTED` otherwise; the report is written in both cases.
//
// # Safety
// `graph` must be a live handle; `report_json` must be writable.
int32_t reeb_check(const struct ReebGraph *graph, char **report_json);

// Builds a plan for an accepted graph.
//
// # Safety
// `graph` must be a live handle; `out` must be writable.
int32_t reeb_plan(const struct ReebGraph *graph, struct ReebPlan **out);

// Canonical JSON of a plan.
//
// # Safety
// `plan` must be a live handle; `out` must be writable.
int32_t reeb_plan_to_json(const struct ReebPlan *plan, char **out);

// # Safety
// `json` must be a NUL-terminated string; `out` must be writable.
int32_t reeb_plan_from_json(const char *json, struct ReebPlan **out);

// # Safety
// `plan` must come from this library and not be freed yet, or be null.
void reeb_plan_free(struct ReebPlan *plan);

// Verifies `plan` against `graph`. `REEB_REJECTED` if verification fails.
//
// # Safety
// Both handles must be live.
int32_t reeb_verify(const struct ReebPlan *plan, const struct ReebGraph *graph);

// DOT rendering of a graph.
//
// # Safety
// `graph` must be a live handle; `out` must be writable.
int32_t reeb_export_dot(const struct ReebGraph *graph, char **out);

// # Safety
// `s` must come from this library and not be freed yet, or be null.
void reeb_string_free(char *s);

// Message of the last failed call on this thread, or null. Valid until
// the next call into the library on the same thread.
const char *reeb_last_error_message(void);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* REEB_FORGE_H */
