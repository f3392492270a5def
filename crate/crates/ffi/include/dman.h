#ifndef DMAN_H
#define DMAN_H

/* Generated by cbindgen from src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Report rendering.
 */
typedef enum DmanFormat {
  DMAN_FORMAT_TEXT = 0,
  DMAN_FORMAT_JSON = 1,
} DmanFormat;

/**
 * Result codes.
 */
typedef enum DmanStatus {
  DMAN_STATUS_OK = 0,
  DMAN_STATUS_NULL_ARGUMENT = 1,
  DMAN_STATUS_INVALID_UTF8 = 2,
  DMAN_STATUS_SYNTAX_ERROR = 3,
  DMAN_STATUS_DUPLICATE_NAME = 4,
  DMAN_STATUS_UNKNOWN_REFERENCE = 5,
  DMAN_STATUS_INVALID_ARGUMENT = 6,
  DMAN_STATUS_PANIC = 7,
} DmanStatus;

/**
 * Overall verdict of a report.
 */
typedef enum DmanVerdict {
  DMAN_VERDICT_PASS = 0,
  DMAN_VERDICT_FAIL = 1,
  DMAN_VERDICT_UNATTESTED = 2,
} DmanVerdict;

/**
 * The report of a scene run.
 */
typedef struct DmanReport DmanReport;

/**
 * A parsed scene.
 */
typedef struct DmanScene DmanScene;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Parses and validates scene text.
 *
 * # Safety
 * `text` must be a nul-terminated string and `out` a valid pointer.
 */
enum DmanStatus dman_scene_parse(const char *text, struct DmanScene **out);

/**
 * Number of declarations in the scene, checks included.
 *
 * # Safety
 * `scene` must be null or a live handle.
 */
size_t dman_scene_len(const struct DmanScene *scene);

/**
 * Releases a scene. Null is ignored.
 *
 * # Safety
 * `scene` must be null or a handle not yet freed.
 */
void dman_scene_free(struct DmanScene *scene);

/**
 * Runs every check of the scene.
 *
 * # Safety
 * `scene` must be a live handle and `out` a valid pointer.
 */
enum DmanStatus dman_scene_run(const struct DmanScene *scene, struct DmanReport **out);

/**
 * Keeps the entries whose id starts with `prefix`, in a new report.
 *
 * # Safety
 * `report` must be a live handle, `prefix` a nul-terminated string and
 * `out` a valid pointer.
 */
enum DmanStatus dman_report_filter(const struct DmanReport *report,
                                   const char *prefix,
                                   struct DmanReport **out);

/**
 * Verdict of the whole report.
 *
 * # Safety
 * `report` must be a live handle.
 */
enum DmanVerdict dman_report_verdict(const struct DmanReport *report);

/**
 * Process exit code the command-line tool would use for this report.
 *
 * # Safety
 * `report` must be a live handle.
 */
int32_t dman_report_exit_code(const struct DmanReport *report);

/**
 * Status of the entry with the given id as a lowercase name, or null when
 * there is no such entry. The string is static.
 *
 * # Safety
 * `report` must be a live handle and `id` a nul-terminated string.
 */
const char *dman_report_entry_status(const struct DmanReport *report, const char *id);

/**
 * Renders the report. The string is released with [`dman_string_free`].
 *
 * # Safety
 * `report` must be a live handle and `out` a valid pointer.
 */
enum DmanStatus dman_report_render(const struct DmanReport *report,
                                   enum DmanFormat format,
                                   bool color,
                                   char **out);

/**
 * Releases a report. Null is ignored.
 *
 * # Safety
 * `report` must be null or a handle not yet freed.
 */
void dman_report_free(struct DmanReport *report);

/**
 * Releases a string returned by this library. Null is ignored.
 *
 * # Safety
 * `s` must be null or a string from [`dman_report_render`] not yet freed.
 */
void dman_string_free(char *s);

/**
 * Message of the last failure on this thread, or null. Valid until the next
 * call into the library on the same thread.
 */
const char *dman_last_error_message(void);

/**
 * Line of the last parse failure, or 0.
 */
size_t dman_last_error_line(void);

/**
 * Column of the last parse failure, or 0.
 */
size_t dman_last_error_col(void);

/**
 * Library version.
 */
const char *dman_version(void);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* DMAN_H */
