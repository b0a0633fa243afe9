#ifndef CWB_CWB_H
#define CWB_CWB_H

#include <stddef.h>

#if defined(CWB_BUILDING_LIBRARY)
#define CWB_API __attribute__((visibility("default")))
#else
#define CWB_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum cwb_status {
  CWB_OK = 0,
  CWB_E_ARGUMENT = 1,     /* null handle, unknown name, bad option value */
  CWB_E_PARSE = 2,        /* chart, point, expression or field text rejected */
  CWB_E_MATH = 3,         /* mathematical precondition failed (degenerate metric, odd dimension, ...) */
  CWB_E_INTERNAL = 4
} cwb_status;

typedef enum cwb_format { CWB_FORMAT_TEXT = 0, CWB_FORMAT_JSONL = 1 } cwb_format;

typedef enum cwb_option {
  CWB_OPT_MAX_ORDER = 0,  /* holonomy derivative order, default 4 */
  CWB_OPT_TRUNCATION = 1, /* ambient truncation K, default n/2 + 1; negative restores the default */
  CWB_OPT_FORMAT = 2      /* cwb_format */
} cwb_option;

enum { CWB_VERIFY_CORRUPT_BACH = 1 };

typedef struct cwb_chart cwb_chart;
typedef struct cwb_session cwb_session;

/* Message of the last failed call on this thread; empty after success. */
CWB_API const char* cwb_last_error(void);
CWB_API const char* cwb_version(void);
/* Releases strings returned through char** out-parameters. */
CWB_API void cwb_string_free(char* s);

CWB_API cwb_status cwb_chart_parse(const char* text, cwb_chart** out);
CWB_API cwb_status cwb_chart_builtin(const char* name, cwb_chart** out);
/* Newline-separated built-in chart names. */
CWB_API cwb_status cwb_builtin_names(char** out);
/* Chart with metric factor^2 g; factor is an expression in the chart coordinates. */
CWB_API cwb_status cwb_chart_rescale(const cwb_chart* chart, const char* factor, cwb_chart** out);
CWB_API cwb_status cwb_chart_dim(const cwb_chart* chart, size_t* out);
CWB_API cwb_status cwb_chart_print(const cwb_chart* chart, char** out);
CWB_API void cwb_chart_free(cwb_chart* chart);

/* A chart plus points, fields and options; the chart is copied. */
CWB_API cwb_status cwb_session_create(const cwb_chart* chart, cwb_session** out);
CWB_API void cwb_session_free(cwb_session* session);
/* `coord = rational` assignments separated by whitespace. */
CWB_API cwb_status cwb_session_add_point(cwb_session* session, const char* text);
/* Comma-separated component expressions of a vector field. */
CWB_API cwb_status cwb_session_add_field(cwb_session* session, const char* text);
CWB_API cwb_status cwb_session_set_option(cwb_session* session, cwb_option option, int value);

/* Exact component of a named tensor at a point, as `p/q` text. */
CWB_API cwb_status cwb_tensor_component(const cwb_chart* chart, const char* which, const char* point,
                                        const size_t* index, size_t rank, char** out);

/* Reports in the session format. */
CWB_API cwb_status cwb_run_tensor(const cwb_session* session, const char* which, char** out);
CWB_API cwb_status cwb_run_holonomy(const cwb_session* session, char** out);
CWB_API cwb_status cwb_run_ambient(const cwb_session* session, char** out);
CWB_API cwb_status cwb_run_classify_e(const cwb_session* session, char** out);
/* suite: all | obstruction | einstein | identification (NULL means all). *passed is 1 when every check passed. */
CWB_API cwb_status cwb_run_verify(const cwb_session* session, const char* suite, int flags, char** out,
                                  int* passed);

#ifdef __cplusplus
}
#endif

#endif
