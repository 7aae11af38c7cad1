/* guikit C API.
 *
 * Every function returns a gk_status. On failure the thread-local message
 * from gk_last_error() describes what went wrong. Handles are opaque and
 * released with their matching *_free function. Strings returned through
 * `char** out` are heap allocated and released with gk_string_free.
 */
#ifndef GUIKIT_GUIKIT_H
#define GUIKIT_GUIKIT_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  if defined(GUIKIT_BUILDING)
#    define GK_API __declspec(dllexport)
#  else
#    define GK_API __declspec(dllimport)
#  endif
#else
#  define GK_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum gk_status {
  GK_OK = 0,
  GK_ERR_INVALID_ARGUMENT = 1,
  GK_ERR_INVALID_ACTION_KIND = 2,
  GK_ERR_INVALID_COORDINATES = 3,
  GK_ERR_NOT_NORMALIZED = 4,
  GK_ERR_MISSING_FIELD = 5,
  GK_ERR_UNKNOWN_ACTION_TYPE = 6,
  GK_ERR_MALFORMED_POINT = 7,
  GK_ERR_SYNTAX = 8,
  GK_ERR_PLAN_HEAD_MISMATCH = 9,
  GK_ERR_NO_PLAN_SECTION = 10,
  GK_ERR_NO_DECISION_SECTION = 11,
  GK_ERR_LENGTH_MISMATCH = 12,
  GK_ERR_EMPTY_AGGREGATE = 13,
  GK_ERR_SCHEMA = 14,
  GK_ERR_IO = 15,
  GK_ERR_TOO_FEW_EPISODES = 16,
  GK_ERR_DIMENSION = 17,
  GK_ERR_CONFIG = 18,
  GK_ERR_INTERNAL = 99
} gk_status;

/* Wire codes of the six action types. */
enum {
  GK_ACTION_TYPE = 3,
  GK_ACTION_DUAL_POINT = 4,
  GK_ACTION_GO_BACK = 5,
  GK_ACTION_GO_HOME = 6,
  GK_ACTION_ENTER = 7,
  GK_ACTION_STATUS_COMPLETE = 10
};

typedef enum gk_gesture {
  GK_GESTURE_CLICK = 0,
  GK_GESTURE_SCROLL_UP = 1,
  GK_GESTURE_SCROLL_DOWN = 2,
  GK_GESTURE_SCROLL_LEFT = 3,
  GK_GESTURE_SCROLL_RIGHT = 4
} gk_gesture;

typedef enum gk_agent_kind {
  GK_AGENT_ORACLE = 0,
  GK_AGENT_PERTURBED_ORACLE = 1,
  GK_AGENT_AXIS_FLIPPER = 2,
  GK_AGENT_CONSTANT_ACTION = 3
} gk_agent_kind;

typedef enum gk_format { GK_FORMAT_JSON = 0, GK_FORMAT_CSV = 1 } gk_format;

typedef enum gk_category {
  GK_CATEGORY_CLICK = 0,
  GK_CATEGORY_SCROLL = 1,
  GK_CATEGORY_ACTION_TYPE = 2,
  GK_CATEGORY_TEXT = 3
} gk_category;

/* Ablation flags for chain building. */
enum { GK_CHAIN_NO_HISTORY = 1, GK_CHAIN_NO_PLAN = 2 };

typedef struct gk_action gk_action;
typedef struct gk_config gk_config;
typedef struct gk_dataset gk_dataset;
typedef struct gk_predictions gk_predictions;
typedef struct gk_report gk_report;

GK_API const char* gk_version(void);
GK_API const char* gk_last_error(void);
GK_API const char* gk_status_name(gk_status status);
GK_API void gk_string_free(char* s);

/* Actions */
GK_API gk_status gk_action_create(int type_code, double touch_y, double touch_x, double lift_y,
                                  double lift_x, const char* typed_text, gk_action** out);
GK_API void gk_action_free(gk_action* action);
GK_API int gk_action_type_code(const gk_action* action);
GK_API gk_status gk_action_points(const gk_action* action, double* touch_y, double* touch_x,
                                  double* lift_y, double* lift_x);
/* Borrowed pointer, valid until the action is freed. */
GK_API const char* gk_action_text(const gk_action* action);
GK_API gk_status gk_action_classify(const gk_action* action, double tap_threshold,
                                    gk_gesture* out);
GK_API gk_status gk_action_normalize(const gk_action* action, double tap_threshold,
                                     gk_action** out);

/* Chain-of-action text format */
GK_API gk_status gk_render_decision(const gk_action* action, char** out);
GK_API gk_status gk_parse_decision(const char* text, gk_action** out);
GK_API gk_status gk_render_target(const int* plan_codes, size_t plan_len, const gk_action* action,
                                  char** out);
/* Writes up to plan_capacity codes into plan_codes and the full length into
 * plan_len. */
GK_API gk_status gk_parse_target(const char* text, int* plan_codes, size_t plan_capacity,
                                 size_t* plan_len, gk_action** out);

/* Match configuration */
GK_API gk_status gk_config_create(gk_config** out);
GK_API void gk_config_free(gk_config* config);
GK_API gk_status gk_config_set(gk_config* config, const char* key, const char* value);
GK_API gk_status gk_config_load_file(gk_config* config, const char* path);
GK_API gk_status gk_config_to_text(const gk_config* config, char** out);
GK_API double gk_config_tap_threshold(const gk_config* config);

/* Episode datasets (JSONL) */
GK_API gk_status gk_dataset_load(const char* path, gk_dataset** out);
GK_API void gk_dataset_free(gk_dataset* dataset);
GK_API size_t gk_dataset_size(const gk_dataset* dataset);
GK_API gk_status gk_dataset_save(const gk_dataset* dataset, const char* path);
GK_API gk_status gk_dataset_subsample(const gk_dataset* dataset, double fraction, uint64_t seed,
                                      gk_dataset** out);
GK_API gk_status gk_dataset_stats(const gk_dataset* dataset, gk_format format, char** out);
GK_API gk_status gk_dataset_split(const gk_dataset* dataset, double train_pct, double val_pct,
                                  double test_pct, uint64_t seed, double train_fraction,
                                  gk_dataset** train, gk_dataset** val, gk_dataset** test);
/* Writes {input, target, episode_id, step} JSONL. When predictions is not
 * NULL the history is rebuilt from them (closed loop). */
GK_API gk_status gk_dataset_build_chains(const gk_dataset* dataset, size_t max_history,
                                         size_t max_plan, int ablation_flags,
                                         const gk_predictions* predictions, double tap_threshold,
                                         const char* out_path);
GK_API gk_status gk_run_fixture_agent(const gk_dataset* dataset, gk_agent_kind kind, double radius,
                                      int constant_type_code, uint64_t seed, double tap_threshold,
                                      const char* out_path);

/* Predictions and scoring */
GK_API gk_status gk_predictions_load(const char* path, gk_predictions** out);
GK_API void gk_predictions_free(gk_predictions* predictions);
GK_API gk_status gk_score(const gk_dataset* gold, const gk_predictions* predictions,
                          const gk_config* config, unsigned workers, gk_report** out);
GK_API void gk_report_free(gk_report* report);
GK_API double gk_report_matching_score(const gk_report* report);
/* *present is 0 when no gold step falls in the category. */
GK_API gk_status gk_report_category(const gk_report* report, gk_category category, double* value,
                                    int* present);
GK_API gk_status gk_report_render(const gk_report* report, gk_format format, char** out);

/* Self verification. The callback receives one line per check. Returns the
 * number of failed checks through *failures. golden_dir may be NULL. */
typedef void (*gk_check_callback)(const char* name, int passed, const char* detail, void* user);
GK_API gk_status gk_selfcheck(const char* golden_dir, gk_check_callback callback, void* user,
                              int* failures);

#ifdef __cplusplus
}
#endif

#endif /* GUIKIT_GUIKIT_H */
