/* Exercises libguikit through its C header only. */
#include <guikit/guikit.h>

#include <stdio.h>
#include <stdlib.h>
#include <string.h>

static int failures = 0;

#define EXPECT(cond)                                                      \
  do {                                                                    \
    if (!(cond)) {                                                        \
      fprintf(stderr, "%s:%d: expected %s\n", __FILE__, __LINE__, #cond); \
      ++failures;                                                         \
    }                                                                     \
  } while (0)

static const char* kClick =
    "\"action_type\": 4, \"touch_point\": [0.8497, 0.5964], \"lift_point\": [0.8497, 0.5964], "
    "\"typed_text\": \"\"";

static void count_pass(const char* name, int passed, const char* detail, void* user) {
  (void)name;
  (void)detail;
  if (passed) ++*(int*)user;
}

static void actions(void) {
  gk_action* raw = NULL;
  gk_action* norm = NULL;
  gk_action* parsed = NULL;
  char* text = NULL;
  gk_gesture g;
  double ty, tx, ly, lx;
  int plan[] = {GK_ACTION_DUAL_POINT, GK_ACTION_STATUS_COMPLETE};
  int back[4] = {0};
  size_t len = 0;

  EXPECT(gk_action_create(GK_ACTION_DUAL_POINT, 0.84971234, 0.59640001, 0.84971234, 0.59640001,
                          NULL, &raw) == GK_OK);
  EXPECT(gk_render_decision(raw, &text) == GK_ERR_NOT_NORMALIZED);
  EXPECT(strlen(gk_last_error()) > 0);
  EXPECT(gk_action_normalize(raw, 0.04, &norm) == GK_OK);
  EXPECT(gk_render_decision(norm, &text) == GK_OK);
  EXPECT(strcmp(text, kClick) == 0);
  gk_string_free(text);

  EXPECT(gk_parse_decision(kClick, &parsed) == GK_OK);
  EXPECT(gk_action_type_code(parsed) == 4);
  EXPECT(gk_action_points(parsed, &ty, &tx, &ly, &lx) == GK_OK);
  EXPECT(ty == 0.8497 && tx == 0.5964 && ly == 0.8497 && lx == 0.5964);
  EXPECT(gk_action_classify(parsed, 0.04, &g) == GK_OK && g == GK_GESTURE_CLICK);
  gk_action_free(parsed);

  EXPECT(gk_render_target(plan, 2, norm, &text) == GK_OK);
  EXPECT(strncmp(text, "Action Plan: [4, 10] ; Action Decision: ", 40) == 0);
  EXPECT(gk_parse_target(text, back, 4, &len, &parsed) == GK_OK);
  EXPECT(len == 2 && back[0] == 4 && back[1] == 10);
  gk_action_free(parsed);
  gk_string_free(text);
  EXPECT(gk_render_target(plan + 1, 1, norm, &text) == GK_ERR_PLAN_HEAD_MISMATCH);

  EXPECT(gk_parse_decision("", &parsed) == GK_ERR_MISSING_FIELD);
  EXPECT(strstr(gk_last_error(), "action_type") != NULL);
  EXPECT(gk_parse_decision("\"action_type\": 9", &parsed) == GK_ERR_UNKNOWN_ACTION_TYPE);
  EXPECT(gk_parse_target("Action Decision: x", NULL, 0, &len, &parsed) == GK_ERR_NO_PLAN_SECTION);

  EXPECT(gk_action_create(GK_ACTION_TYPE, -1, -1, -1, -1, "what's the news in chile?", &parsed) ==
         GK_OK);
  EXPECT(strcmp(gk_action_text(parsed), "what's the news in chile?") == 0);
  EXPECT(gk_action_classify(parsed, 0.04, &g) == GK_ERR_INVALID_ACTION_KIND);
  gk_action_free(parsed);
  EXPECT(gk_action_create(GK_ACTION_DUAL_POINT, 1.2, 0.5, 0.5, 0.5, NULL, &parsed) ==
         GK_ERR_INVALID_COORDINATES);
  EXPECT(gk_action_create(8, -1, -1, -1, -1, NULL, &parsed) == GK_ERR_UNKNOWN_ACTION_TYPE);
  EXPECT(gk_action_create(GK_ACTION_GO_HOME, -1, -1, -1, -1, NULL, NULL) == GK_ERR_INVALID_ARGUMENT);
  EXPECT(strcmp(gk_status_name(GK_ERR_SCHEMA), "SchemaError") == 0);

  gk_action_free(raw);
  gk_action_free(norm);
  gk_action_free(NULL);
}

static void scoring(const char* fixture_dir, const char* work_dir) {
  char gold_path[1024], pred_path[1024], chain_path[1024];
  gk_dataset* gold = NULL;
  gk_dataset *train = NULL, *val = NULL, *test = NULL;
  gk_predictions* preds = NULL;
  gk_config* cfg = NULL;
  gk_report* report = NULL;
  char* text = NULL;
  double value = -1;
  int present = -1;

  snprintf(gold_path, sizeof gold_path, "%s/scroll_only.jsonl", fixture_dir);
  snprintf(pred_path, sizeof pred_path, "%s/capi_preds.jsonl", work_dir);
  snprintf(chain_path, sizeof chain_path, "%s/capi_chains.jsonl", work_dir);

  EXPECT(gk_dataset_load("/nonexistent.jsonl", &gold) == GK_ERR_IO);
  EXPECT(gk_dataset_load(gold_path, &gold) == GK_OK);
  EXPECT(gk_dataset_size(gold) == 40);

  EXPECT(gk_dataset_split(gold, 80, 10, 10, 7, 1.0, &train, &val, &test) == GK_OK);
  EXPECT(gk_dataset_size(train) == 32 && gk_dataset_size(val) == 4 && gk_dataset_size(test) == 4);
  gk_dataset_free(train);
  gk_dataset_free(val);
  gk_dataset_free(test);

  EXPECT(gk_dataset_stats(gold, GK_FORMAT_CSV, &text) == GK_OK);
  EXPECT(strncmp(text, "subset,episodes,screens,instructions\nGeneral,40,", 48) == 0);
  gk_string_free(text);

  EXPECT(gk_run_fixture_agent(gold, GK_AGENT_AXIS_FLIPPER, 0, 0, 0, 0.04, pred_path) == GK_OK);
  EXPECT(gk_predictions_load(pred_path, &preds) == GK_OK);
  EXPECT(gk_config_create(&cfg) == GK_OK);

  EXPECT(gk_score(gold, preds, cfg, 4, &report) == GK_OK);
  EXPECT(gk_report_category(report, GK_CATEGORY_SCROLL, &value, &present) == GK_OK);
  EXPECT(present == 1 && value == 1.0);
  EXPECT(gk_report_category(report, GK_CATEGORY_CLICK, &value, &present) == GK_OK);
  EXPECT(present == 0);
  EXPECT(gk_report_render(report, GK_FORMAT_JSON, &text) == GK_OK);
  EXPECT(strstr(text, "\"matching_score\"") != NULL);
  gk_string_free(text);
  gk_report_free(report);

  EXPECT(gk_config_set(cfg, "scroll_mode", "strict") == GK_OK);
  EXPECT(gk_config_set(cfg, "scroll_mode", "diagonal") == GK_ERR_CONFIG);
  EXPECT(gk_config_set(cfg, "nonsense", "1") == GK_ERR_CONFIG);
  EXPECT(gk_score(gold, preds, cfg, 1, &report) == GK_OK);
  EXPECT(gk_report_matching_score(report) == 0.0);
  gk_report_free(report);
  EXPECT(gk_config_to_text(cfg, &text) == GK_OK);
  EXPECT(strstr(text, "scroll_mode = strict") != NULL);
  gk_string_free(text);

  EXPECT(gk_dataset_build_chains(gold, 8, 4, 0, NULL, 0.04, chain_path) == GK_OK);
  EXPECT(gk_dataset_build_chains(gold, 8, 4, GK_CHAIN_NO_PLAN, preds, 0.04, chain_path) == GK_OK);

  EXPECT(gk_score(gold, preds, NULL, 1, NULL) == GK_ERR_INVALID_ARGUMENT);

  gk_config_free(cfg);
  gk_predictions_free(preds);
  gk_dataset_free(gold);
}

static void selfcheck(void) {
  int passed = 0, failed = -1;
  EXPECT(gk_selfcheck(NULL, count_pass, &passed, &failed) == GK_OK);
  EXPECT(failed == 0);
  EXPECT(passed > 20);
  EXPECT(gk_selfcheck("/nonexistent", count_pass, &passed, &failed) == GK_OK);
  EXPECT(failed > 0);
}

int main(int argc, char** argv) {
  if (argc != 3) {
    fprintf(stderr, "usage: %s FIXTURE_DIR WORK_DIR\n", argv[0]);
    return 2;
  }
  EXPECT(strlen(gk_version()) > 0);
  actions();
  scoring(argv[1], argv[2]);
  selfcheck();
  if (failures) {
    fprintf(stderr, "%d expectation(s) failed\n", failures);
    return 1;
  }
  printf("capi: all expectations met\n");
  return 0;
}
