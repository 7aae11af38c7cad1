#include "guikit/guikit.h"

#include <cstdlib>
#include <cstring>
#include <fstream>
#include <new>
#include <string>

#include <json.hpp>

#include "guikit/action.hpp"
#include "guikit/action_text.hpp"
#include "guikit/chain.hpp"
#include "guikit/config.hpp"
#include "guikit/episodes.hpp"
#include "guikit/error.hpp"
#include "guikit/fixture_agents.hpp"
#include "guikit/predictions.hpp"
#include "guikit/selfcheck.hpp"

struct gk_action {
  guikit::Action value;
};
struct gk_config {
  guikit::MatchConfig value;
};
struct gk_dataset {
  std::vector<guikit::Episode> episodes;
};
struct gk_predictions {
  guikit::PredictionSet value;
};
struct gk_report {
  guikit::DatasetReport value;
};

namespace {

thread_local std::string g_last_error;

gk_status to_status(guikit::ErrorCode code) {
  using guikit::ErrorCode;
  switch (code) {
    case ErrorCode::InvalidArgument: return GK_ERR_INVALID_ARGUMENT;
    case ErrorCode::InvalidActionKind: return GK_ERR_INVALID_ACTION_KIND;
    case ErrorCode::InvalidCoordinates: return GK_ERR_INVALID_COORDINATES;
    case ErrorCode::NotNormalized: return GK_ERR_NOT_NORMALIZED;
    case ErrorCode::MissingField: return GK_ERR_MISSING_FIELD;
    case ErrorCode::UnknownActionType: return GK_ERR_UNKNOWN_ACTION_TYPE;
    case ErrorCode::MalformedPoint: return GK_ERR_MALFORMED_POINT;
    case ErrorCode::Syntax: return GK_ERR_SYNTAX;
    case ErrorCode::PlanHeadMismatch: return GK_ERR_PLAN_HEAD_MISMATCH;
    case ErrorCode::NoPlanSection: return GK_ERR_NO_PLAN_SECTION;
    case ErrorCode::NoDecisionSection: return GK_ERR_NO_DECISION_SECTION;
    case ErrorCode::LengthMismatch: return GK_ERR_LENGTH_MISMATCH;
    case ErrorCode::EmptyAggregate: return GK_ERR_EMPTY_AGGREGATE;
    case ErrorCode::Schema: return GK_ERR_SCHEMA;
    case ErrorCode::Io: return GK_ERR_IO;
    case ErrorCode::TooFewEpisodes: return GK_ERR_TOO_FEW_EPISODES;
    case ErrorCode::Dimension: return GK_ERR_DIMENSION;
    case ErrorCode::Config: return GK_ERR_CONFIG;
  }
  return GK_ERR_INTERNAL;
}

/// Runs `body`, translating exceptions into status codes.
template <typename Fn>
gk_status guarded(Fn&& body) noexcept {
  try {
    g_last_error.clear();
    body();
    return GK_OK;
  } catch (const guikit::Error& e) {
    g_last_error = e.what();
    return to_status(e.code());
  } catch (const std::bad_alloc&) {
    g_last_error = "out of memory";
  } catch (const std::exception& e) {
    g_last_error = e.what();
  } catch (...) {
    g_last_error = "unknown error";
  }
  return GK_ERR_INTERNAL;
}

void require(bool ok, const char* what) {
  if (!ok) guikit::fail(guikit::ErrorCode::InvalidArgument, what);
}

char* copy_out(const std::string& s) {
  char* p = static_cast<char*>(std::malloc(s.size() + 1));
  if (!p) throw std::bad_alloc();
  std::memcpy(p, s.c_str(), s.size() + 1);
  return p;
}

void write_file(const char* path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) guikit::fail(guikit::ErrorCode::Io, std::string(path) + ": cannot open for writing");
  out << content;
  if (!out) guikit::fail(guikit::ErrorCode::Io, std::string(path) + ": write failed");
}

gk_gesture to_c(guikit::GestureKind g) {
  switch (g) {
    case guikit::GestureKind::Click: return GK_GESTURE_CLICK;
    case guikit::GestureKind::ScrollUp: return GK_GESTURE_SCROLL_UP;
    case guikit::GestureKind::ScrollDown: return GK_GESTURE_SCROLL_DOWN;
    case guikit::GestureKind::ScrollLeft: return GK_GESTURE_SCROLL_LEFT;
    case guikit::GestureKind::ScrollRight: return GK_GESTURE_SCROLL_RIGHT;
  }
  return GK_GESTURE_CLICK;
}

guikit::ActionType type_from(int code) {
  auto t = guikit::action_type_from_code(code);
  if (!t) guikit::fail(guikit::ErrorCode::UnknownActionType, "unknown action type " + std::to_string(code));
  return *t;
}

std::string stats_text(const guikit::DatasetStats& s, gk_format format) {
  if (format == GK_FORMAT_CSV) {
    std::string out = "subset,episodes,screens,instructions\n";
    auto row = [&](std::string_view name, const guikit::SubsetStats& v) {
      out += std::string(name) + ',' + std::to_string(v.episodes) + ',' + std::to_string(v.screens) +
             ',' + std::to_string(v.instructions) + '\n';
    };
    for (const auto& [subset, v] : s.per_subset) row(guikit::to_string(subset), v);
    row("total", s.total);
    return out;
  }
  nlohmann::ordered_json j;
  auto obj = [](const guikit::SubsetStats& v) {
    nlohmann::ordered_json o;
    o["episodes"] = v.episodes;
    o["screens"] = v.screens;
    o["instructions"] = v.instructions;
    return o;
  };
  nlohmann::ordered_json subsets = nlohmann::ordered_json::object();
  for (const auto& [subset, v] : s.per_subset) subsets[std::string(guikit::to_string(subset))] = obj(v);
  j["subsets"] = std::move(subsets);
  j["total"] = obj(s.total);
  return j.dump(2);
}

}  // namespace

extern "C" {

const char* gk_version(void) { return "1.0.0"; }

const char* gk_last_error(void) { return g_last_error.c_str(); }

const char* gk_status_name(gk_status status) {
  switch (status) {
    case GK_OK: return "ok";
    case GK_ERR_INVALID_ARGUMENT: return "InvalidArgument";
    case GK_ERR_INVALID_ACTION_KIND: return "InvalidActionKind";
    case GK_ERR_INVALID_COORDINATES: return "InvalidCoordinates";
    case GK_ERR_NOT_NORMALIZED: return "NotNormalized";
    case GK_ERR_MISSING_FIELD: return "MissingField";
    case GK_ERR_UNKNOWN_ACTION_TYPE: return "UnknownActionType";
    case GK_ERR_MALFORMED_POINT: return "MalformedPoint";
    case GK_ERR_SYNTAX: return "Syntax";
    case GK_ERR_PLAN_HEAD_MISMATCH: return "PlanHeadMismatch";
    case GK_ERR_NO_PLAN_SECTION: return "NoPlanSection";
    case GK_ERR_NO_DECISION_SECTION: return "NoDecisionSection";
    case GK_ERR_LENGTH_MISMATCH: return "LengthMismatch";
    case GK_ERR_EMPTY_AGGREGATE: return "EmptyAggregate";
    case GK_ERR_SCHEMA: return "SchemaError";
    case GK_ERR_IO: return "IoError";
    case GK_ERR_TOO_FEW_EPISODES: return "TooFewEpisodes";
    case GK_ERR_DIMENSION: return "DimensionError";
    case GK_ERR_CONFIG: return "ConfigError";
    case GK_ERR_INTERNAL: return "InternalError";
  }
  return "Unknown";
}

void gk_string_free(char* s) { std::free(s); }

gk_status gk_action_create(int type_code, double touch_y, double touch_x, double lift_y,
                           double lift_x, const char* typed_text, gk_action** out) {
  return guarded([&] {
    require(out != nullptr, "out must not be NULL");
    guikit::Action a{type_from(type_code), {touch_y, touch_x}, {lift_y, lift_x},
                     typed_text ? typed_text : ""};
    guikit::validate(a);
    *out = new gk_action{std::move(a)};
  });
}

void gk_action_free(gk_action* action) { delete action; }

int gk_action_type_code(const gk_action* action) {
  return action ? guikit::to_code(action->value.type) : -1;
}

gk_status gk_action_points(const gk_action* action, double* touch_y, double* touch_x,
                           double* lift_y, double* lift_x) {
  return guarded([&] {
    require(action && touch_y && touch_x && lift_y && lift_x, "arguments must not be NULL");
    *touch_y = action->value.touch.y;
    *touch_x = action->value.touch.x;
    *lift_y = action->value.lift.y;
    *lift_x = action->value.lift.x;
  });
}

const char* gk_action_text(const gk_action* action) {
  return action ? action->value.typed_text.c_str() : "";
}

gk_status gk_action_classify(const gk_action* action, double tap_threshold, gk_gesture* out) {
  return guarded([&] {
    require(action && out, "arguments must not be NULL");
    *out = to_c(guikit::classify_gesture(action->value, tap_threshold));
  });
}

gk_status gk_action_normalize(const gk_action* action, double tap_threshold, gk_action** out) {
  return guarded([&] {
    require(action && out, "arguments must not be NULL");
    *out = new gk_action{guikit::normalize(action->value, tap_threshold)};
  });
}

gk_status gk_render_decision(const gk_action* action, char** out) {
  return guarded([&] {
    require(action && out, "arguments must not be NULL");
    *out = copy_out(guikit::render_decision(action->value));
  });
}

gk_status gk_parse_decision(const char* text, gk_action** out) {
  return guarded([&] {
    require(text && out, "arguments must not be NULL");
    *out = new gk_action{guikit::parse_decision(text)};
  });
}

gk_status gk_render_target(const int* plan_codes, size_t plan_len, const gk_action* action,
                           char** out) {
  return guarded([&] {
    require(action && out && (plan_codes || plan_len == 0), "arguments must not be NULL");
    std::vector<guikit::ActionType> plan;
    for (size_t i = 0; i < plan_len; ++i) plan.push_back(type_from(plan_codes[i]));
    *out = copy_out(guikit::render_target(plan, action->value));
  });
}

gk_status gk_parse_target(const char* text, int* plan_codes, size_t plan_capacity,
                          size_t* plan_len, gk_action** out) {
  return guarded([&] {
    require(text && plan_len && out && (plan_codes || plan_capacity == 0),
            "arguments must not be NULL");
    guikit::Target t = guikit::parse_target(text);
    for (size_t i = 0; i < t.plan.size() && i < plan_capacity; ++i) {
      plan_codes[i] = guikit::to_code(t.plan[i]);
    }
    *plan_len = t.plan.size();
    *out = new gk_action{std::move(t.decision)};
  });
}

gk_status gk_config_create(gk_config** out) {
  return guarded([&] {
    require(out != nullptr, "out must not be NULL");
    *out = new gk_config{};
  });
}

void gk_config_free(gk_config* config) { delete config; }

gk_status gk_config_set(gk_config* config, const char* key, const char* value) {
  return guarded([&] {
    require(config && key && value, "arguments must not be NULL");
    guikit::apply_config_entry(config->value, key, value);
  });
}

gk_status gk_config_load_file(gk_config* config, const char* path) {
  return guarded([&] {
    require(config && path, "arguments must not be NULL");
    config->value = guikit::load_config(path, config->value);
  });
}

gk_status gk_config_to_text(const gk_config* config, char** out) {
  return guarded([&] {
    require(config && out, "arguments must not be NULL");
    *out = copy_out(guikit::to_config_text(config->value));
  });
}

double gk_config_tap_threshold(const gk_config* config) {
  return config ? config->value.tap_threshold : guikit::kDefaultTapThreshold;
}

gk_status gk_dataset_load(const char* path, gk_dataset** out) {
  return guarded([&] {
    require(path && out, "arguments must not be NULL");
    *out = new gk_dataset{guikit::load_jsonl(path)};
  });
}

void gk_dataset_free(gk_dataset* dataset) { delete dataset; }

size_t gk_dataset_size(const gk_dataset* dataset) { return dataset ? dataset->episodes.size() : 0; }

gk_status gk_dataset_save(const gk_dataset* dataset, const char* path) {
  return guarded([&] {
    require(dataset && path, "arguments must not be NULL");
    guikit::save_jsonl(path, dataset->episodes);
  });
}

gk_status gk_dataset_subsample(const gk_dataset* dataset, double fraction, uint64_t seed,
                               gk_dataset** out) {
  return guarded([&] {
    require(dataset && out, "arguments must not be NULL");
    *out = new gk_dataset{guikit::subsample(dataset->episodes, fraction, seed)};
  });
}

gk_status gk_dataset_stats(const gk_dataset* dataset, gk_format format, char** out) {
  return guarded([&] {
    require(dataset && out, "arguments must not be NULL");
    *out = copy_out(stats_text(guikit::stats(dataset->episodes), format));
  });
}

gk_status gk_dataset_split(const gk_dataset* dataset, double train_pct, double val_pct,
                           double test_pct, uint64_t seed, double train_fraction,
                           gk_dataset** train, gk_dataset** val, gk_dataset** test) {
  return guarded([&] {
    require(dataset && train && val && test, "arguments must not be NULL");
    guikit::Split s = guikit::split(dataset->episodes, {train_pct, val_pct, test_pct}, seed,
                                    train_fraction);
    auto tr = std::make_unique<gk_dataset>(gk_dataset{std::move(s.train)});
    auto va = std::make_unique<gk_dataset>(gk_dataset{std::move(s.val)});
    auto te = std::make_unique<gk_dataset>(gk_dataset{std::move(s.test)});
    *train = tr.release();
    *val = va.release();
    *test = te.release();
  });
}

gk_status gk_dataset_build_chains(const gk_dataset* dataset, size_t max_history, size_t max_plan,
                                  int ablation_flags, const gk_predictions* predictions,
                                  double tap_threshold, const char* out_path) {
  return guarded([&] {
    require(dataset && out_path, "arguments must not be NULL");
    guikit::ChainConfig cfg;
    cfg.max_history = max_history;
    cfg.max_plan = max_plan;
    cfg.tap_threshold = tap_threshold;
    const bool no_history = ablation_flags & GK_CHAIN_NO_HISTORY;
    const bool no_plan = ablation_flags & GK_CHAIN_NO_PLAN;
    if (no_history && no_plan) cfg = guikit::ablate(cfg, guikit::Ablation::Neither);
    else if (no_history) cfg = guikit::ablate(cfg, guikit::Ablation::NoHistory);
    else if (no_plan) cfg = guikit::ablate(cfg, guikit::Ablation::NoPlan);

    std::string out;
    for (const guikit::Episode& e : dataset->episodes) {
      std::vector<guikit::ChainSample> samples;
      if (predictions) {
        auto it = predictions->value.by_episode.find(e.id);
        if (it == predictions->value.by_episode.end()) {
          guikit::fail(guikit::ErrorCode::LengthMismatch, "no predictions for episode '" + e.id + "'");
        }
        std::vector<guikit::Action> history;
        for (const auto& p : it->second) {
          if (!p) {
            guikit::fail(guikit::ErrorCode::Schema,
                         "episode '" + e.id + "' has an unparseable prediction; cannot rebuild history");
          }
          history.push_back(*p);
        }
        samples = guikit::build_samples(e, history, cfg);
      } else {
        samples = guikit::build_samples(e, cfg);
      }
      for (const auto& s : samples) {
        out += guikit::to_jsonl_line(s);
        out += '\n';
      }
    }
    write_file(out_path, out);
  });
}

gk_status gk_run_fixture_agent(const gk_dataset* dataset, gk_agent_kind kind, double radius,
                               int constant_type_code, uint64_t seed, double tap_threshold,
                               const char* out_path) {
  return guarded([&] {
    require(dataset && out_path, "arguments must not be NULL");
    guikit::FixtureAgent agent;
    switch (kind) {
      case GK_AGENT_ORACLE: agent.kind = guikit::AgentKind::Oracle; break;
      case GK_AGENT_PERTURBED_ORACLE: agent.kind = guikit::AgentKind::PerturbedOracle; break;
      case GK_AGENT_AXIS_FLIPPER: agent.kind = guikit::AgentKind::AxisFlipper; break;
      case GK_AGENT_CONSTANT_ACTION:
        agent.kind = guikit::AgentKind::ConstantAction;
        agent.constant = type_from(constant_type_code);
        break;
      default: require(false, "unknown agent kind");
    }
    agent.radius = radius;
    agent.seed = seed;
    write_file(out_path, guikit::run_agent_jsonl(agent, dataset->episodes, tap_threshold));
  });
}

gk_status gk_predictions_load(const char* path, gk_predictions** out) {
  return guarded([&] {
    require(path && out, "arguments must not be NULL");
    *out = new gk_predictions{guikit::load_predictions(path)};
  });
}

void gk_predictions_free(gk_predictions* predictions) { delete predictions; }

gk_status gk_score(const gk_dataset* gold, const gk_predictions* predictions,
                   const gk_config* config, unsigned workers, gk_report** out) {
  return guarded([&] {
    require(gold && predictions && out, "arguments must not be NULL");
    const guikit::MatchConfig cfg = config ? config->value : guikit::MatchConfig{};
    *out = new gk_report{guikit::score_dataset(gold->episodes, predictions->value, cfg, workers)};
  });
}

void gk_report_free(gk_report* report) { delete report; }

double gk_report_matching_score(const gk_report* report) {
  return report ? report->value.overall.matching_score : 0.0;
}

gk_status gk_report_category(const gk_report* report, gk_category category, double* value,
                             int* present) {
  return guarded([&] {
    require(report && value && present, "arguments must not be NULL");
    const guikit::MatchReport& r = report->value.overall;
    std::optional<double> v;
    switch (category) {
      case GK_CATEGORY_CLICK: v = r.click_accuracy; break;
      case GK_CATEGORY_SCROLL: v = r.scroll_accuracy; break;
      case GK_CATEGORY_ACTION_TYPE: v = r.type_accuracy; break;
      case GK_CATEGORY_TEXT: v = r.text_accuracy; break;
      default: require(false, "unknown category");
    }
    *present = v.has_value();
    *value = v.value_or(0.0);
  });
}

gk_status gk_report_render(const gk_report* report, gk_format format, char** out) {
  return guarded([&] {
    require(report && out, "arguments must not be NULL");
    *out = copy_out(format == GK_FORMAT_CSV ? guikit::report_to_csv(report->value)
                                            : guikit::report_to_json(report->value));
  });
}

gk_status gk_selfcheck(const char* golden_dir, gk_check_callback callback, void* user,
                       int* failures) {
  return guarded([&] {
    require(failures != nullptr, "failures must not be NULL");
    const auto results =
        guikit::run_selfcheck(golden_dir ? std::filesystem::path(golden_dir) : std::filesystem::path{});
    int failed = 0;
    for (const auto& r : results) {
      failed += r.passed ? 0 : 1;
      if (callback) callback(r.name.c_str(), r.passed ? 1 : 0, r.detail.c_str(), user);
    }
    *failures = failed;
  });
}

}  // extern "C"
