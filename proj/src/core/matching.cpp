#include "guikit/matching.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>

#include "guikit/episodes.hpp"
#include "guikit/error.hpp"

namespace guikit {

void validate(const ScreenGeometry& g) {
  if (g.height <= 0 || g.width <= 0) {
    fail(ErrorCode::Schema, "screen height and width must be positive");
  }
  for (const BoundingBox& b : g.boxes) {
    const bool ok = 0.0 <= b.y_min && b.y_min <= b.y_max && b.y_max <= 1.0 && 0.0 <= b.x_min &&
                    b.x_min <= b.x_max && b.x_max <= 1.0;
    if (!ok) fail(ErrorCode::Schema, "bounding box must satisfy 0 <= min <= max <= 1");
  }
}

std::string_view to_string(StepCategory c) noexcept {
  switch (c) {
    case StepCategory::ClickRegion: return "click";
    case StepCategory::ScrollDirection: return "scroll";
    case StepCategory::ActionTypeOnly: return "action_type";
    case StepCategory::TypedText: return "typed_text";
  }
  return "unknown";
}

StepCategory categorize(const Action& gold, double tap_threshold) {
  switch (gold.type) {
    case ActionType::DualPoint:
      return is_scroll(classify_gesture(gold, tap_threshold)) ? StepCategory::ScrollDirection
                                                              : StepCategory::ClickRegion;
    case ActionType::Type: return StepCategory::TypedText;
    default: return StepCategory::ActionTypeOnly;
  }
}

namespace {

std::string_view trim_ws(std::string_view s) {
  auto space = [](unsigned char c) { return std::isspace(c) != 0; };
  while (!s.empty() && space(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && space(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

double point_distance(const Point& a, const Point& b, DistanceMetric m) {
  if (m == DistanceMetric::Chebyshev) return std::max(std::abs(a.y - b.y), std::abs(a.x - b.x));
  return distance(a, b);
}

bool same_box(const Point& a, const Point& b, const ScreenGeometry& geom) {
  return std::any_of(geom.boxes.begin(), geom.boxes.end(),
                     [&](const BoundingBox& box) { return box.contains(a) && box.contains(b); });
}

bool gestures_match(const Action& pred, const Action& gold, const ScreenGeometry& geom,
                    const MatchConfig& cfg) {
  const GestureKind pg = classify_gesture(pred, cfg.tap_threshold);
  const GestureKind gg = classify_gesture(gold, cfg.tap_threshold);
  // A click never matches a scroll, however close the points are.
  if (is_scroll(pg) != is_scroll(gg)) return false;
  if (is_scroll(gg)) {
    if (cfg.scroll_mode == ScrollMode::Strict) return pg == gg;
    return axis_of(pg) == axis_of(gg);
  }
  const bool within = point_distance(pred.touch, gold.touch, cfg.metric) <= cfg.click_radius &&
                      point_distance(pred.lift, gold.lift, cfg.metric) <= cfg.click_radius;
  return within || same_box(pred.touch, gold.touch, geom);
}

}  // namespace

bool texts_match(std::string_view pred, std::string_view gold, TextPolicy policy) {
  if (policy == TextPolicy::Strict) return pred == gold;
  pred = trim_ws(pred);
  gold = trim_ws(gold);
  return std::equal(pred.begin(), pred.end(), gold.begin(), gold.end(), [](char a, char b) {
    return std::tolower(static_cast<unsigned char>(a)) == std::tolower(static_cast<unsigned char>(b));
  });
}

StepVerdict match_step(const Action& pred, const Action& gold, const ScreenGeometry& geom,
                       const MatchConfig& cfg) {
  validate(pred);
  validate(gold);
  StepVerdict v;
  v.category = categorize(gold, cfg.tap_threshold);
  v.type_correct = pred.type == gold.type;
  if (!v.type_correct) return v;

  bool counts_for_overall = true;
  switch (gold.type) {
    case ActionType::DualPoint:
      v.gesture_correct = gestures_match(pred, gold, geom, cfg);
      break;
    case ActionType::Type:
      v.gesture_correct = texts_match(pred.typed_text, gold.typed_text, cfg.text_policy);
      counts_for_overall = cfg.text_in_overall;
      break;
    default:
      v.gesture_correct = true;
  }
  v.overall_correct = counts_for_overall ? v.gesture_correct : true;
  return v;
}

StepVerdict match_step(const std::optional<Action>& pred, const Action& gold,
                       const ScreenGeometry& geom, const MatchConfig& cfg) {
  if (pred) return match_step(*pred, gold, geom, cfg);
  validate(gold);
  StepVerdict v;
  v.category = categorize(gold, cfg.tap_threshold);
  return v;
}

namespace {

void tally(MatchReport& r, const StepVerdict& v) {
  ++r.overall.total;
  r.overall.correct += v.overall_correct;
  ++r.action_type.total;
  r.action_type.correct += v.type_correct;
  CategoryCount* bucket = nullptr;
  switch (v.category) {
    case StepCategory::ClickRegion: bucket = &r.click; break;
    case StepCategory::ScrollDirection: bucket = &r.scroll; break;
    case StepCategory::TypedText: bucket = &r.text; break;
    case StepCategory::ActionTypeOnly: break;
  }
  // Per-category accuracy follows the category's own check, so text accuracy
  // stays meaningful when text is excluded from the overall verdict.
  if (bucket) {
    ++bucket->total;
    bucket->correct += v.gesture_correct;
  }
}

void scores_from_counts(MatchReport& r) {
  r.matching_score = r.overall.accuracy().value_or(0.0);
  r.click_accuracy = r.click.accuracy();
  r.scroll_accuracy = r.scroll.accuracy();
  r.type_accuracy = r.action_type.accuracy();
  r.text_accuracy = r.text.accuracy();
}

void add_counts(CategoryCount& into, const CategoryCount& c) {
  into.total += c.total;
  into.correct += c.correct;
}

/// Sum in sorted order so the result does not depend on input order.
std::optional<double> order_free_mean(std::vector<double> values) {
  if (values.empty()) return std::nullopt;
  std::sort(values.begin(), values.end());
  double sum = 0.0;
  for (double v : values) sum += v;
  return sum / static_cast<double>(values.size());
}

template <typename Projection>
std::optional<double> mean_present(std::span<const MatchReport> reports, Projection proj) {
  std::vector<double> values;
  for (const MatchReport& r : reports) {
    if (auto v = proj(r)) values.push_back(*v);
  }
  return order_free_mean(std::move(values));
}

template <typename Fn>
MatchReport score_steps(std::size_t n_preds, const Episode& episode, Fn&& verdict_at) {
  if (n_preds != episode.length()) {
    fail(ErrorCode::LengthMismatch, "episode '" + episode.id + "' has " +
                                        std::to_string(episode.length()) + " steps but got " +
                                        std::to_string(n_preds) + " predictions");
  }
  std::vector<StepRecord> steps;
  steps.reserve(n_preds);
  for (std::size_t i = 0; i < n_preds; ++i) {
    steps.push_back(StepRecord{episode.id, i + 1, verdict_at(i)});
  }
  return MatchReport::from_steps(episode.id, std::move(steps));
}

}  // namespace

MatchReport MatchReport::from_steps(std::string label, std::vector<StepRecord> steps) {
  MatchReport r;
  r.label = std::move(label);
  r.steps = std::move(steps);
  for (const StepRecord& s : r.steps) tally(r, s.verdict);
  scores_from_counts(r);
  return r;
}

MatchReport score_episode(std::span<const Action> preds, const Episode& episode,
                          const MatchConfig& cfg) {
  return score_steps(preds.size(), episode, [&](std::size_t i) {
    const Step& step = episode.steps[i];
    return match_step(preds[i], normalize(step.gold, cfg.tap_threshold), step.screen, cfg);
  });
}

MatchReport score_episode(std::span<const std::optional<Action>> preds, const Episode& episode,
                          const MatchConfig& cfg) {
  return score_steps(preds.size(), episode, [&](std::size_t i) {
    const Step& step = episode.steps[i];
    return match_step(preds[i], normalize(step.gold, cfg.tap_threshold), step.screen, cfg);
  });
}

MatchReport aggregate(std::span<const MatchReport> reports, AggregationMode mode,
                      std::string label) {
  if (reports.empty()) fail(ErrorCode::EmptyAggregate, "cannot aggregate an empty list of reports");

  MatchReport out;
  out.label = std::move(label);
  for (const MatchReport& r : reports) {
    out.steps.insert(out.steps.end(), r.steps.begin(), r.steps.end());
    add_counts(out.overall, r.overall);
    add_counts(out.action_type, r.action_type);
    add_counts(out.click, r.click);
    add_counts(out.scroll, r.scroll);
    add_counts(out.text, r.text);
  }
  std::sort(out.steps.begin(), out.steps.end(), [](const StepRecord& a, const StepRecord& b) {
    return std::tie(a.episode_id, a.step) < std::tie(b.episode_id, b.step);
  });

  if (mode == AggregationMode::StepWeighted) {
    scores_from_counts(out);
    return out;
  }
  out.matching_score = *mean_present(reports, [](const MatchReport& r) {
    return std::optional<double>(r.matching_score);
  });
  out.click_accuracy = mean_present(reports, [](const MatchReport& r) { return r.click_accuracy; });
  out.scroll_accuracy = mean_present(reports, [](const MatchReport& r) { return r.scroll_accuracy; });
  out.type_accuracy = mean_present(reports, [](const MatchReport& r) { return r.type_accuracy; });
  out.text_accuracy = mean_present(reports, [](const MatchReport& r) { return r.text_accuracy; });
  return out;
}

}  // namespace guikit
