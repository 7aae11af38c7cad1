#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "guikit/action.hpp"

namespace guikit {

/// Axis-aligned box in normalized [y, x] coordinates.
struct BoundingBox {
  double y_min = 0, x_min = 0, y_max = 0, x_max = 0;

  bool contains(const Point& p) const noexcept {
    return p.y >= y_min && p.y <= y_max && p.x >= x_min && p.x <= x_max;
  }
  friend bool operator==(const BoundingBox&, const BoundingBox&) = default;
};

struct ScreenGeometry {
  int height = 0;
  int width = 0;
  std::vector<BoundingBox> boxes;

  friend bool operator==(const ScreenGeometry&, const ScreenGeometry&) = default;
};

/// Throws Schema when dimensions are non-positive or a box leaves [0,1].
void validate(const ScreenGeometry& g);

enum class DistanceMetric { Euclidean, Chebyshev };
enum class TextPolicy { Lenient, Strict };
enum class ScrollMode { Axis, Strict };
enum class AggregationMode { SubsetMean, StepWeighted };

struct MatchConfig {
  /// Click radius as a fraction of the normalized screen.
  double click_radius = 0.14;
  double tap_threshold = kDefaultTapThreshold;
  DistanceMetric metric = DistanceMetric::Euclidean;
  TextPolicy text_policy = TextPolicy::Lenient;
  ScrollMode scroll_mode = ScrollMode::Axis;
  AggregationMode aggregation = AggregationMode::SubsetMean;
  /// Whether a Type step also needs matching text to count as correct overall.
  bool text_in_overall = true;
};

enum class StepCategory { ClickRegion, ScrollDirection, ActionTypeOnly, TypedText };

std::string_view to_string(StepCategory c) noexcept;

struct StepVerdict {
  bool type_correct = false;
  bool gesture_correct = false;
  bool overall_correct = false;
  StepCategory category = StepCategory::ActionTypeOnly;
};

/// Category of a gold action: clicks, scrolls, typing, everything else.
StepCategory categorize(const Action& gold, double tap_threshold = kDefaultTapThreshold);

bool texts_match(std::string_view pred, std::string_view gold, TextPolicy policy);

StepVerdict match_step(const Action& pred, const Action& gold, const ScreenGeometry& geom,
                       const MatchConfig& cfg = {});

/// An unparseable prediction is wrong on every axis but still counted.
StepVerdict match_step(const std::optional<Action>& pred, const Action& gold,
                       const ScreenGeometry& geom, const MatchConfig& cfg = {});

struct CategoryCount {
  std::size_t total = 0;
  std::size_t correct = 0;

  std::optional<double> accuracy() const noexcept {
    if (total == 0) return std::nullopt;
    return static_cast<double>(correct) / static_cast<double>(total);
  }
  friend bool operator==(const CategoryCount&, const CategoryCount&) = default;
};

struct StepRecord {
  std::string episode_id;
  std::size_t step = 0;  // 1-based
  StepVerdict verdict;
};

struct MatchReport {
  std::string label;
  std::vector<StepRecord> steps;

  CategoryCount overall;  // overall_correct over all steps
  CategoryCount action_type;  // type_correct over all steps
  CategoryCount click;
  CategoryCount scroll;
  CategoryCount text;

  /// Scores; absent categories are nullopt rather than NaN.
  double matching_score = 0.0;
  std::optional<double> click_accuracy;
  std::optional<double> scroll_accuracy;
  std::optional<double> type_accuracy;
  std::optional<double> text_accuracy;

  /// Builds counts and step-weighted scores from `steps`.
  static MatchReport from_steps(std::string label, std::vector<StepRecord> steps);
};

struct Episode;

MatchReport score_episode(std::span<const Action> preds, const Episode& episode,
                          const MatchConfig& cfg = {});
MatchReport score_episode(std::span<const std::optional<Action>> preds, const Episode& episode,
                          const MatchConfig& cfg = {});

/// Combines reports. SubsetMean averages the per-report scores without
/// weighting; StepWeighted pools every step. Both are order-independent.
MatchReport aggregate(std::span<const MatchReport> reports,
                      AggregationMode mode = AggregationMode::SubsetMean,
                      std::string label = "overall");

}  // namespace guikit
