#pragma once

#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "guikit/action.hpp"

namespace guikit {

inline constexpr std::string_view kPlanPrompt = "Action Plan: ";
inline constexpr std::string_view kDecisionPrompt = "Action Decision: ";
inline constexpr std::string_view kSectionSeparator = " ; ";

/// `"action_type": 4, "touch_point": [y, x], "lift_point": [y, x], "typed_text": "..."`
/// Throws NotNormalized unless is_normalized(a, tap_threshold).
std::string render_decision(const Action& a, double tap_threshold = kDefaultTapThreshold);

/// Accepts either quote style, optional surrounding braces and any key order.
Action parse_decision(std::string_view text);

/// `[4, 10]`
std::string render_plan(std::span<const ActionType> plan);
std::vector<ActionType> parse_plan(std::string_view text);

struct Target {
  std::vector<ActionType> plan;
  Action decision;

  friend bool operator==(const Target&, const Target&) = default;
};

/// `Action Plan: [4, 10] ; Action Decision: "action_type": 4, ...`
std::string render_target(std::span<const ActionType> plan, const Action& a,
                          double tap_threshold = kDefaultTapThreshold);
Target parse_target(std::string_view text);

/// Decision-only target used when future plans are ablated:
/// `Action Decision: "action_type": 4, ...`
std::string render_decision_target(const Action& a, double tap_threshold = kDefaultTapThreshold);
/// Accepts both target forms; the plan is empty when the plan section is absent.
Target parse_target_lenient(std::string_view text);

/// Empty history renders as the empty string. Otherwise
/// `step 1: (6, [-1.0, -1.0], [-1.0, -1.0], "") ; step 2: (...)`.
std::string render_history(std::span<const Action> history,
                           double tap_threshold = kDefaultTapThreshold);
std::vector<Action> parse_history(std::string_view text);

/// Shortest decimal rendering with at least one fractional digit, at most four.
std::string format_coordinate(double v);

}  // namespace guikit
