#include "guikit/action_text.hpp"

#include <charconv>
#include <optional>

#include "guikit/error.hpp"
#include "text_scanner.hpp"

namespace guikit {

using detail::Scanner;

namespace {

constexpr std::string_view kPlanMarker = "Action Plan:";
constexpr std::string_view kDecisionMarker = "Action Decision:";
constexpr std::string_view kHistorySeparator = " ; ";

void escape_into(std::string& out, std::string_view text) {
  out.push_back('"');
  for (char c : text) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\r': out += "\\r"; break;
      case '\t': out += "\\t"; break;
      default: out.push_back(c);
    }
  }
  out.push_back('"');
}

void point_into(std::string& out, const Point& p) {
  out += '[';
  out += format_coordinate(p.y);
  out += ", ";
  out += format_coordinate(p.x);
  out += ']';
}

void require_normalized(const Action& a, double tap_threshold) {
  validate(a);
  if (!is_normalized(a, tap_threshold)) {
    fail(ErrorCode::NotNormalized,
         "action must be normalized before rendering (scrolls snap to a fixed pair, clicks keep "
         "four decimals)");
  }
}

ActionType type_from_code(long long code) {
  if (code < -1'000'000 || code > 1'000'000) {
    fail(ErrorCode::UnknownActionType, "unknown action type " + std::to_string(code));
  }
  auto t = action_type_from_code(static_cast<int>(code));
  if (!t) fail(ErrorCode::UnknownActionType, "unknown action type " + std::to_string(code));
  return *t;
}

}  // namespace

std::string format_coordinate(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v + 0.0, std::chars_format::fixed, 4);
  if (ec != std::errc{}) fail(ErrorCode::InvalidCoordinates, "coordinate is not representable");
  std::string s(buf, ptr);
  while (s.size() >= 2 && s.back() == '0' && s[s.size() - 2] != '.') s.pop_back();
  return s;
}

std::string render_decision(const Action& a, double tap_threshold) {
  require_normalized(a, tap_threshold);
  std::string out = "\"action_type\": ";
  out += std::to_string(to_code(a.type));
  out += ", \"touch_point\": ";
  point_into(out, a.touch);
  out += ", \"lift_point\": ";
  point_into(out, a.lift);
  out += ", \"typed_text\": ";
  escape_into(out, a.typed_text);
  return out;
}

Action parse_decision(std::string_view text) {
  Scanner s(text);
  s.skip_ws();
  const bool braced = s.consume('{');

  std::optional<ActionType> type;
  std::optional<Point> touch;
  std::optional<Point> lift;
  std::optional<std::string> typed;

  while (true) {
    s.skip_ws();
    if (s.eof() || (braced && s.peek() == '}')) break;
    const std::string key = s.quoted();
    s.expect(':', "after key '" + key + "'");
    s.skip_ws();
    auto once = [&](bool seen) {
      if (seen) s.syntax("duplicate key '" + key + "'");
    };
    if (key == "action_type") {
      once(type.has_value());
      type = type_from_code(s.integer());
    } else if (key == "touch_point") {
      once(touch.has_value());
      touch = s.point("touch_point");
    } else if (key == "lift_point") {
      once(lift.has_value());
      lift = s.point("lift_point");
    } else if (key == "typed_text") {
      once(typed.has_value());
      typed = s.quoted();
    } else {
      s.syntax("unknown key '" + key + "'");
    }
    s.skip_ws();
    if (!s.consume(',')) break;
  }
  if (braced) s.expect('}', "to close the decision");
  s.skip_ws();
  if (!s.eof()) s.syntax("unexpected trailing characters");

  if (!type) fail(ErrorCode::MissingField, "missing field 'action_type'");
  if (!touch) fail(ErrorCode::MissingField, "missing field 'touch_point'");
  if (!lift) fail(ErrorCode::MissingField, "missing field 'lift_point'");
  if (!typed) fail(ErrorCode::MissingField, "missing field 'typed_text'");

  Action a{*type, *touch, *lift, std::move(*typed)};
  validate(a);
  return a;
}

std::string render_plan(std::span<const ActionType> plan) {
  std::string out = "[";
  for (std::size_t i = 0; i < plan.size(); ++i) {
    if (i) out += ", ";
    out += std::to_string(to_code(plan[i]));
  }
  out += ']';
  return out;
}

namespace {

std::vector<ActionType> scan_plan(Scanner& s) {
  std::vector<ActionType> plan;
  s.skip_ws();
  if (!s.consume('[')) s.syntax("expected '[' to open the action plan");
  s.skip_ws();
  if (s.consume(']')) return plan;
  while (true) {
    plan.push_back(type_from_code(s.integer()));
    s.skip_ws();
    if (s.consume(']')) return plan;
    if (!s.consume(',')) s.syntax("expected ',' or ']' in the action plan");
  }
}

bool starts_with_marker(Scanner& s, std::string_view marker) {
  s.skip_ws();
  return s.consume(marker);
}

}  // namespace

std::vector<ActionType> parse_plan(std::string_view text) {
  Scanner s(text);
  auto plan = scan_plan(s);
  s.skip_ws();
  if (!s.eof()) s.syntax("unexpected trailing characters after the plan");
  return plan;
}

std::string render_target(std::span<const ActionType> plan, const Action& a,
                          double tap_threshold) {
  if (plan.empty() || plan.front() != a.type) {
    fail(ErrorCode::PlanHeadMismatch,
         "the plan must start with the decided action type " + std::to_string(to_code(a.type)));
  }
  std::string out(kPlanPrompt);
  out += render_plan(plan);
  out += kSectionSeparator;
  out += kDecisionPrompt;
  out += render_decision(a, tap_threshold);
  return out;
}

Target parse_target(std::string_view text) {
  Scanner s(text);
  if (!starts_with_marker(s, kPlanMarker)) {
    if (text.find(kDecisionMarker) == std::string_view::npos) {
      fail(ErrorCode::NoDecisionSection, "no 'Action Decision:' section");
    }
    fail(ErrorCode::NoPlanSection, "target must open with an 'Action Plan:' section");
  }
  Target out;
  out.plan = scan_plan(s);
  s.skip_ws();
  if (!s.consume(';')) s.consume(',');
  if (!starts_with_marker(s, kDecisionMarker)) {
    fail(ErrorCode::NoDecisionSection, "no 'Action Decision:' section after the plan" + s.at());
  }
  out.decision = parse_decision(s.rest());
  if (out.plan.empty() || out.plan.front() != out.decision.type) {
    fail(ErrorCode::PlanHeadMismatch, "the plan must start with the decided action type");
  }
  return out;
}

std::string render_decision_target(const Action& a, double tap_threshold) {
  return std::string(kDecisionPrompt) + render_decision(a, tap_threshold);
}

Target parse_target_lenient(std::string_view text) {
  Scanner s(text);
  if (starts_with_marker(s, kPlanMarker)) return parse_target(text);
  Scanner d(text);
  if (!starts_with_marker(d, kDecisionMarker)) {
    fail(ErrorCode::NoDecisionSection, "no 'Action Decision:' section");
  }
  return Target{{}, parse_decision(d.rest())};
}

std::string render_history(std::span<const Action> history, double tap_threshold) {
  std::string out;
  for (std::size_t i = 0; i < history.size(); ++i) {
    const Action& a = history[i];
    require_normalized(a, tap_threshold);
    if (i) out += kHistorySeparator;
    out += "step ";
    out += std::to_string(i + 1);
    out += ": (";
    out += std::to_string(to_code(a.type));
    out += ", ";
    point_into(out, a.touch);
    out += ", ";
    point_into(out, a.lift);
    out += ", ";
    escape_into(out, a.typed_text);
    out += ')';
  }
  return out;
}

std::vector<Action> parse_history(std::string_view text) {
  std::vector<Action> history;
  Scanner s(text);
  s.skip_ws();
  if (s.eof()) return history;
  while (true) {
    s.skip_ws();
    if (!s.consume(std::string_view("step"))) s.syntax("expected 'step'");
    const long long index = s.integer();
    if (index != static_cast<long long>(history.size()) + 1) {
      s.syntax("history steps must be numbered from 1 without gaps");
    }
    s.expect(':', "after the step index");
    s.expect('(', "to open the history tuple");
    const ActionType type = type_from_code(s.integer());
    s.expect(',', "after the action type");
    const Point touch = s.point("touch_point");
    s.expect(',', "after the touch point");
    const Point lift = s.point("lift_point");
    s.expect(',', "after the lift point");
    s.skip_ws();
    std::string typed = s.quoted();
    s.expect(')', "to close the history tuple");
    Action a{type, touch, lift, std::move(typed)};
    validate(a);
    history.push_back(std::move(a));
    s.skip_ws();
    if (s.eof()) return history;
    if (!s.consume(';')) s.syntax("expected ';' between history steps");
  }
}

}  // namespace guikit
