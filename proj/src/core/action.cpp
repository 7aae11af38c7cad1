#include "guikit/action.hpp"

#include <cmath>
#include <sstream>
#include <tuple>

#include "guikit/error.hpp"

namespace guikit {

std::optional<ActionType> action_type_from_code(int code) noexcept {
  for (ActionType t : kAllActionTypes) {
    if (to_code(t) == code) return t;
  }
  return std::nullopt;
}

std::string_view to_string(ActionType t) noexcept {
  switch (t) {
    case ActionType::Type: return "type";
    case ActionType::DualPoint: return "dual_point";
    case ActionType::GoBack: return "go_back";
    case ActionType::GoHome: return "go_home";
    case ActionType::Enter: return "enter";
    case ActionType::StatusComplete: return "status_complete";
  }
  return "unknown";
}

bool is_system_action(ActionType t) noexcept {
  return t == ActionType::GoBack || t == ActionType::GoHome || t == ActionType::Enter ||
         t == ActionType::StatusComplete;
}

bool Point::in_unit_square() const noexcept {
  return y >= 0.0 && y <= 1.0 && x >= 0.0 && x <= 1.0;
}

double distance(const Point& a, const Point& b) noexcept {
  return std::hypot(a.y - b.y, a.x - b.x);
}

Action make_click(Point at) { return Action{ActionType::DualPoint, at, at, {}}; }

Action make_gesture(Point touch, Point lift) {
  return Action{ActionType::DualPoint, touch, lift, {}};
}

Action make_type(std::string text) {
  return Action{ActionType::Type, Point::sentinel(), Point::sentinel(), std::move(text)};
}

Action make_system(ActionType t) {
  if (!is_system_action(t)) {
    fail(ErrorCode::InvalidActionKind,
         "make_system: " + std::string(to_string(t)) + " is not a system action");
  }
  return Action{t, Point::sentinel(), Point::sentinel(), {}};
}

namespace {

std::string describe(const Point& p) {
  std::ostringstream os;
  os << '[' << p.y << ", " << p.x << ']';
  return os.str();
}

}  // namespace

void validate(const Action& a) {
  if (!action_type_from_code(to_code(a.type))) {
    fail(ErrorCode::UnknownActionType, "unknown action type " + std::to_string(to_code(a.type)));
  }
  if (a.type == ActionType::DualPoint) {
    for (const Point* p : {&a.touch, &a.lift}) {
      if (!p->in_unit_square()) {
        fail(ErrorCode::InvalidCoordinates,
             "dual_point coordinates must lie in [0,1], got " + describe(*p));
      }
    }
    if (!a.typed_text.empty()) {
      fail(ErrorCode::InvalidActionKind, "dual_point action must not carry typed_text");
    }
    return;
  }
  for (const Point* p : {&a.touch, &a.lift}) {
    if (!p->is_sentinel()) {
      fail(ErrorCode::InvalidCoordinates, std::string(to_string(a.type)) +
                                              " action requires sentinel points [-1.0, -1.0], got " +
                                              describe(*p));
    }
  }
  if (a.type != ActionType::Type && !a.typed_text.empty()) {
    fail(ErrorCode::InvalidActionKind,
         std::string(to_string(a.type)) + " action must not carry typed_text");
  }
}

std::string_view to_string(GestureKind g) noexcept {
  switch (g) {
    case GestureKind::Click: return "click";
    case GestureKind::ScrollUp: return "up";
    case GestureKind::ScrollDown: return "down";
    case GestureKind::ScrollLeft: return "left";
    case GestureKind::ScrollRight: return "right";
  }
  return "unknown";
}

bool is_scroll(GestureKind g) noexcept { return g != GestureKind::Click; }

ScrollAxis axis_of(GestureKind g) noexcept {
  return (g == GestureKind::ScrollLeft || g == GestureKind::ScrollRight) ? ScrollAxis::Horizontal
                                                                          : ScrollAxis::Vertical;
}

GestureKind reversed(GestureKind g) noexcept {
  switch (g) {
    case GestureKind::ScrollUp: return GestureKind::ScrollDown;
    case GestureKind::ScrollDown: return GestureKind::ScrollUp;
    case GestureKind::ScrollLeft: return GestureKind::ScrollRight;
    case GestureKind::ScrollRight: return GestureKind::ScrollLeft;
    case GestureKind::Click: break;
  }
  return GestureKind::Click;
}

GestureKind classify_gesture(const Action& a, double tap_threshold) {
  if (!(tap_threshold >= 0.0)) {
    fail(ErrorCode::InvalidArgument, "tap threshold must be >= 0");
  }
  if (a.type != ActionType::DualPoint) {
    fail(ErrorCode::InvalidActionKind,
         "classify_gesture needs a dual_point action, got " + std::string(to_string(a.type)));
  }
  if (!a.touch.in_unit_square() || !a.lift.in_unit_square()) {
    fail(ErrorCode::InvalidCoordinates, "gesture points must lie in [0,1]: touch " +
                                            describe(a.touch) + ", lift " + describe(a.lift));
  }
  if (distance(a.touch, a.lift) <= tap_threshold) return GestureKind::Click;

  const double dy = a.lift.y - a.touch.y;
  const double dx = a.lift.x - a.touch.x;
  // Ties go to the vertical axis.
  if (std::abs(dy) >= std::abs(dx)) {
    return dy > 0 ? GestureKind::ScrollDown : GestureKind::ScrollUp;
  }
  return dx > 0 ? GestureKind::ScrollRight : GestureKind::ScrollLeft;
}

std::pair<Point, Point> canonical_scroll_points(GestureKind g) {
  switch (g) {
    case GestureKind::ScrollUp: return {{0.8, 0.5}, {0.2, 0.5}};
    case GestureKind::ScrollDown: return {{0.2, 0.5}, {0.8, 0.5}};
    case GestureKind::ScrollLeft: return {{0.5, 0.8}, {0.5, 0.2}};
    case GestureKind::ScrollRight: return {{0.5, 0.2}, {0.5, 0.8}};
    case GestureKind::Click: break;
  }
  fail(ErrorCode::InvalidArgument, "clicks have no canonical scroll points");
}

double round4(double v) noexcept {
  // std::round rounds halves away from zero; adding 0.0 folds -0.0 into 0.0.
  return std::round(v * 1e4) / 1e4 + 0.0;
}

Action normalize(const Action& a, double tap_threshold) {
  validate(a);
  if (a.type != ActionType::DualPoint) return a;

  const GestureKind g = classify_gesture(a, tap_threshold);
  Action out = a;
  if (is_scroll(g)) {
    std::tie(out.touch, out.lift) = canonical_scroll_points(g);
    return out;
  }
  out.touch = {round4(a.touch.y), round4(a.touch.x)};
  out.lift = {round4(a.lift.y), round4(a.lift.x)};
  // Rounding can nudge a click sitting right at the tap threshold past it;
  // collapse onto the touch point so the gesture stays a click.
  if (distance(out.touch, out.lift) > tap_threshold) out.lift = out.touch;
  return out;
}

bool is_normalized(const Action& a, double tap_threshold) {
  try {
    validate(a);
  } catch (const Error&) {
    return false;
  }
  if (a.type != ActionType::DualPoint) return true;
  const GestureKind g = classify_gesture(a, tap_threshold);
  if (is_scroll(g)) {
    return std::make_pair(a.touch, a.lift) == canonical_scroll_points(g);
  }
  for (double v : {a.touch.y, a.touch.x, a.lift.y, a.lift.x}) {
    if (round4(v) != v) return false;
  }
  return true;
}

}  // namespace guikit
