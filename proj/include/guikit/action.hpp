#pragma once

#include <array>
#include <optional>
#include <string>
#include <string_view>

namespace guikit {

/// Action types with their wire codes.
enum class ActionType : int {
  Type = 3,
  DualPoint = 4,
  GoBack = 5,
  GoHome = 6,
  Enter = 7,
  StatusComplete = 10,
};

inline constexpr std::array<ActionType, 6> kAllActionTypes = {
    ActionType::DualPoint, ActionType::Type,  ActionType::GoBack,
    ActionType::GoHome,    ActionType::Enter, ActionType::StatusComplete,
};

constexpr int to_code(ActionType t) noexcept { return static_cast<int>(t); }
std::optional<ActionType> action_type_from_code(int code) noexcept;
std::string_view to_string(ActionType t) noexcept;

/// True for go_back, go_home, enter and status_complete.
bool is_system_action(ActionType t) noexcept;

inline constexpr double kSentinel = -1.0;
inline constexpr double kDefaultTapThreshold = 0.04;

/// A screen location as fractions of height (y) and width (x).
struct Point {
  double y = kSentinel;
  double x = kSentinel;

  static constexpr Point sentinel() noexcept { return {kSentinel, kSentinel}; }
  bool is_sentinel() const noexcept { return y == kSentinel && x == kSentinel; }
  bool in_unit_square() const noexcept;

  friend bool operator==(const Point&, const Point&) = default;
};

double distance(const Point& a, const Point& b) noexcept;

struct Action {
  ActionType type = ActionType::StatusComplete;
  Point touch = Point::sentinel();
  Point lift = Point::sentinel();
  std::string typed_text;

  friend bool operator==(const Action&, const Action&) = default;
};

Action make_click(Point at);
Action make_gesture(Point touch, Point lift);
Action make_type(std::string text);
Action make_system(ActionType t);

/// Throws InvalidCoordinates or InvalidActionKind when an action breaks the
/// per-type point/text rules.
void validate(const Action& a);

enum class GestureKind { Click, ScrollUp, ScrollDown, ScrollLeft, ScrollRight };
enum class ScrollAxis { Vertical, Horizontal };

std::string_view to_string(GestureKind g) noexcept;
bool is_scroll(GestureKind g) noexcept;
/// Precondition: is_scroll(g).
ScrollAxis axis_of(GestureKind g) noexcept;
/// Same axis, opposite sign. Click maps to itself.
GestureKind reversed(GestureKind g) noexcept;

GestureKind classify_gesture(const Action& a, double tap_threshold = kDefaultTapThreshold);

/// Fixed touch/lift pair a scroll of the given direction is snapped to.
std::pair<Point, Point> canonical_scroll_points(GestureKind g);

/// Round half away from zero to four decimal places.
double round4(double v) noexcept;

Action normalize(const Action& a, double tap_threshold = kDefaultTapThreshold);

/// True when render_decision would accept `a` as-is.
bool is_normalized(const Action& a, double tap_threshold = kDefaultTapThreshold);

}  // namespace guikit
