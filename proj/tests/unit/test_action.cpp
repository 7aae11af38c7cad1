#include <doctest.h>

#include "guikit/action.hpp"
#include "support.hpp"

using namespace guikit;
using testing::error_of;

TEST_CASE("action codes round-trip") {
  for (int code : {3, 4, 5, 6, 7, 10}) {
    auto t = action_type_from_code(code);
    REQUIRE(t);
    CHECK(to_code(*t) == code);
  }
  for (int code : {-1, 0, 1, 2, 8, 9, 11, 100}) CHECK_FALSE(action_type_from_code(code));
  CHECK(is_system_action(ActionType::GoBack));
  CHECK(is_system_action(ActionType::StatusComplete));
  CHECK_FALSE(is_system_action(ActionType::Type));
  CHECK_FALSE(is_system_action(ActionType::DualPoint));
}

TEST_CASE("classify: worked examples") {
  CHECK(classify_gesture(make_click({0.7761, 0.7089}), 0.04) == GestureKind::Click);
  CHECK(classify_gesture(make_gesture({0.1898, 0.4477}, {0.8242, 0.4077}), 0.04) ==
        GestureKind::ScrollDown);
  CHECK(classify_gesture(make_click({0.5, 0.5}), 0.0) == GestureKind::Click);
}

TEST_CASE("classify: boundaries") {
  // Exactly at the threshold is still a click.
  CHECK(classify_gesture(make_gesture({0.5, 0.5}, {0.5, 0.75}), 0.25) == GestureKind::Click);
  CHECK(classify_gesture(make_gesture({0.5, 0.5}, {0.5, 0.75}), 0.2) == GestureKind::ScrollRight);
  // |dy| == |dx| resolves to the vertical axis.
  CHECK(classify_gesture(make_gesture({0.5, 0.5}, {0.25, 0.25}), 0.04) == GestureKind::ScrollUp);
  CHECK(classify_gesture(make_gesture({0.5, 0.5}, {0.5, 0.1}), 0.04) == GestureKind::ScrollLeft);
}

TEST_CASE("classify: errors") {
  CHECK(error_of([] { classify_gesture(make_type("x")); }) == ErrorCode::InvalidActionKind);
  CHECK(error_of([] { classify_gesture(make_system(ActionType::GoHome)); }) ==
        ErrorCode::InvalidActionKind);
  Action bad = make_click({0.5, 0.5});
  bad.touch.y = 1.2;
  CHECK(error_of([&] { classify_gesture(bad); }) == ErrorCode::InvalidCoordinates);
  bad.touch.y = std::nan("");
  CHECK(error_of([&] { classify_gesture(bad); }) == ErrorCode::InvalidCoordinates);
  CHECK(error_of([] { classify_gesture(make_click({0.5, 0.5}), -0.1); }) ==
        ErrorCode::InvalidArgument);
}

TEST_CASE("classify agrees with the delta oracle on random gestures") {
  testing::Rng rng(42);
  for (int i = 0; i < 10000; ++i) {
    const double ty = rng.unit(), tx = rng.unit(), ly = rng.unit(), lx = rng.unit();
    const double tap = rng.unit() * 0.2;
    const GestureKind g = classify_gesture(make_gesture({ty, tx}, {ly, lx}), tap);
    CHECK(std::string(to_string(g)) == testing::direction(ty, tx, ly, lx, tap));
  }
}

TEST_CASE("normalize: worked examples") {
  const Action down = normalize(make_gesture({0.1898, 0.4477}, {0.8242, 0.4077}));
  CHECK(down.touch == Point{0.2, 0.5});
  CHECK(down.lift == Point{0.8, 0.5});

  const Action click = normalize(make_click({0.84971234, 0.59640001}));
  CHECK(click.touch == Point{0.8497, 0.5964});
  CHECK(click.lift == Point{0.8497, 0.5964});

  const Action home = make_system(ActionType::GoHome);
  CHECK(normalize(home) == home);
  CHECK(normalize(home).touch.is_sentinel());
}

TEST_CASE("normalize: the four fixed pairs") {
  struct Case {
    Point touch, lift, want_touch, want_lift;
  };
  const Case cases[] = {
      {{0.9, 0.3}, {0.2, 0.35}, {0.8, 0.5}, {0.2, 0.5}},   // up
      {{0.1, 0.6}, {0.7, 0.55}, {0.2, 0.5}, {0.8, 0.5}},   // down
      {{0.4, 0.95}, {0.45, 0.1}, {0.5, 0.8}, {0.5, 0.2}},  // left
      {{0.4, 0.05}, {0.42, 0.6}, {0.5, 0.2}, {0.5, 0.8}},  // right
  };
  for (const Case& c : cases) {
    const Action n = normalize(make_gesture(c.touch, c.lift));
    CHECK(n.touch == c.want_touch);
    CHECK(n.lift == c.want_lift);
  }
}

TEST_CASE("normalize: rounding and idempotence") {
  CHECK(round4(0.12345) == doctest::Approx(0.1235).epsilon(1e-12));
  CHECK(round4(0.99996) == 1.0);
  CHECK(std::signbit(round4(-0.00001)) == false);

  testing::Rng rng(7);
  for (int i = 0; i < 10000; ++i) {
    const Action raw = make_gesture({rng.unit(), rng.unit()}, {rng.unit(), rng.unit()});
    const Action once = normalize(raw);
    CHECK(normalize(once) == once);
    CHECK(is_normalized(once));
    CHECK(classify_gesture(once) == classify_gesture(raw));
  }
}

TEST_CASE("normalize keeps a click that rounding pushes past the threshold") {
  // touch/lift 0.04 apart before rounding, slightly more after.
  const Action raw = make_gesture({0.10004, 0.5}, {0.14004 - 1e-9, 0.5});
  REQUIRE(classify_gesture(raw) == GestureKind::Click);
  const Action n = normalize(raw);
  CHECK(classify_gesture(n) == GestureKind::Click);
  CHECK(is_normalized(n));
}

TEST_CASE("validate rejects malformed actions") {
  Action a = make_type("hi");
  a.touch = {0.3, 0.3};
  CHECK(error_of([&] { validate(a); }) == ErrorCode::InvalidCoordinates);

  Action sys = make_system(ActionType::Enter);
  sys.typed_text = "x";
  CHECK(error_of([&] { validate(sys); }) == ErrorCode::InvalidActionKind);

  Action click = make_click({0.3, 0.3});
  click.typed_text = "x";
  CHECK(error_of([&] { validate(click); }) == ErrorCode::InvalidActionKind);

  CHECK(error_of([] { validate(make_click({-0.1, 0.5})); }) == ErrorCode::InvalidCoordinates);
  CHECK(error_of([] { validate(make_click({0.0, 1.0})); }) == std::nullopt);
}

TEST_CASE("scroll helpers") {
  CHECK(reversed(GestureKind::ScrollUp) == GestureKind::ScrollDown);
  CHECK(reversed(GestureKind::ScrollLeft) == GestureKind::ScrollRight);
  CHECK(reversed(GestureKind::Click) == GestureKind::Click);
  CHECK(axis_of(GestureKind::ScrollDown) == ScrollAxis::Vertical);
  CHECK(axis_of(GestureKind::ScrollRight) == ScrollAxis::Horizontal);
  for (GestureKind g : {GestureKind::ScrollUp, GestureKind::ScrollDown, GestureKind::ScrollLeft,
                        GestureKind::ScrollRight}) {
    auto [t, l] = canonical_scroll_points(g);
    CHECK(classify_gesture(make_gesture(t, l)) == g);
  }
}
