#pragma once

// Helpers and independent oracles shared by the unit tests. Nothing in here
// calls into the code it is used to check.

#include <cmath>
#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "guikit/error.hpp"

namespace testing {

template <typename Fn>
std::optional<guikit::ErrorCode> error_of(Fn&& fn) {
  try {
    fn();
  } catch (const guikit::Error& e) {
    return e.code();
  }
  return std::nullopt;
}

template <typename Fn>
std::string message_of(Fn&& fn) {
  try {
    fn();
  } catch (const std::exception& e) {
    return e.what();
  }
  return {};
}

inline double euclid(double y1, double x1, double y2, double x2) {
  return std::sqrt((y1 - y2) * (y1 - y2) + (x1 - x2) * (x1 - x2));
}

// Direction from raw deltas: "click", "up", "down", "left", "right".
inline std::string direction(double ty, double tx, double ly, double lx, double tap) {
  const double dy = ly - ty, dx = lx - tx;
  if (euclid(ty, tx, ly, lx) <= tap) return "click";
  if (std::fabs(dy) >= std::fabs(dx)) return dy > 0 ? "down" : "up";
  return dx > 0 ? "right" : "left";
}

// printf-based coordinate rendering, kept separate from format_coordinate.
inline std::string coord(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4f", v);
  std::string s = buf;
  while (s.size() > 1 && s.back() == '0' && s[s.size() - 2] != '.') s.pop_back();
  return s;
}

struct Rng {
  std::mt19937_64 gen;
  explicit Rng(std::uint64_t seed) : gen(seed) {}
  double unit() { return std::uniform_real_distribution<double>(0.0, 1.0)(gen); }
  std::size_t below(std::size_t n) { return std::uniform_int_distribution<std::size_t>(0, n - 1)(gen); }
};

}  // namespace testing
