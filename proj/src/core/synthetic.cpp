#include "guikit/synthetic.hpp"

#include <algorithm>
#include <cstdio>
#include <string>

#include "guikit/error.hpp"
#include "random.hpp"

namespace guikit {

namespace {

Point random_point(detail::Rng& rng) { return {rng.unit(), rng.unit()}; }

Action random_click(detail::Rng& rng) {
  const Point p = random_point(rng);
  // Some clicks wobble a little between touch and lift.
  if (rng.below(4) == 0) {
    Point q{std::clamp(p.y + rng.uniform(-0.01, 0.01), 0.0, 1.0),
            std::clamp(p.x + rng.uniform(-0.01, 0.01), 0.0, 1.0)};
    return make_gesture(p, q);
  }
  return make_click(p);
}

Action random_scroll(detail::Rng& rng) {
  // Dominant travel of 0.2..0.6 along one axis, drift on the other.
  const double travel = rng.uniform(0.2, 0.6);
  const double drift = rng.uniform(-0.05, 0.05);
  const bool vertical = rng.coin();
  const bool positive = rng.coin();
  const double start = positive ? rng.uniform(0.05, 0.95 - travel) : rng.uniform(0.05 + travel, 0.95);
  const double end = positive ? start + travel : start - travel;
  const double across = rng.uniform(0.1, 0.9);
  if (vertical) return make_gesture({start, across}, {end, across + drift});
  return make_gesture({across, start}, {across + drift, end});
}

const char* const kWords[] = {"news", "weather", "chile", "cheap", "headphones", "alarm",
                              "settings", "wifi", "photos", "calendar", "Maps", "route"};

std::string random_text(detail::Rng& rng) {
  std::string s;
  const auto words = 1 + rng.below(4);
  for (std::uint64_t i = 0; i < words; ++i) {
    if (i) s += ' ';
    s += kWords[rng.below(std::size(kWords))];
  }
  if (rng.below(5) == 0) s += "'s \"best\"";
  return s;
}

Action action_of(ActionType type, detail::Rng& rng) {
  switch (type) {
    case ActionType::DualPoint: return rng.coin() ? random_click(rng) : random_scroll(rng);
    case ActionType::Type: return make_type(random_text(rng));
    default: return make_system(type);
  }
}

}  // namespace

Action random_action(ActionType type, std::uint64_t seed) {
  detail::Rng rng(seed);
  return action_of(type, rng);
}

std::vector<Episode> synthetic_episodes(const SyntheticSpec& spec) {
  if (spec.min_steps < 1 || spec.max_steps < spec.min_steps) {
    fail(ErrorCode::InvalidArgument, "synthetic episodes need 1 <= min_steps <= max_steps");
  }
  detail::Rng rng(spec.seed);
  std::vector<Episode> out;
  out.reserve(spec.episodes);
  for (std::size_t i = 0; i < spec.episodes; ++i) {
    Episode e;
    char id[64];
    std::snprintf(id, sizeof(id), "%s-%05zu", std::string(to_string(spec.subset)).c_str(), i);
    e.id = id;
    e.subset = spec.subset;
    e.goal = "synthetic task " + std::to_string(rng.below(spec.episodes / 2 + 1));
    const auto k = spec.min_steps + rng.below(spec.max_steps - spec.min_steps + 1);
    for (std::size_t t = 0; t < k; ++t) {
      Step s;
      s.screen.height = 2400;
      s.screen.width = 1080;
      switch (spec.mix) {
        case StepMix::ClickOnly: s.gold = random_click(rng); break;
        case StepMix::ScrollOnly: s.gold = random_scroll(rng); break;
        case StepMix::Mixed:
          if (t + 1 == k) {
            s.gold = make_system(ActionType::StatusComplete);
          } else {
            const ActionType type = kAllActionTypes[rng.below(kAllActionTypes.size())];
            s.gold = action_of(type, rng);
          }
          break;
      }
      e.steps.push_back(std::move(s));
    }
    out.push_back(std::move(e));
  }
  return out;
}

}  // namespace guikit
