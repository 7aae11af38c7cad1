#include "guikit/fixture_agents.hpp"

#include <algorithm>

#include "guikit/error.hpp"
#include "guikit/predictions.hpp"
#include "random.hpp"

namespace guikit {

namespace {

/// Signed shift of `radius` that keeps every coordinate in [0,1] when
/// either sign allows it.
double pick_shift(double a, double b, double radius, detail::Rng& rng) {
  const bool up_ok = a + radius <= 1.0 && b + radius <= 1.0;
  const bool down_ok = a - radius >= 0.0 && b - radius >= 0.0;
  const bool coin = rng.coin();
  if (up_ok && down_ok) return coin ? radius : -radius;
  if (up_ok) return radius;
  if (down_ok) return -radius;
  return coin ? radius : -radius;
}

Point shifted(const Point& p, double dy, double dx) {
  return {std::clamp(round4(p.y + dy), 0.0, 1.0), std::clamp(round4(p.x + dx), 0.0, 1.0)};
}

Action constant_action(ActionType t) {
  switch (t) {
    case ActionType::DualPoint: return make_click({0.5, 0.5});
    case ActionType::Type: return make_type("");
    default: return make_system(t);
  }
}

}  // namespace

std::vector<std::vector<Action>> run_agent(const FixtureAgent& agent,
                                           const std::vector<Episode>& episodes,
                                           double tap_threshold) {
  if (agent.kind == AgentKind::PerturbedOracle && !(agent.radius >= 0.0 && agent.radius <= 1.0)) {
    fail(ErrorCode::InvalidArgument, "perturbation radius must lie in [0, 1]");
  }
  detail::Rng rng(agent.seed);
  std::vector<std::vector<Action>> out;
  out.reserve(episodes.size());
  for (const Episode& e : episodes) {
    std::vector<Action> preds;
    preds.reserve(e.length());
    for (const Step& s : e.steps) {
      const Action gold = normalize(s.gold, tap_threshold);
      Action pred = gold;
      switch (agent.kind) {
        case AgentKind::Oracle: break;
        case AgentKind::PerturbedOracle:
          if (gold.type == ActionType::DualPoint && !is_scroll(classify_gesture(gold, tap_threshold))) {
            const double dy = pick_shift(gold.touch.y, gold.lift.y, agent.radius, rng);
            const double dx = pick_shift(gold.touch.x, gold.lift.x, agent.radius, rng);
            pred.touch = shifted(gold.touch, dy, dx);
            pred.lift = shifted(gold.lift, dy, dx);
          }
          break;
        case AgentKind::AxisFlipper:
          if (gold.type == ActionType::DualPoint) {
            const GestureKind g = classify_gesture(gold, tap_threshold);
            if (is_scroll(g)) std::tie(pred.touch, pred.lift) = canonical_scroll_points(reversed(g));
          }
          break;
        case AgentKind::ConstantAction: pred = constant_action(agent.constant); break;
      }
      preds.push_back(normalize(pred, tap_threshold));
    }
    out.push_back(std::move(preds));
  }
  return out;
}

std::string run_agent_jsonl(const FixtureAgent& agent, const std::vector<Episode>& episodes,
                            double tap_threshold) {
  const auto preds = run_agent(agent, episodes, tap_threshold);
  std::string out;
  for (std::size_t i = 0; i < episodes.size(); ++i) {
    for (std::size_t j = 0; j < preds[i].size(); ++j) {
      out += prediction_line(episodes[i].id, j + 1, preds[i][j], tap_threshold);
      out += '\n';
    }
  }
  return out;
}

}  // namespace guikit
