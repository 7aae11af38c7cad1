#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "guikit/action.hpp"
#include "guikit/episodes.hpp"

namespace guikit {

enum class AgentKind { Oracle, PerturbedOracle, AxisFlipper, ConstantAction };

/// Scripted agents used to exercise the metric.
///  - Oracle replays the normalized gold action.
///  - PerturbedOracle shifts both click points by `radius` on each axis
///    (random sign, kept inside the screen when possible).
///  - AxisFlipper reverses every scroll on its axis.
///  - ConstantAction always answers `constant` (clicks land at the centre).
struct FixtureAgent {
  AgentKind kind = AgentKind::Oracle;
  double radius = 0.0;
  ActionType constant = ActionType::GoHome;
  std::uint64_t seed = 0;
};

/// One normalized prediction per gold step, in episode order.
std::vector<std::vector<Action>> run_agent(const FixtureAgent& agent,
                                           const std::vector<Episode>& episodes,
                                           double tap_threshold = kDefaultTapThreshold);

/// The same predictions as prediction-file JSONL, one line per step.
std::string run_agent_jsonl(const FixtureAgent& agent, const std::vector<Episode>& episodes,
                            double tap_threshold = kDefaultTapThreshold);

}  // namespace guikit
