#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "guikit/action.hpp"
#include "guikit/episodes.hpp"

namespace guikit {

inline constexpr std::string_view kGoalPrompt = "Goal: ";
inline constexpr std::string_view kHistoryPrompt = " ; Previous Actions: ";

struct ChainConfig {
  std::size_t max_history = 8;
  std::size_t max_plan = 4;
  /// False drops the plan section; targets become decision-only.
  bool include_plan = true;
  double tap_threshold = kDefaultTapThreshold;
};

enum class Ablation { NoHistory, NoPlan, Neither };

ChainConfig ablate(ChainConfig cfg, Ablation mode);

struct ChainSample {
  std::string episode_id;
  std::size_t step = 0;  // 1-based position t
  std::string input_text;
  std::string target_text;
};

/// `Goal: <goal> ; Previous Actions: <history>`; history may be empty.
std::string render_input(std::string_view goal, std::span<const Action> history,
                         double tap_threshold = kDefaultTapThreshold);

/// One sample per step, history taken from the gold actions.
std::vector<ChainSample> build_samples(const Episode& e, const ChainConfig& cfg = {});

/// Closed-loop variant: the history at step t comes from predicted[0..t-2].
/// Targets still come from gold. predicted.size() must equal e.length().
std::vector<ChainSample> build_samples(const Episode& e, std::span<const Action> predicted,
                                       const ChainConfig& cfg = {});

/// JSONL line {input, target, episode_id, step}.
std::string to_jsonl_line(const ChainSample& s);

}  // namespace guikit
