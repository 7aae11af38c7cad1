#include "guikit/chain.hpp"

#include <algorithm>

#include <json.hpp>

#include "guikit/action_text.hpp"
#include "guikit/error.hpp"

namespace guikit {

ChainConfig ablate(ChainConfig cfg, Ablation mode) {
  if (mode == Ablation::NoHistory || mode == Ablation::Neither) cfg.max_history = 0;
  if (mode == Ablation::NoPlan || mode == Ablation::Neither) cfg.include_plan = false;
  return cfg;
}

std::string render_input(std::string_view goal, std::span<const Action> history,
                         double tap_threshold) {
  std::string out(kGoalPrompt);
  out += goal;
  out += kHistoryPrompt;
  out += render_history(history, tap_threshold);
  return out;
}

namespace {

std::vector<ChainSample> build(const Episode& e, std::span<const Action> history_source,
                               const ChainConfig& cfg) {
  if (cfg.max_plan < 1) fail(ErrorCode::InvalidArgument, "max_plan must be at least 1");
  validate(e);
  const double tap = cfg.tap_threshold;

  std::vector<Action> gold;
  gold.reserve(e.length());
  for (const Step& s : e.steps) gold.push_back(normalize(s.gold, tap));
  std::vector<Action> source;
  source.reserve(history_source.size());
  for (const Action& a : history_source) source.push_back(normalize(a, tap));

  const std::size_t k = e.length();
  std::vector<ChainSample> out;
  out.reserve(k);
  for (std::size_t i = 0; i < k; ++i) {  // i = t - 1
    const std::size_t hist_len = std::min(i, cfg.max_history);
    std::span<const Action> history(source.data() + (i - hist_len), hist_len);

    ChainSample s;
    s.episode_id = e.id;
    s.step = i + 1;
    s.input_text = render_input(e.goal, history, tap);
    if (cfg.include_plan) {
      const std::size_t plan_len = std::min(k - i, cfg.max_plan);
      std::vector<ActionType> plan;
      plan.reserve(plan_len);
      for (std::size_t j = i; j < i + plan_len; ++j) plan.push_back(gold[j].type);
      s.target_text = render_target(plan, gold[i], tap);
    } else {
      s.target_text = render_decision_target(gold[i], tap);
    }
    out.push_back(std::move(s));
  }
  return out;
}

}  // namespace

std::vector<ChainSample> build_samples(const Episode& e, const ChainConfig& cfg) {
  std::vector<Action> gold;
  gold.reserve(e.length());
  for (const Step& s : e.steps) gold.push_back(s.gold);
  return build(e, gold, cfg);
}

std::vector<ChainSample> build_samples(const Episode& e, std::span<const Action> predicted,
                                       const ChainConfig& cfg) {
  if (predicted.size() != e.length()) {
    fail(ErrorCode::LengthMismatch, "episode '" + e.id + "' has " + std::to_string(e.length()) +
                                        " steps but got " + std::to_string(predicted.size()) +
                                        " predicted actions");
  }
  return build(e, predicted, cfg);
}

std::string to_jsonl_line(const ChainSample& s) {
  nlohmann::ordered_json doc;
  doc["input"] = s.input_text;
  doc["target"] = s.target_text;
  doc["episode_id"] = s.episode_id;
  doc["step"] = s.step;
  return doc.dump();
}

}  // namespace guikit
