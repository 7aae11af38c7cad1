#pragma once

#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "guikit/action.hpp"
#include "guikit/episodes.hpp"
#include "guikit/matching.hpp"

namespace guikit {

/// Predictions keyed by episode id, index i holding step i + 1. An entry is
/// nullopt when the decision string could not be parsed; such steps score as
/// wrong instead of aborting the run.
struct PredictionSet {
  std::map<std::string, std::vector<std::optional<Action>>> by_episode;
  std::size_t unparseable = 0;
};

/// Lines look like {"episode_id": ..., "step": 1, "decision": "<decision string>"}
/// or carry a structured "action": {type_code, touch, lift, text} instead.
PredictionSet read_predictions(std::istream& in, const std::string& source = "<stream>");
PredictionSet load_predictions(const std::filesystem::path& path);

std::string prediction_line(const std::string& episode_id, std::size_t step, const Action& a,
                            double tap_threshold = kDefaultTapThreshold);

struct DatasetReport {
  MatchReport overall;
  std::vector<MatchReport> subsets;   // step-weighted within a subset
  std::vector<MatchReport> episodes;  // in input order
  AggregationMode aggregation = AggregationMode::SubsetMean;
  std::size_t unparseable = 0;
};

/// Scores every episode (optionally on `workers` threads), pools steps within
/// each subset, then combines subsets with cfg.aggregation.
DatasetReport score_dataset(const std::vector<Episode>& episodes, const PredictionSet& preds,
                            const MatchConfig& cfg = {}, unsigned workers = 1);

std::string report_to_json(const DatasetReport& r, bool include_steps = true);
std::string report_to_csv(const DatasetReport& r);
std::string report_to_json(const MatchReport& r);

}  // namespace guikit
