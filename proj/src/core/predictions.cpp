#include "guikit/predictions.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <istream>
#include <set>
#include <thread>

#include <json.hpp>

#include "guikit/action_text.hpp"
#include "guikit/error.hpp"

namespace guikit {

using json = nlohmann::json;
using ordered_json = nlohmann::ordered_json;

namespace {

Point point_from(const json& v, const std::string& where, const char* name) {
  if (!v.is_array() || v.size() != 2 || !v[0].is_number() || !v[1].is_number()) {
    fail(ErrorCode::Schema, where + ": schema error in field 'action." + name + "': expected [y, x]");
  }
  return Point{v[0].get<double>(), v[1].get<double>()};
}

Action structured_action(const json& obj, const std::string& where) {
  auto bad = [&](const std::string& field, const std::string& why) {
    fail(ErrorCode::Schema, where + ": schema error in field 'action." + field + "': " + why);
  };
  if (!obj.is_object()) bad("", "expected an object");
  for (const char* key : {"type_code", "touch", "lift", "text"}) {
    if (!obj.contains(key)) bad(key, "missing");
  }
  if (!obj["type_code"].is_number_integer()) bad("type_code", "expected an integer");
  const auto code = obj["type_code"].get<long long>();
  auto type = (code >= 0 && code <= 100) ? action_type_from_code(static_cast<int>(code)) : std::nullopt;
  if (!type) bad("type_code", "unknown action type " + std::to_string(code));
  if (!obj["text"].is_string()) bad("text", "expected a string");
  Action a{*type, point_from(obj["touch"], where, "touch"), point_from(obj["lift"], where, "lift"),
           obj["text"].get<std::string>()};
  try {
    validate(a);
  } catch (const Error& e) {
    bad("touch/lift", e.what());
  }
  return a;
}

}  // namespace

PredictionSet read_predictions(std::istream& in, const std::string& source) {
  std::map<std::string, std::map<std::size_t, std::optional<Action>>> staged;
  PredictionSet out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    const std::string where = source + ":" + std::to_string(lineno);
    auto bad = [&](const std::string& field, const std::string& why) {
      fail(ErrorCode::Schema, where + ": schema error in field '" + field + "': " + why);
    };

    const json doc = json::parse(line, nullptr, false);
    if (doc.is_discarded() || !doc.is_object()) bad("<record>", "expected a JSON object");
    if (!doc.contains("episode_id") || !doc["episode_id"].is_string()) bad("episode_id", "expected a string");
    if (!doc.contains("step") || !doc["step"].is_number_unsigned()) bad("step", "expected a positive integer");
    const std::string id = doc["episode_id"].get<std::string>();
    const auto step = doc["step"].get<std::size_t>();
    if (step == 0) bad("step", "steps are numbered from 1");

    std::optional<Action> action;
    if (auto it = doc.find("decision"); it != doc.end()) {
      if (!it->is_string()) bad("decision", "expected a string");
      try {
        const std::string text = it->get<std::string>();
        // Model outputs often carry the whole target; keep only its decision.
        action = text.find(kDecisionPrompt) != std::string::npos ? parse_target_lenient(text).decision
                                                                 : parse_decision(text);
      } catch (const Error&) {
        ++out.unparseable;
      }
    } else if (auto ait = doc.find("action"); ait != doc.end()) {
      action = structured_action(*ait, where);
    } else {
      bad("decision", "missing (or provide a structured 'action')");
    }
    if (!staged[id].emplace(step, std::move(action)).second) {
      bad("step", "duplicate prediction for episode '" + id + "' step " + std::to_string(step));
    }
  }
  if (in.bad()) fail(ErrorCode::Io, source + ": read failed");

  for (auto& [id, steps] : staged) {
    std::vector<std::optional<Action>> ordered;
    std::size_t expected = 1;
    for (auto& [step, action] : steps) {
      if (step != expected) {
        fail(ErrorCode::Schema, source + ": predictions for episode '" + id +
                                    "' are not contiguous from step 1 (missing step " +
                                    std::to_string(expected) + ")");
      }
      ordered.push_back(std::move(action));
      ++expected;
    }
    out.by_episode.emplace(id, std::move(ordered));
  }
  return out;
}

PredictionSet load_predictions(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorCode::Io, path.string() + ": cannot open for reading");
  return read_predictions(in, path.string());
}

std::string prediction_line(const std::string& episode_id, std::size_t step, const Action& a,
                            double tap_threshold) {
  ordered_json doc;
  doc["episode_id"] = episode_id;
  doc["step"] = step;
  doc["decision"] = render_decision(a, tap_threshold);
  return doc.dump();
}

DatasetReport score_dataset(const std::vector<Episode>& episodes, const PredictionSet& preds,
                            const MatchConfig& cfg, unsigned workers) {
  if (episodes.empty()) fail(ErrorCode::EmptyAggregate, "no episodes to score");
  std::set<std::string> known;
  for (const Episode& e : episodes) known.insert(e.id);
  for (const auto& [id, _] : preds.by_episode) {
    if (!known.count(id)) {
      fail(ErrorCode::Schema, "prediction refers to unknown episode '" + id + "'");
    }
  }

  DatasetReport out;
  out.aggregation = cfg.aggregation;
  out.unparseable = preds.unparseable;
  out.episodes.resize(episodes.size());

  auto score_one = [&](std::size_t i) {
    const Episode& e = episodes[i];
    static const std::vector<std::optional<Action>> kNone;
    auto it = preds.by_episode.find(e.id);
    const auto& p = it == preds.by_episode.end() ? kNone : it->second;
    out.episodes[i] = score_episode(std::span<const std::optional<Action>>(p), e, cfg);
  };

  workers = std::clamp<unsigned>(workers, 1, 64);
  if (workers == 1 || episodes.size() < 2) {
    for (std::size_t i = 0; i < episodes.size(); ++i) score_one(i);
  } else {
    std::vector<std::exception_ptr> errors(workers);
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w) {
      pool.emplace_back([&, w] {
        try {
          for (std::size_t i = w; i < episodes.size(); i += workers) score_one(i);
        } catch (...) {
          errors[w] = std::current_exception();
        }
      });
    }
    for (auto& t : pool) t.join();
    for (auto& e : errors) {
      if (e) std::rethrow_exception(e);
    }
  }

  std::map<Subset, std::vector<MatchReport>> grouped;
  for (std::size_t i = 0; i < episodes.size(); ++i) {
    grouped[episodes[i].subset].push_back(out.episodes[i]);
  }
  for (auto& [subset, reports] : grouped) {
    out.subsets.push_back(
        aggregate(reports, AggregationMode::StepWeighted, std::string(to_string(subset))));
  }
  out.overall = aggregate(out.subsets, cfg.aggregation, "overall");
  return out;
}

namespace {

ordered_json optional_json(const std::optional<double>& v) {
  return v ? ordered_json(*v) : ordered_json(nullptr);
}

ordered_json count_json(const CategoryCount& c) {
  ordered_json j;
  j["total"] = c.total;
  j["correct"] = c.correct;
  return j;
}

ordered_json summary_json(const MatchReport& r) {
  ordered_json j;
  j["label"] = r.label;
  j["steps"] = r.overall.total;
  j["matching_score"] = r.matching_score;
  j["click_accuracy"] = optional_json(r.click_accuracy);
  j["scroll_accuracy"] = optional_json(r.scroll_accuracy);
  j["type_accuracy"] = optional_json(r.type_accuracy);
  j["text_accuracy"] = optional_json(r.text_accuracy);
  ordered_json counts;
  counts["overall"] = count_json(r.overall);
  counts["action_type"] = count_json(r.action_type);
  counts["click"] = count_json(r.click);
  counts["scroll"] = count_json(r.scroll);
  counts["text"] = count_json(r.text);
  j["counts"] = std::move(counts);
  return j;
}

ordered_json steps_json(const MatchReport& r) {
  ordered_json steps = ordered_json::array();
  for (const StepRecord& s : r.steps) {
    ordered_json j;
    j["episode_id"] = s.episode_id;
    j["step"] = s.step;
    j["category"] = std::string(to_string(s.verdict.category));
    j["type_correct"] = s.verdict.type_correct;
    j["gesture_correct"] = s.verdict.gesture_correct;
    j["overall_correct"] = s.verdict.overall_correct;
    steps.push_back(std::move(j));
  }
  return steps;
}

std::string csv_value(const std::optional<double>& v) {
  if (!v) return "";
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.6f", *v);
  return buf;
}

}  // namespace

std::string report_to_json(const MatchReport& r) {
  ordered_json j = summary_json(r);
  j["step_verdicts"] = steps_json(r);
  return j.dump(2);
}

std::string report_to_json(const DatasetReport& r, bool include_steps) {
  ordered_json j = summary_json(r.overall);
  j["aggregation"] = r.aggregation == AggregationMode::SubsetMean ? "subset_mean" : "step_weighted";
  j["unparseable_predictions"] = r.unparseable;
  ordered_json subsets = ordered_json::array();
  for (const MatchReport& s : r.subsets) subsets.push_back(summary_json(s));
  j["subsets"] = std::move(subsets);
  if (include_steps) j["step_verdicts"] = steps_json(r.overall);
  return j.dump(2);
}

std::string report_to_csv(const DatasetReport& r) {
  std::string out =
      "scope,steps,matching_score,click_accuracy,scroll_accuracy,type_accuracy,text_accuracy,"
      "click_total,scroll_total,text_total\n";
  auto row = [&](const MatchReport& m) {
    out += m.label + ',' + std::to_string(m.overall.total) + ',' +
           csv_value(m.matching_score) + ',' + csv_value(m.click_accuracy) + ',' +
           csv_value(m.scroll_accuracy) + ',' + csv_value(m.type_accuracy) + ',' +
           csv_value(m.text_accuracy) + ',' + std::to_string(m.click.total) + ',' +
           std::to_string(m.scroll.total) + ',' + std::to_string(m.text.total) + '\n';
  };
  row(r.overall);
  for (const MatchReport& s : r.subsets) row(s);
  return out;
}

}  // namespace guikit
