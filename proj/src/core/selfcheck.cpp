#include "guikit/selfcheck.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>
#include <set>
#include <sstream>

#include "guikit/action.hpp"
#include "guikit/action_text.hpp"
#include "guikit/chain.hpp"
#include "guikit/episodes.hpp"
#include "guikit/error.hpp"
#include "guikit/fixture_agents.hpp"
#include "guikit/fusion.hpp"
#include "guikit/matching.hpp"
#include "guikit/predictions.hpp"
#include "guikit/synthetic.hpp"

namespace guikit {

namespace {

constexpr const char* kGoldenFile = "decisions.golden";

struct GoldenCase {
  const char* name;
  std::function<std::string()> render;
};

Action raw_click() { return make_click({0.84971234, 0.59640001}); }
Action raw_scroll_down() { return make_gesture({0.1898, 0.4477}, {0.8242, 0.4077}); }
Action news_query() { return make_type("what's the news in chile?"); }

std::vector<GoldenCase> golden_cases() {
  auto decision = [](std::function<Action()> make) {
    return [make] { return render_decision(normalize(make())); };
  };
  return {
      {"decision.click", decision(raw_click)},
      {"decision.scroll", decision(raw_scroll_down)},
      {"decision.type", decision(news_query)},
      {"decision.go_back", decision([] { return make_system(ActionType::GoBack); })},
      {"decision.go_home", decision([] { return make_system(ActionType::GoHome); })},
      {"decision.enter", decision([] { return make_system(ActionType::Enter); })},
      {"decision.status_complete", decision([] { return make_system(ActionType::StatusComplete); })},
      {"format.target_click",
       [] {
         const std::vector<ActionType> plan = {ActionType::DualPoint, ActionType::StatusComplete};
         return render_target(plan, normalize(raw_click()));
       }},
      {"format.target_terminal",
       [] {
         const std::vector<ActionType> plan = {ActionType::StatusComplete};
         return render_target(plan, make_system(ActionType::StatusComplete));
       }},
      {"format.history_two_step",
       [] {
         const std::vector<Action> h = {make_system(ActionType::GoHome), normalize(raw_click())};
         return render_history(h);
       }},
      {"format.input_second_step",
       [] {
         const std::vector<Action> h = {make_system(ActionType::GoHome)};
         return render_input("what's the news in chile?", h);
       }},
  };
}

CheckResult run(const std::string& name, const std::function<std::string()>& body) {
  try {
    std::string detail = body();
    return {name, true, std::move(detail)};
  } catch (const std::exception& e) {
    return {name, false, e.what()};
  }
}

void require(bool ok, const std::string& what) {
  if (!ok) throw std::runtime_error(what);
}

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(3);
  os << std::scientific << v;
  return os.str();
}

}  // namespace

std::map<std::string, std::string> builtin_goldens() {
  const std::string sentinel = R"("touch_point": [-1.0, -1.0], "lift_point": [-1.0, -1.0], )";
  const std::string click =
      R"("action_type": 4, "touch_point": [0.8497, 0.5964], "lift_point": [0.8497, 0.5964], "typed_text": "")";
  const std::string go_home = R"("action_type": 6, )" + sentinel + R"("typed_text": "")";
  const std::string done = R"("action_type": 10, )" + sentinel + R"("typed_text": "")";
  return {
      {"decision.click", click},
      {"decision.scroll",
       R"("action_type": 4, "touch_point": [0.2, 0.5], "lift_point": [0.8, 0.5], "typed_text": "")"},
      {"decision.type",
       R"("action_type": 3, )" + sentinel + R"("typed_text": "what's the news in chile?")"},
      {"decision.go_back", R"("action_type": 5, )" + sentinel + R"("typed_text": "")"},
      {"decision.go_home", go_home},
      {"decision.enter", R"("action_type": 7, )" + sentinel + R"("typed_text": "")"},
      {"decision.status_complete", done},
      {"format.target_click", "Action Plan: [4, 10] ; Action Decision: " + click},
      {"format.target_terminal", "Action Plan: [10] ; Action Decision: " + done},
      {"format.history_two_step",
       R"(step 1: (6, [-1.0, -1.0], [-1.0, -1.0], "") ; step 2: (4, [0.8497, 0.5964], [0.8497, 0.5964], ""))"},
      {"format.input_second_step",
       R"(Goal: what's the news in chile? ; Previous Actions: step 1: (6, [-1.0, -1.0], [-1.0, -1.0], ""))"},
  };
}

std::map<std::string, std::string> load_goldens(const std::filesystem::path& dir) {
  const auto path = dir / kGoldenFile;
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorCode::Io, path.string() + ": cannot open golden file");
  std::map<std::string, std::string> out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line.front() == '#') continue;
    const auto tab = line.find('\t');
    if (tab == std::string::npos) {
      fail(ErrorCode::Schema, path.string() + ":" + std::to_string(lineno) + ": expected name<TAB>value");
    }
    out[line.substr(0, tab)] = line.substr(tab + 1);
  }
  return out;
}

std::vector<CheckResult> run_selfcheck(const std::filesystem::path& golden_dir) {
  std::vector<CheckResult> results;

  std::map<std::string, std::string> goldens;
  if (golden_dir.empty()) {
    goldens = builtin_goldens();
  } else {
    try {
      goldens = load_goldens(golden_dir);
    } catch (const std::exception& e) {
      results.push_back({"golden.load", false, e.what()});
    }
  }

  for (const GoldenCase& c : golden_cases()) {
    results.push_back(run(c.name, [&] {
      auto it = goldens.find(c.name);
      require(it != goldens.end(), "no golden entry");
      const std::string got = c.render();
      require(got == it->second, "rendered '" + got + "' but golden is '" + it->second + "'");
      return std::string("byte-identical");
    }));
  }

  results.push_back(run("normalize.scroll_down_example", [] {
    const Action n = normalize(raw_scroll_down());
    require(classify_gesture(raw_scroll_down()) == GestureKind::ScrollDown, "not classified as down");
    require(n.touch == Point{0.2, 0.5} && n.lift == Point{0.8, 0.5}, "not snapped to the down pair");
    return std::string("down -> [0.2, 0.5], [0.8, 0.5]");
  }));
  results.push_back(run("normalize.fixed_pairs", [] {
    const struct {
      Action raw;
      GestureKind kind;
      Point touch, lift;
    } cases[] = {
        {make_gesture({0.9, 0.4}, {0.1, 0.45}), GestureKind::ScrollUp, {0.8, 0.5}, {0.2, 0.5}},
        {make_gesture({0.1, 0.4}, {0.9, 0.45}), GestureKind::ScrollDown, {0.2, 0.5}, {0.8, 0.5}},
        {make_gesture({0.5, 0.9}, {0.45, 0.1}), GestureKind::ScrollLeft, {0.5, 0.8}, {0.5, 0.2}},
        {make_gesture({0.5, 0.1}, {0.45, 0.9}), GestureKind::ScrollRight, {0.5, 0.2}, {0.5, 0.8}},
    };
    for (const auto& c : cases) {
      require(classify_gesture(c.raw) == c.kind, "wrong direction for " + std::string(to_string(c.kind)));
      const Action n = normalize(c.raw);
      require(n.touch == c.touch && n.lift == c.lift, "wrong pair for " + std::string(to_string(c.kind)));
    }
    return std::string("up/down/left/right");
  }));
  results.push_back(run("normalize.click_example", [] {
    require(classify_gesture(make_click({0.7761, 0.7089})) == GestureKind::Click, "not a click");
    return std::string("[0.7761, 0.7089] is a click");
  }));

  const fusion::Dims dims{1, 32, 8, 16};
  const fusion::Dims multi{4, 32, 8, 16};
  for (fusion::GradTarget t :
       {fusion::GradTarget::Projection, fusion::GradTarget::AttentionQuery,
        fusion::GradTarget::AttentionProjection, fusion::GradTarget::GateLanguage,
        fusion::GradTarget::GateVision, fusion::GradTarget::Pipeline}) {
    results.push_back(run("fusion.grad." + std::string(fusion::to_string(t)), [&] {
      const double limit = t == fusion::GradTarget::Projection ? 1e-6 : 1e-4;
      const auto b = fusion::random_bundle(multi, 11);
      const auto p = fusion::random_params(multi, 12);
      const auto r = fusion::grad_check(t, b, p, 1e-5, 13);
      require(r.max_relative_error <= limit,
              "max relative error " + fmt(r.max_relative_error) + " > " + fmt(limit));
      return "max relative error " + fmt(r.max_relative_error) + " over " +
             std::to_string(r.entries) + " entries";
    }));
  }
  results.push_back(run("fusion.attention_rows", [&] {
    for (const auto& d : {dims, multi}) {
      const auto a = fusion::attend(fusion::random_bundle(d, 21), fusion::random_params(d, 22));
      for (std::size_t i = 0; i < a.weights.rows(); ++i) {
        double sum = 0;
        for (double w : a.weights.row(i)) {
          require(w >= 0.0, "negative attention weight");
          sum += w;
        }
        require(std::abs(sum - 1.0) <= 1e-9, "row " + std::to_string(i) + " sums to " + fmt(sum));
      }
    }
    return std::string("rows are probability vectors");
  }));
  results.push_back(run("fusion.gate_convex", [&] {
    const auto b = fusion::random_bundle(multi, 31);
    const auto p = fusion::random_params(multi, 32);
    const auto a = fusion::attend(b, p);
    const auto f = fusion::gate_fuse(b.language, a.output, p);
    for (std::size_t i = 0; i < f.output.size(); ++i) {
      const double lo = std::min(b.language.data()[i], a.output.data()[i]);
      const double hi = std::max(b.language.data()[i], a.output.data()[i]);
      require(f.gate.data()[i] > 0.0 && f.gate.data()[i] < 1.0, "gate outside (0,1)");
      require(f.output.data()[i] >= lo && f.output.data()[i] <= hi, "fused value outside inputs");
    }
    return std::string("fused output between its inputs");
  }));

  const auto pool = synthetic_episodes({.episodes = 100, .seed = 7});
  results.push_back(run("split.sizes", [&] {
    const Split s = split(pool, {}, 7);
    require(s.train.size() == 80 && s.val.size() == 10 && s.test.size() == 10, "expected 80/10/10");
    return std::string("80/10/10");
  }));
  results.push_back(run("split.determinism", [&] {
    const Split a = split(pool, {}, 7);
    std::vector<Episode> reversed_pool(pool.rbegin(), pool.rend());
    const Split b = split(reversed_pool, {}, 7);
    require(a.train == b.train && a.val == b.val && a.test == b.test, "partitions differ");
    return std::string("same seed, same partition, independent of input order");
  }));
  results.push_back(run("split.partition", [&] {
    const Split s = split(pool, {}, 7);
    std::set<std::string> ids;
    for (const auto* part : {&s.train, &s.val, &s.test})
      for (const Episode& e : *part) require(ids.insert(e.id).second, "episode in two splits: " + e.id);
    require(ids.size() == pool.size(), "split lost episodes");
    return std::string("disjoint and exhaustive");
  }));
  results.push_back(run("metric.oracle", [&] {
    const std::string lines = run_agent_jsonl({}, pool);
    std::istringstream in(lines);
    const auto report = score_dataset(pool, read_predictions(in));
    require(report.overall.matching_score == 1.0, "oracle scored " + fmt(report.overall.matching_score));
    return std::string("oracle matching score 1.0");
  }));
  return results;
}

}  // namespace guikit
