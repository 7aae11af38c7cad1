// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any FAIL.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

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
#include "support.hpp"

using namespace guikit;
using Clock = std::chrono::steady_clock;

namespace {

struct Outcome {
  bool ok = true;
  std::string detail;
};

// Collects the first few failures of a criterion.
class Probe {
 public:
  void expect(bool cond, const std::string& what) {
    if (cond) return;
    ++failures_;
    if (failures_ <= 3) notes_ += (notes_.empty() ? "" : "; ") + what;
  }
  Outcome done(const std::string& summary) const {
    if (failures_ == 0) return {true, summary};
    return {false, std::to_string(failures_) + " failure(s): " + notes_};
  }

 private:
  std::size_t failures_ = 0;
  std::string notes_;
};

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

std::vector<Episode> fixture(const std::string& name) {
  return load_jsonl(std::string(GUIKIT_FIXTURE_DIR) + "/" + name);
}

DatasetReport score_agent(const FixtureAgent& agent, const std::vector<Episode>& eps,
                          const MatchConfig& cfg = {}) {
  std::istringstream in(run_agent_jsonl(agent, eps, cfg.tap_threshold));
  return score_dataset(eps, read_predictions(in), cfg);
}

// ---------------------------------------------------------------------------

Outcome target_output_table() {
  const auto t0 = Clock::now();
  const std::string s = R"("touch_point": [-1.0, -1.0], "lift_point": [-1.0, -1.0], )";
  const struct {
    const char* name;
    Action raw;
    std::string want;
  } rows[] = {
      {"click", make_click({0.84971234, 0.59640001}),
       R"("action_type": 4, "touch_point": [0.8497, 0.5964], "lift_point": [0.8497, 0.5964], "typed_text": "")"},
      {"scroll", make_gesture({0.1898, 0.4477}, {0.8242, 0.4077}),
       R"("action_type": 4, "touch_point": [0.2, 0.5], "lift_point": [0.8, 0.5], "typed_text": "")"},
      {"type", make_type("what's the news in chile?"),
       R"("action_type": 3, )" + s + R"("typed_text": "what's the news in chile?")"},
      {"go_back", make_system(ActionType::GoBack), R"("action_type": 5, )" + s + R"("typed_text": "")"},
      {"go_home", make_system(ActionType::GoHome), R"("action_type": 6, )" + s + R"("typed_text": "")"},
      {"enter", make_system(ActionType::Enter), R"("action_type": 7, )" + s + R"("typed_text": "")"},
      {"status_complete", make_system(ActionType::StatusComplete),
       R"("action_type": 10, )" + s + R"("typed_text": "")"},
  };
  Probe p;
  for (const auto& r : rows) {
    const std::string got = render_decision(normalize(r.raw));
    p.expect(got == r.want, std::string(r.name) + " rendered as " + got);
  }
  const double dt = seconds_since(t0);
  p.expect(dt < 1.0, "took " + fmt("%.3f s", dt));
  return p.done("7/7 rows byte-identical in " + fmt("%.2e s", dt));
}

Outcome normalization_examples() {
  Probe p;
  const Action down = make_gesture({0.1898, 0.4477}, {0.8242, 0.4077});
  p.expect(classify_gesture(down) == GestureKind::ScrollDown, "example gesture not 'down'");
  const Action n = normalize(down);
  p.expect(n.touch == Point{0.2, 0.5} && n.lift == Point{0.8, 0.5}, "example not snapped to down pair");

  const struct {
    GestureKind kind;
    Point raw_touch, raw_lift, touch, lift;
  } pairs[] = {
      {GestureKind::ScrollUp, {0.7, 0.45}, {0.3, 0.5}, {0.8, 0.5}, {0.2, 0.5}},
      {GestureKind::ScrollDown, {0.3, 0.5}, {0.7, 0.45}, {0.2, 0.5}, {0.8, 0.5}},
      {GestureKind::ScrollLeft, {0.45, 0.7}, {0.5, 0.3}, {0.5, 0.8}, {0.5, 0.2}},
      {GestureKind::ScrollRight, {0.5, 0.3}, {0.45, 0.7}, {0.5, 0.2}, {0.5, 0.8}},
  };
  for (const auto& c : pairs) {
    const Action raw = make_gesture(c.raw_touch, c.raw_lift);
    p.expect(classify_gesture(raw) == c.kind, "direction " + std::string(to_string(c.kind)));
    const Action out = normalize(raw);
    p.expect(out.touch == c.touch && out.lift == c.lift, "pair " + std::string(to_string(c.kind)));
  }
  p.expect(classify_gesture(make_click({0.7761, 0.7089})) == GestureKind::Click, "click example");
  return p.done("down example, 4 fixed pairs, click example: exact");
}

Outcome metric_oracle_suite() {
  Probe p;
  for (const char* name : {"general_mini.jsonl", "click_only.jsonl", "scroll_only.jsonl", "mixed.jsonl"}) {
    const auto r = score_agent({}, fixture(name));
    p.expect(r.overall.matching_score == 1.0, std::string("oracle on ") + name);
  }
  const auto clicks = fixture("click_only.jsonl");
  p.expect(score_agent({AgentKind::PerturbedOracle, 0.05, ActionType::GoHome, 3}, clicks)
                   .overall.click_accuracy == 1.0,
           "perturbed 0.05 on click fixture");
  p.expect(score_agent({AgentKind::PerturbedOracle, 0.30, ActionType::GoHome, 3}, clicks)
                   .overall.click_accuracy == 0.0,
           "perturbed 0.30 on click fixture");

  // Timed run over 100 synthetic episodes.
  const auto t0 = Clock::now();
  const auto mixed = synthetic_episodes({.episodes = 100, .seed = 100});
  const auto synth_clicks = synthetic_episodes({.episodes = 100, .mix = StepMix::ClickOnly, .seed = 101});
  p.expect(score_agent({}, mixed).overall.matching_score == 1.0, "oracle on 100 synthetic");
  const auto near = score_agent({AgentKind::PerturbedOracle, 0.05, ActionType::GoHome, 4}, synth_clicks);
  const auto far = score_agent({AgentKind::PerturbedOracle, 0.30, ActionType::GoHome, 4}, synth_clicks);
  p.expect(near.overall.click_accuracy == 1.0, "perturbed 0.05 on synthetic");
  p.expect(far.overall.click_accuracy == 0.0, "perturbed 0.30 on synthetic");
  const double dt = seconds_since(t0);
  p.expect(dt < 5.0, "100-episode run took " + fmt("%.3f s", dt));
  return p.done("oracle 1.000 on 4 fixtures + 100 synthetic; shift 0.05 -> 1.0, 0.30 -> 0.0; " +
                fmt("%.3f s", dt));
}

Outcome scroll_axis_rule() {
  Probe p;
  const auto scrolls = fixture("scroll_only.jsonl");
  MatchConfig strict;
  strict.scroll_mode = ScrollMode::Strict;
  const FixtureAgent flip{AgentKind::AxisFlipper};
  const auto axis = score_agent(flip, scrolls).overall.scroll_accuracy;
  const auto exact = score_agent(flip, scrolls, strict).overall.scroll_accuracy;
  p.expect(axis == 1.0, "axis mode scored " + fmt("%.4f", axis.value_or(-1)));
  p.expect(exact == 0.0, "strict mode scored " + fmt("%.4f", exact.value_or(-1)));
  return p.done("axis mode 1.0, strict mode 0.0");
}

Outcome overall_arithmetic() {
  Probe p;
  std::vector<MatchReport> subsets;
  for (double v : {68.24, 76.89, 71.37, 84.58, 70.26}) {
    MatchReport r;
    r.matching_score = v;
    subsets.push_back(r);
  }
  const double got = aggregate(subsets).matching_score;
  p.expect(std::abs(got - 74.27) <= 0.01, "aggregate = " + fmt("%.6f", got));
  return p.done("aggregate = " + fmt("%.4f", got));
}

Outcome chain_windows() {
  Probe p;
  testing::Rng rng(31);
  std::size_t cases = 0;
  for (std::uint64_t seed = 0; cases < 10000; ++seed) {
    const auto e = synthetic_episodes({.episodes = 1, .min_steps = 1, .max_steps = 30,
                                       .seed = seed * 7919 + 1})[0];
    const auto samples = build_samples(e);
    const std::size_t k = e.length();
    for (std::size_t t = 1; t <= k && cases < 10000; ++t, ++cases) {
      const auto& s = samples[t - 1];
      const auto at = s.input_text.find(kHistoryPrompt);
      const auto history = parse_history(std::string_view(s.input_text).substr(at + kHistoryPrompt.size()));
      const auto plan = parse_target(s.target_text).plan;
      p.expect(history.size() == std::min<std::size_t>(t - 1, 8), "history at t=" + std::to_string(t));
      p.expect(plan.size() == std::min<std::size_t>(k - t + 1, 4), "plan at t=" + std::to_string(t));
    }
  }
  (void)rng;
  return p.done(std::to_string(cases) + " samples, zero window violations");
}

Action random_normal_action(testing::Rng& rng) {
  static const std::string alphabet = "ab Z'\"\\\n\t;:,[](){}0\xc3\xa9";
  switch (rng.below(4)) {
    case 0: return normalize(make_click({rng.unit(), rng.unit()}));
    case 1: return normalize(make_gesture({rng.unit(), rng.unit()}, {rng.unit(), rng.unit()}));
    case 2: {
      std::string s;
      for (std::size_t n = rng.below(20); n > 0; --n) s += alphabet[rng.below(alphabet.size())];
      return make_type(s);
    }
    default: {
      const ActionType sys[] = {ActionType::GoBack, ActionType::GoHome, ActionType::Enter,
                                ActionType::StatusComplete};
      return make_system(sys[rng.below(4)]);
    }
  }
}

Outcome round_trip_and_fuzz() {
  Probe p;
  testing::Rng rng(77);
  for (int i = 0; i < 10000; ++i) {
    const Action a = random_normal_action(rng);
    p.expect(parse_decision(render_decision(a)) == a, "decision " + std::to_string(i));
    std::vector<ActionType> plan = {a.type};
    for (std::size_t n = rng.below(4); n > 0; --n) plan.push_back(kAllActionTypes[rng.below(6)]);
    p.expect(parse_target(render_target(plan, a)) == Target{plan, a}, "target " + std::to_string(i));
    std::vector<Action> h;
    for (std::size_t n = rng.below(8); n > 0; --n) h.push_back(random_normal_action(rng));
    p.expect(parse_history(render_history(h)) == h, "history " + std::to_string(i));
  }

  const std::string seeds[] = {render_decision(make_click({0.5, 0.25})),
                               render_target(std::vector{ActionType::Type}, make_type("x")),
                               render_history(std::vector{make_system(ActionType::GoHome)})};
  std::size_t foreign = 0, rejected = 0;
  for (int i = 0; i < 100000; ++i) {
    std::string s;
    if (i % 2 == 0) {
      for (std::size_t n = rng.below(80); n > 0; --n) s += static_cast<char>(rng.below(256));
    } else {
      s = seeds[rng.below(3)];
      for (std::size_t n = 1 + rng.below(4); n > 0; --n) s[rng.below(s.size())] = static_cast<char>(rng.below(256));
    }
    for (int which = 0; which < 3; ++which) {
      try {
        if (which == 0) (void)parse_decision(s);
        if (which == 1) (void)parse_target_lenient(s);
        if (which == 2) (void)parse_history(s);
      } catch (const Error&) {
        ++rejected;
      } catch (...) {
        ++foreign;
      }
    }
  }
  p.expect(foreign == 0, std::to_string(foreign) + " non-guikit exceptions during fuzzing");
  return p.done("10^4 round-trips exact; 10^5 fuzz inputs, 0 crashes (" + std::to_string(rejected) +
                " clean rejections)");
}

fusion::Attention naive_attention(const fusion::Matrix& q, const fusion::Matrix& k, const fusion::Matrix& v) {
  const std::size_t n = q.rows(), m = k.rows(), d = q.cols();
  fusion::Attention out{fusion::Matrix(n, m), fusion::Matrix(n, v.cols())};
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<double> s(m);
    double mx = -1e300;
    for (std::size_t j = 0; j < m; ++j) {
      double dot = 0;
      for (std::size_t c = 0; c < d; ++c) dot += q(i, c) * k(j, c);
      s[j] = dot / std::sqrt(static_cast<double>(d));
      mx = std::max(mx, s[j]);
    }
    double z = 0;
    for (double x : s) z += std::exp(x - mx);
    for (std::size_t j = 0; j < m; ++j) out.weights(i, j) = std::exp(s[j] - mx) / z;
    for (std::size_t c = 0; c < v.cols(); ++c) {
      double acc = 0;
      for (std::size_t j = 0; j < m; ++j) acc += out.weights(i, j) * v(j, c);
      out.output(i, c) = acc;
    }
  }
  return out;
}

Outcome fusion_math() {
  using namespace guikit::fusion;
  Probe p;
  testing::Rng rng(5);
  double worst_row = 0, worst_grad = 0, worst_oracle = 0;
  for (int point = 0; point < 20; ++point) {
    const Dims d{1 + rng.below(4), 4 + rng.below(12), 1 + rng.below(8), 2 + rng.below(10)};
    const auto b = random_bundle(d, 1000 + point);
    const auto prm = random_params(d, 2000 + point);
    const Attention a = attend(b, prm);
    for (std::size_t i = 0; i < a.weights.rows(); ++i) {
      double sum = 0;
      for (double w : a.weights.row(i)) sum += w;
      worst_row = std::max(worst_row, std::abs(sum - 1.0));
    }
    const Matrix proj = project(b.screen, prm.projection);
    const Attention naive = naive_attention(b.language, proj, proj);
    worst_oracle = std::max({worst_oracle, max_abs_diff(a.weights, naive.weights),
                             max_abs_diff(a.output, naive.output)});

    const Fused f = gate_fuse(b.language, a.output, prm);
    for (std::size_t i = 0; i < f.output.size(); ++i) {
      const double lo = std::min(b.language.data()[i], a.output.data()[i]);
      const double hi = std::max(b.language.data()[i], a.output.data()[i]);
      p.expect(f.output.data()[i] >= lo && f.output.data()[i] <= hi, "gate output outside inputs");
    }
    for (GradTarget t : {GradTarget::Projection, GradTarget::AttentionQuery, GradTarget::AttentionProjection,
                         GradTarget::GateLanguage, GradTarget::GateVision, GradTarget::Pipeline}) {
      const double e = grad_check(t, b, prm, 1e-5, 3000 + point).max_relative_error;
      worst_grad = std::max(worst_grad, e);
      p.expect(e <= 1e-4, std::string(to_string(t)) + " rel. error " + fmt("%.3e", e));
    }
  }
  p.expect(worst_row <= 1e-9, "row sum error " + fmt("%.3e", worst_row));
  p.expect(worst_oracle <= 1e-10, "naive oracle gap " + fmt("%.3e", worst_oracle));
  return p.done("row sums " + fmt("%.1e", worst_row) + ", oracle gap " + fmt("%.1e", worst_oracle) +
                ", max grad rel. error " + fmt("%.2e", worst_grad) + " over 20 points x 6 targets");
}

std::vector<Episode> numbered(std::size_t n) {
  std::vector<Episode> out(n);
  for (std::size_t i = 0; i < n; ++i) {
    out[i].id = "ep-" + std::to_string(i);
    out[i].goal = "g";
    out[i].steps.push_back(Step{{10, 10, {}}, std::nullopt, make_system(ActionType::StatusComplete)});
  }
  return out;
}

Outcome split_determinism() {
  Probe p;
  for (std::size_t n : {3, 10, 100, 101, 999, 9476}) {
    const auto pool = numbered(n);
    const Split a = split(pool, {}, 7);
    const Split b = split(pool, {}, 7);
    const double exact[] = {0.8 * n, 0.1 * n, 0.1 * n};
    const std::size_t got[] = {a.train.size(), a.val.size(), a.test.size()};
    for (int i = 0; i < 3; ++i) {
      p.expect(std::abs(static_cast<double>(got[i]) - exact[i]) <= 1.0,
               "n=" + std::to_string(n) + " part " + std::to_string(i));
    }
    p.expect(a.train == b.train && a.val == b.val && a.test == b.test, "n=" + std::to_string(n) + " rerun differs");
    std::set<std::string> seen;
    for (const auto* part : {&a.train, &a.val, &a.test})
      for (const auto& e : *part) p.expect(seen.insert(e.id).second, "duplicate " + e.id);
    p.expect(seen.size() == n, "n=" + std::to_string(n) + " not exhaustive");
  }
  const auto sizes = split_sizes(9476, {});
  return p.done("sizes within 1 (9476 -> " + std::to_string(sizes[0]) + "/" + std::to_string(sizes[1]) +
                "/" + std::to_string(sizes[2]) + "), reruns identical, disjoint and exhaustive");
}

}  // namespace

int main() {
  const std::pair<const char*, std::function<Outcome()>> criteria[] = {
      {"target-output-table", target_output_table},
      {"normalization-examples", normalization_examples},
      {"metric-oracle-suite", metric_oracle_suite},
      {"scroll-axis-rule", scroll_axis_rule},
      {"overall-score-arithmetic", overall_arithmetic},
      {"chain-windows", chain_windows},
      {"round-trip-and-fuzz", round_trip_and_fuzz},
      {"fusion-math", fusion_math},
      {"split-determinism", split_determinism},
  };
  int failed = 0;
  for (const auto& [name, run] : criteria) {
    Outcome o;
    try {
      o = run();
    } catch (const std::exception& e) {
      o = {false, std::string("threw: ") + e.what()};
    }
    failed += o.ok ? 0 : 1;
    std::printf("%s %-26s %s\n", o.ok ? "PASS" : "FAIL", name, o.detail.c_str());
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(std::size(criteria)) - failed, std::size(criteria));
  return failed == 0 ? 0 : 1;
}
