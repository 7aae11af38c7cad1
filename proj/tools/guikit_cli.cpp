// guikit command line. Links only against the C API in libguikit.

#include <guikit/guikit.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

namespace {

struct Failure {
  gk_status status;
  std::string message;
};

void check(gk_status s) {
  if (s != GK_OK) throw Failure{s, gk_last_error()};
}

template <typename T, void (*Free)(T*)>
struct Deleter {
  void operator()(T* p) const { Free(p); }
};
using Dataset = std::unique_ptr<gk_dataset, Deleter<gk_dataset, gk_dataset_free>>;
using Predictions = std::unique_ptr<gk_predictions, Deleter<gk_predictions, gk_predictions_free>>;
using Config = std::unique_ptr<gk_config, Deleter<gk_config, gk_config_free>>;
using Report = std::unique_ptr<gk_report, Deleter<gk_report, gk_report_free>>;

std::string take(char* s) {
  std::string out(s ? s : "");
  gk_string_free(s);
  return out;
}

void print(const std::string& text) {
  std::cout << text;
  if (text.empty() || text.back() != '\n') std::cout << '\n';
}

Dataset load_dataset(const std::string& path) {
  gk_dataset* d = nullptr;
  check(gk_dataset_load(path.c_str(), &d));
  return Dataset(d);
}

Dataset subsample(Dataset d, double fraction, std::uint64_t seed) {
  if (fraction >= 1.0) return d;
  gk_dataset* out = nullptr;
  check(gk_dataset_subsample(d.get(), fraction, seed, &out));
  return Dataset(out);
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out || !(out << text)) throw Failure{GK_ERR_IO, path.string() + ": cannot write"};
}

gk_format format_of(const std::string& name) { return name == "csv" ? GK_FORMAT_CSV : GK_FORMAT_JSON; }

// Options shared by every subcommand that needs a match configuration.
struct MatchFlags {
  std::string config_path;
  std::optional<std::string> threshold, tap_threshold, text_policy, scroll_mode, distance,
      aggregation, text_in_overall;

  void attach(CLI::App* app) {
    app->add_option("--config", config_path, "flat key = value config file (default: $GUIKIT_CONFIG)");
    app->add_option("--threshold", threshold, "click match radius in normalized units (default 0.14)");
    app->add_option("--tap-threshold", tap_threshold, "max touch/lift distance of a click (default 0.04)");
    app->add_option("--text-policy", text_policy, "lenient|strict")
        ->check(CLI::IsMember({"lenient", "strict"}));
    app->add_option("--scroll-mode", scroll_mode, "axis|strict")->check(CLI::IsMember({"axis", "strict"}));
    app->add_option("--distance", distance, "euclidean|chebyshev")
        ->check(CLI::IsMember({"euclidean", "chebyshev"}));
    app->add_option("--aggregation", aggregation, "subset_mean|step_weighted")
        ->check(CLI::IsMember({"subset_mean", "step_weighted"}));
    app->add_option("--text-in-overall", text_in_overall, "true|false")
        ->check(CLI::IsMember({"true", "false"}));
  }

  // defaults < config file < flags
  Config resolve() const {
    gk_config* raw = nullptr;
    check(gk_config_create(&raw));
    Config cfg(raw);
    std::string path = config_path;
    if (path.empty()) {
      if (const char* env = std::getenv("GUIKIT_CONFIG"); env && *env) path = env;
    }
    if (!path.empty()) check(gk_config_load_file(cfg.get(), path.c_str()));
    const std::pair<const char*, const std::optional<std::string>*> flags[] = {
        {"threshold", &threshold},     {"tap_threshold", &tap_threshold},
        {"text_policy", &text_policy}, {"scroll_mode", &scroll_mode},
        {"distance", &distance},       {"aggregation", &aggregation},
        {"text_in_overall", &text_in_overall}};
    for (const auto& [key, value] : flags) {
      if (*value) check(gk_config_set(cfg.get(), key, (*value)->c_str()));
    }
    return cfg;
  }
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"guikit: action protocol, metric and dataset tools for GUI agents"};
  app.set_version_flag("--version", gk_version());
  app.require_subcommand(1);

  std::uint64_t seed = 0;
  double fraction = 1.0;
  unsigned workers = 1;
  std::string format = "json";
  auto add_format = [&](CLI::App* sub) {
    sub->add_option("--format", format, "json|csv")->check(CLI::IsMember({"json", "csv"}));
  };

  // score
  auto* score = app.add_subcommand("score", "score predictions against gold episodes");
  std::string gold_path, pred_path, out_prefix;
  MatchFlags score_flags;
  score->add_option("--gold", gold_path, "gold episodes (JSONL)")->required();
  score->add_option("--pred", pred_path, "predictions (JSONL)")->required();
  score->add_option("--out", out_prefix, "write PREFIX.json and PREFIX.csv");
  score->add_option("--workers", workers, "episode-parallel worker threads")->check(CLI::Range(1u, 256u));
  add_format(score);
  score_flags.attach(score);

  // stats
  auto* stats = app.add_subcommand("stats", "episode, screen and instruction counts per subset");
  std::string data_path;
  stats->add_option("--data", data_path, "episodes (JSONL)")->required();
  stats->add_option("--fraction", fraction, "subsample this fraction of episodes")
      ->check(CLI::Range(0.0, 1.0));
  stats->add_option("--seed", seed, "subsampling seed");
  add_format(stats);

  // split
  auto* split = app.add_subcommand("split", "episode-wise train/val/test split");
  std::string out_dir;
  std::vector<double> ratios{80, 10, 10};
  split->add_option("--data", data_path, "episodes (JSONL)")->required();
  split->add_option("--out-dir", out_dir, "directory for train/val/test.jsonl")->required();
  split->add_option("--ratios", ratios, "train val test percentages")->expected(3)->delimiter(',');
  split->add_option("--seed", seed, "shuffle seed");
  split->add_option("--fraction", fraction, "keep this fraction of the train split")
      ->check(CLI::Range(0.0, 1.0));

  // build-chains
  auto* chains = app.add_subcommand("build-chains", "emit {input, target} chain-of-action samples");
  std::string chains_out, chains_pred;
  std::size_t max_history = 8, max_plan = 4;
  bool no_history = false, no_plan = false;
  MatchFlags chain_flags;
  chains->add_option("--data", data_path, "episodes (JSONL)")->required();
  chains->add_option("--out", chains_out, "output JSONL")->required();
  chains->add_option("--max-history", max_history, "previous actions kept in the input");
  chains->add_option("--max-plan", max_plan, "future action types in the target");
  chains->add_flag("--no-history", no_history, "drop the history chain");
  chains->add_flag("--no-plan", no_plan, "drop the plan chain");
  chains->add_option("--predictions", chains_pred, "rebuild history from these predictions");
  chain_flags.attach(chains);

  // run-fixture-agent
  auto* agent = app.add_subcommand("run-fixture-agent", "write predictions from a scripted agent");
  std::string agent_name = "oracle", agent_out;
  double radius = 0.05;
  int constant_type = GK_ACTION_GO_HOME;
  MatchFlags agent_flags;
  agent->add_option("--agent", agent_name, "oracle|perturbed|axis-flipper|constant")
      ->check(CLI::IsMember({"oracle", "perturbed", "axis-flipper", "constant"}));
  agent->add_option("--gold", gold_path, "gold episodes (JSONL)")->required();
  agent->add_option("--out", agent_out, "output predictions (JSONL)")->required();
  agent->add_option("--radius", radius, "per-axis shift of the perturbed oracle");
  agent->add_option("--constant-type", constant_type, "action code the constant agent emits");
  agent->add_option("--seed", seed, "agent seed");
  agent_flags.attach(agent);

  // selfcheck
  auto* selfcheck = app.add_subcommand("selfcheck", "run golden, normalization, gradient and split checks");
  std::string golden_dir;
  selfcheck->add_option("--golden-dir", golden_dir, "directory holding decisions.golden");

  CLI11_PARSE(app, argc, argv);

  try {
    if (score->parsed()) {
      const Config cfg = score_flags.resolve();
      const Dataset gold = load_dataset(gold_path);
      gk_predictions* p = nullptr;
      check(gk_predictions_load(pred_path.c_str(), &p));
      const Predictions preds(p);
      gk_report* r = nullptr;
      check(gk_score(gold.get(), preds.get(), cfg.get(), workers, &r));
      const Report report(r);
      char* text = nullptr;
      if (!out_prefix.empty()) {
        check(gk_report_render(report.get(), GK_FORMAT_JSON, &text));
        write_text(out_prefix + ".json", take(text));
        check(gk_report_render(report.get(), GK_FORMAT_CSV, &text));
        write_text(out_prefix + ".csv", take(text));
      }
      check(gk_report_render(report.get(), format_of(format), &text));
      print(take(text));
    } else if (stats->parsed()) {
      const Dataset d = subsample(load_dataset(data_path), fraction, seed);
      char* text = nullptr;
      check(gk_dataset_stats(d.get(), format_of(format), &text));
      print(take(text));
    } else if (split->parsed()) {
      const Dataset d = load_dataset(data_path);
      gk_dataset *tr = nullptr, *va = nullptr, *te = nullptr;
      check(gk_dataset_split(d.get(), ratios[0], ratios[1], ratios[2], seed, fraction, &tr, &va, &te));
      const Dataset train(tr), val(va), test(te);
      std::filesystem::create_directories(out_dir);
      const std::pair<const char*, const gk_dataset*> parts[] = {
          {"train", train.get()}, {"val", val.get()}, {"test", test.get()}};
      for (const auto& [name, part] : parts) {
        const auto path = std::filesystem::path(out_dir) / (std::string(name) + ".jsonl");
        check(gk_dataset_save(part, path.string().c_str()));
        std::cout << name << '\t' << gk_dataset_size(part) << '\t' << path.string() << '\n';
      }
    } else if (chains->parsed()) {
      const Config cfg = chain_flags.resolve();
      const Dataset d = load_dataset(data_path);
      Predictions preds;
      if (!chains_pred.empty()) {
        gk_predictions* p = nullptr;
        check(gk_predictions_load(chains_pred.c_str(), &p));
        preds.reset(p);
      }
      const int flags = (no_history ? GK_CHAIN_NO_HISTORY : 0) | (no_plan ? GK_CHAIN_NO_PLAN : 0);
      check(gk_dataset_build_chains(d.get(), max_history, max_plan, flags, preds.get(),
                                    gk_config_tap_threshold(cfg.get()), chains_out.c_str()));
    } else if (agent->parsed()) {
      const Config cfg = agent_flags.resolve();
      const Dataset d = load_dataset(gold_path);
      gk_agent_kind kind = GK_AGENT_ORACLE;
      if (agent_name == "perturbed") kind = GK_AGENT_PERTURBED_ORACLE;
      else if (agent_name == "axis-flipper") kind = GK_AGENT_AXIS_FLIPPER;
      else if (agent_name == "constant") kind = GK_AGENT_CONSTANT_ACTION;
      check(gk_run_fixture_agent(d.get(), kind, radius, constant_type, seed,
                                 gk_config_tap_threshold(cfg.get()), agent_out.c_str()));
    } else if (selfcheck->parsed()) {
      int failures = 0;
      check(gk_selfcheck(
          golden_dir.empty() ? nullptr : golden_dir.c_str(),
          [](const char* name, int passed, const char* detail, void*) {
            std::printf("%s %-34s %s\n", passed ? "PASS" : "FAIL", name, detail);
          },
          nullptr, &failures));
      std::printf("%d failed\n", failures);
      return failures == 0 ? 0 : 1;
    }
  } catch (const Failure& f) {
    std::cerr << "error [" << gk_status_name(f.status) << "]: " << f.message << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
