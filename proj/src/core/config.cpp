#include "guikit/config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "guikit/error.hpp"
#include "text_scanner.hpp"

namespace guikit {

namespace {

double parse_fraction(std::string_view key, std::string_view value) {
  double v = 0;
  auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), v);
  if (ec != std::errc{} || ptr != value.data() + value.size() || !std::isfinite(v) || v < 0) {
    fail(ErrorCode::Config, std::string(key) + " expects a non-negative number, got '" +
                                std::string(value) + "'");
  }
  return v;
}

[[noreturn]] void bad_choice(std::string_view key, std::string_view value, std::string_view choices) {
  fail(ErrorCode::Config, std::string(key) + " must be one of " + std::string(choices) + ", got '" +
                              std::string(value) + "'");
}

}  // namespace

void apply_config_entry(MatchConfig& cfg, std::string_view key, std::string_view value) {
  key = detail::trim(key);
  value = detail::trim(value);
  if (key == "threshold") {
    cfg.click_radius = parse_fraction(key, value);
  } else if (key == "tap_threshold") {
    cfg.tap_threshold = parse_fraction(key, value);
  } else if (key == "distance") {
    if (value == "euclidean") cfg.metric = DistanceMetric::Euclidean;
    else if (value == "chebyshev") cfg.metric = DistanceMetric::Chebyshev;
    else bad_choice(key, value, "euclidean|chebyshev");
  } else if (key == "text_policy") {
    if (value == "lenient") cfg.text_policy = TextPolicy::Lenient;
    else if (value == "strict") cfg.text_policy = TextPolicy::Strict;
    else bad_choice(key, value, "lenient|strict");
  } else if (key == "scroll_mode") {
    if (value == "axis") cfg.scroll_mode = ScrollMode::Axis;
    else if (value == "strict") cfg.scroll_mode = ScrollMode::Strict;
    else bad_choice(key, value, "axis|strict");
  } else if (key == "aggregation") {
    if (value == "subset_mean") cfg.aggregation = AggregationMode::SubsetMean;
    else if (value == "step_weighted") cfg.aggregation = AggregationMode::StepWeighted;
    else bad_choice(key, value, "subset_mean|step_weighted");
  } else if (key == "text_in_overall") {
    if (value == "true") cfg.text_in_overall = true;
    else if (value == "false") cfg.text_in_overall = false;
    else bad_choice(key, value, "true|false");
  } else {
    fail(ErrorCode::Config, "unknown config key '" + std::string(key) + "'");
  }
}

MatchConfig parse_config(std::string_view text, MatchConfig base, const std::string& source) {
  std::size_t lineno = 0;
  while (!text.empty()) {
    ++lineno;
    const auto nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = detail::trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    const std::string where = source + ":" + std::to_string(lineno) + ": ";
    if (eq == std::string_view::npos) fail(ErrorCode::Config, where + "expected 'key = value'");
    try {
      apply_config_entry(base, line.substr(0, eq), line.substr(eq + 1));
    } catch (const Error& e) {
      fail(ErrorCode::Config, where + e.what());
    }
  }
  return base;
}

MatchConfig load_config(const std::filesystem::path& path, MatchConfig base) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorCode::Io, path.string() + ": cannot open config file");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str(), base, path.string());
}

std::string to_config_text(const MatchConfig& cfg) {
  std::ostringstream os;
  os.precision(17);
  os << "threshold = " << cfg.click_radius << '\n'
     << "tap_threshold = " << cfg.tap_threshold << '\n'
     << "distance = " << (cfg.metric == DistanceMetric::Euclidean ? "euclidean" : "chebyshev") << '\n'
     << "text_policy = " << (cfg.text_policy == TextPolicy::Lenient ? "lenient" : "strict") << '\n'
     << "scroll_mode = " << (cfg.scroll_mode == ScrollMode::Axis ? "axis" : "strict") << '\n'
     << "aggregation = "
     << (cfg.aggregation == AggregationMode::SubsetMean ? "subset_mean" : "step_weighted") << '\n'
     << "text_in_overall = " << (cfg.text_in_overall ? "true" : "false") << '\n';
  return os.str();
}

}  // namespace guikit
