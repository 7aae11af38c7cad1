#include "guikit/episodes.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "guikit/error.hpp"
#include "random.hpp"

namespace guikit {

using json = nlohmann::json;
using ordered_json = nlohmann::ordered_json;

std::string_view to_string(Subset s) noexcept {
  switch (s) {
    case Subset::General: return "General";
    case Subset::Install: return "Install";
    case Subset::GoogleApps: return "GoogleApps";
    case Subset::Single: return "Single";
    case Subset::WebShopping: return "WebShopping";
  }
  return "General";
}

std::optional<Subset> subset_from_string(std::string_view name) noexcept {
  for (Subset s : kAllSubsets) {
    if (to_string(s) == name) return s;
  }
  return std::nullopt;
}

void validate(const Episode& e) {
  if (e.id.empty()) fail(ErrorCode::Schema, "episode id must not be empty");
  if (e.steps.empty()) fail(ErrorCode::Schema, "episode '" + e.id + "' has no steps");
  for (const Step& s : e.steps) {
    validate(s.screen);
    validate(s.gold);
  }
}

namespace {

class RecordReader {
 public:
  explicit RecordReader(std::string where) : where_(std::move(where)) {}

  [[noreturn]] void bad(const std::string& field, const std::string& why) const {
    fail(ErrorCode::Schema, where_ + ": schema error in field '" + field + "': " + why);
  }

  const json& member(const json& obj, const char* key, const std::string& path) const {
    auto it = obj.find(key);
    if (it == obj.end()) bad(path + key, "missing");
    return *it;
  }

  std::string string_at(const json& obj, const char* key, const std::string& path) const {
    const json& v = member(obj, key, path);
    if (!v.is_string()) bad(path + key, "expected a string");
    return v.get<std::string>();
  }

  long long integer_at(const json& obj, const char* key, const std::string& path) const {
    const json& v = member(obj, key, path);
    if (!v.is_number_integer()) bad(path + key, "expected an integer");
    return v.get<long long>();
  }

  double number(const json& v, const std::string& field) const {
    if (!v.is_number()) bad(field, "expected a number");
    const double d = v.get<double>();
    if (!std::isfinite(d)) bad(field, "expected a finite number");
    return d;
  }

  Point point_at(const json& obj, const char* key, const std::string& path) const {
    const json& v = member(obj, key, path);
    const std::string field = path + key;
    if (!v.is_array() || v.size() != 2) bad(field, "expected [y, x]");
    return Point{number(v[0], field), number(v[1], field)};
  }

  ScreenGeometry screen(const json& obj, const std::string& path, std::optional<std::string>& image) const {
    if (!obj.is_object()) bad(path.substr(0, path.size() - 1), "expected an object");
    ScreenGeometry g;
    const long long h = integer_at(obj, "h", path);
    const long long w = integer_at(obj, "w", path);
    if (h <= 0 || h > 1'000'000) bad(path + "h", "must be a positive pixel count");
    if (w <= 0 || w > 1'000'000) bad(path + "w", "must be a positive pixel count");
    g.height = static_cast<int>(h);
    g.width = static_cast<int>(w);
    if (auto it = obj.find("boxes"); it != obj.end()) {
      if (!it->is_array()) bad(path + "boxes", "expected an array");
      for (std::size_t i = 0; i < it->size(); ++i) {
        const json& b = (*it)[i];
        const std::string field = path + "boxes[" + std::to_string(i) + "]";
        if (!b.is_array() || b.size() != 4) bad(field, "expected [y_min, x_min, y_max, x_max]");
        BoundingBox box{number(b[0], field), number(b[1], field), number(b[2], field),
                        number(b[3], field)};
        const bool ok = 0.0 <= box.y_min && box.y_min <= box.y_max && box.y_max <= 1.0 &&
                        0.0 <= box.x_min && box.x_min <= box.x_max && box.x_max <= 1.0;
        if (!ok) bad(field, "box must satisfy 0 <= min <= max <= 1");
        g.boxes.push_back(box);
      }
    }
    if (auto it = obj.find("image"); it != obj.end() && !it->is_null()) {
      if (!it->is_string()) bad(path + "image", "expected a string or null");
      image = it->get<std::string>();
    }
    return g;
  }

  Action action(const json& obj, const std::string& path) const {
    if (!obj.is_object()) bad(path.substr(0, path.size() - 1), "expected an object");
    const long long code = integer_at(obj, "type_code", path);
    auto type = (code >= 0 && code <= 100) ? action_type_from_code(static_cast<int>(code))
                                           : std::nullopt;
    if (!type) bad(path + "type_code", "unknown action type " + std::to_string(code));
    Action a{*type, point_at(obj, "touch", path), point_at(obj, "lift", path),
             string_at(obj, "text", path)};
    try {
      validate(a);
    } catch (const Error& e) {
      if (e.code() == ErrorCode::InvalidCoordinates) {
        bad(path + "touch/lift", std::string("coordinate out of range (") + e.what() + ")");
      }
      bad(path + "text", e.what());
    }
    return a;
  }

 private:
  std::string where_;
};

ordered_json point_json(const Point& p) { return ordered_json::array({p.y, p.x}); }

}  // namespace

Episode parse_jsonl_line(std::string_view line, const std::string& where) {
  RecordReader r(where);
  json doc = json::parse(line.begin(), line.end(), nullptr, /*allow_exceptions=*/false);
  if (doc.is_discarded()) r.bad("<record>", "not valid JSON");
  if (!doc.is_object()) r.bad("<record>", "expected a JSON object");

  Episode e;
  e.id = r.string_at(doc, "id", "");
  if (e.id.empty()) r.bad("id", "must not be empty");
  const std::string subset = r.string_at(doc, "subset", "");
  auto s = subset_from_string(subset);
  if (!s) r.bad("subset", "unknown subset '" + subset + "'");
  e.subset = *s;
  e.goal = r.string_at(doc, "goal", "");

  const json& steps = r.member(doc, "steps", "");
  if (!steps.is_array()) r.bad("steps", "expected an array");
  if (steps.empty()) r.bad("steps", "episode must have at least one step");
  for (std::size_t i = 0; i < steps.size(); ++i) {
    const std::string path = "steps[" + std::to_string(i) + "].";
    const json& st = steps[i];
    if (!st.is_object()) r.bad("steps[" + std::to_string(i) + "]", "expected an object");
    Step step;
    step.screen = r.screen(r.member(st, "screen", path), path + "screen.", step.image);
    step.gold = r.action(r.member(st, "action", path), path + "action.");
    e.steps.push_back(std::move(step));
  }
  return e;
}

std::string to_jsonl_line(const Episode& e) {
  ordered_json doc;
  doc["id"] = e.id;
  doc["subset"] = std::string(to_string(e.subset));
  doc["goal"] = e.goal;
  ordered_json steps = ordered_json::array();
  for (const Step& s : e.steps) {
    ordered_json screen;
    screen["h"] = s.screen.height;
    screen["w"] = s.screen.width;
    if (!s.screen.boxes.empty()) {
      ordered_json boxes = ordered_json::array();
      for (const BoundingBox& b : s.screen.boxes) {
        boxes.push_back(ordered_json::array({b.y_min, b.x_min, b.y_max, b.x_max}));
      }
      screen["boxes"] = std::move(boxes);
    }
    if (s.image) screen["image"] = *s.image;
    ordered_json action;
    action["type_code"] = to_code(s.gold.type);
    action["touch"] = point_json(s.gold.touch);
    action["lift"] = point_json(s.gold.lift);
    action["text"] = s.gold.typed_text;
    ordered_json step;
    step["screen"] = std::move(screen);
    step["action"] = std::move(action);
    steps.push_back(std::move(step));
  }
  doc["steps"] = std::move(steps);
  return doc.dump();
}

std::vector<Episode> read_jsonl(std::istream& in, const std::string& source) {
  std::vector<Episode> out;
  std::set<std::string> seen;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    const std::string where = source + ":" + std::to_string(lineno);
    Episode e = parse_jsonl_line(line, where);
    if (!seen.insert(e.id).second) {
      fail(ErrorCode::Schema, where + ": schema error in field 'id': duplicate episode id '" + e.id + "'");
    }
    out.push_back(std::move(e));
  }
  if (in.bad()) fail(ErrorCode::Io, source + ": read failed");
  return out;
}

std::vector<Episode> load_jsonl(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorCode::Io, path.string() + ": cannot open for reading");
  return read_jsonl(in, path.string());
}

void write_jsonl(std::ostream& out, const std::vector<Episode>& episodes) {
  for (const Episode& e : episodes) out << to_jsonl_line(e) << '\n';
}

void save_jsonl(const std::filesystem::path& path, const std::vector<Episode>& episodes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) fail(ErrorCode::Io, path.string() + ": cannot open for writing");
  write_jsonl(out, episodes);
  if (!out) fail(ErrorCode::Io, path.string() + ": write failed");
}

DatasetStats stats(const std::vector<Episode>& episodes) {
  DatasetStats out;
  std::map<Subset, std::set<std::string>> goals;
  std::set<std::string> all_goals;
  for (const Episode& e : episodes) {
    SubsetStats& s = out.per_subset[e.subset];
    ++s.episodes;
    s.screens += e.steps.size();
    goals[e.subset].insert(e.goal);
    all_goals.insert(e.goal);
    ++out.total.episodes;
    out.total.screens += e.steps.size();
  }
  for (auto& [subset, set] : goals) out.per_subset[subset].instructions = set.size();
  out.total.instructions = all_goals.size();
  return out;
}

std::array<std::size_t, 3> split_sizes(std::size_t n, const SplitRatios& ratios) {
  const std::array<double, 3> r = {ratios.train, ratios.val, ratios.test};
  for (double v : r) {
    if (!(v >= 0.0)) fail(ErrorCode::InvalidArgument, "split ratios must be non-negative");
  }
  if (std::abs(r[0] + r[1] + r[2] - 100.0) > 1e-9) {
    fail(ErrorCode::InvalidArgument, "split ratios must sum to 100");
  }
  std::array<std::size_t, 3> sizes{};
  std::array<double, 3> remainder{};
  std::size_t assigned = 0;
  for (int i = 0; i < 3; ++i) {
    const double exact = static_cast<double>(n) * r[i] / 100.0;
    sizes[i] = static_cast<std::size_t>(std::floor(exact));
    remainder[i] = exact - std::floor(exact);
    assigned += sizes[i];
  }
  std::array<int, 3> order = {0, 1, 2};
  std::stable_sort(order.begin(), order.end(),
                   [&](int a, int b) { return remainder[a] > remainder[b]; });
  for (std::size_t k = 0; assigned < n; ++k, ++assigned) ++sizes[order[k % 3]];
  return sizes;
}

namespace {

void sort_by_id(std::vector<Episode>& episodes) {
  std::sort(episodes.begin(), episodes.end(),
            [](const Episode& a, const Episode& b) { return a.id < b.id; });
}

}  // namespace

std::vector<Episode> subsample(std::vector<Episode> episodes, double fraction, std::uint64_t seed) {
  if (!(fraction > 0.0 && fraction <= 1.0)) {
    fail(ErrorCode::InvalidArgument, "fraction must lie in (0, 1]");
  }
  sort_by_id(episodes);
  if (fraction == 1.0 || episodes.empty()) return episodes;
  detail::Rng rng(seed ^ 0x5eed5eed5eed5eedULL);
  rng.shuffle(episodes);
  auto keep = static_cast<std::size_t>(std::llround(fraction * static_cast<double>(episodes.size())));
  keep = std::clamp<std::size_t>(keep, 1, episodes.size());
  episodes.resize(keep);
  sort_by_id(episodes);
  return episodes;
}

Split split(std::vector<Episode> episodes, const SplitRatios& ratios, std::uint64_t seed,
            double train_fraction) {
  const auto sizes = split_sizes(episodes.size(), ratios);
  constexpr std::size_t needed = 3;
  if (episodes.size() < needed) {
    fail(ErrorCode::TooFewEpisodes, "need at least " + std::to_string(needed) +
                                        " episodes to split, got " + std::to_string(episodes.size()));
  }
  sort_by_id(episodes);
  detail::Rng rng(seed);
  rng.shuffle(episodes);

  Split out;
  auto first = std::make_move_iterator(episodes.begin());
  out.train.assign(first, first + static_cast<std::ptrdiff_t>(sizes[0]));
  first += static_cast<std::ptrdiff_t>(sizes[0]);
  out.val.assign(first, first + static_cast<std::ptrdiff_t>(sizes[1]));
  first += static_cast<std::ptrdiff_t>(sizes[1]);
  out.test.assign(first, first + static_cast<std::ptrdiff_t>(sizes[2]));
  if (train_fraction != 1.0) out.train = subsample(std::move(out.train), train_fraction, seed);
  return out;
}

}  // namespace guikit
