#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "guikit/action.hpp"
#include "guikit/matching.hpp"

namespace guikit {

enum class Subset { General, Install, GoogleApps, Single, WebShopping };

inline constexpr std::array<Subset, 5> kAllSubsets = {
    Subset::General, Subset::Install, Subset::GoogleApps, Subset::Single, Subset::WebShopping};

std::string_view to_string(Subset s) noexcept;
std::optional<Subset> subset_from_string(std::string_view name) noexcept;

struct Step {
  ScreenGeometry screen;
  std::optional<std::string> image;
  Action gold;

  friend bool operator==(const Step&, const Step&) = default;
};

struct Episode {
  std::string id;
  Subset subset = Subset::General;
  std::string goal;
  std::vector<Step> steps;

  std::size_t length() const noexcept { return steps.size(); }
  friend bool operator==(const Episode&, const Episode&) = default;
};

/// Throws Schema when the episode has no steps or a step is invalid.
void validate(const Episode& e);

/// One JSON object on one line, keys in fixed order, no trailing newline.
std::string to_jsonl_line(const Episode& e);
/// `where` prefixes schema errors, typically "file.jsonl:12".
Episode parse_jsonl_line(std::string_view line, const std::string& where = "<input>");

std::vector<Episode> read_jsonl(std::istream& in, const std::string& source = "<stream>");
std::vector<Episode> load_jsonl(const std::filesystem::path& path);
void write_jsonl(std::ostream& out, const std::vector<Episode>& episodes);
void save_jsonl(const std::filesystem::path& path, const std::vector<Episode>& episodes);

struct SubsetStats {
  std::size_t episodes = 0;
  std::size_t screens = 0;
  std::size_t instructions = 0;

  friend bool operator==(const SubsetStats&, const SubsetStats&) = default;
};

struct DatasetStats {
  std::map<Subset, SubsetStats> per_subset;
  SubsetStats total;

  friend bool operator==(const DatasetStats&, const DatasetStats&) = default;
};

DatasetStats stats(const std::vector<Episode>& episodes);

struct SplitRatios {
  double train = 80;
  double val = 10;
  double test = 10;
};

struct Split {
  std::vector<Episode> train;
  std::vector<Episode> val;
  std::vector<Episode> test;
};

/// Largest-remainder sizes for n items; ties go to the earlier split.
std::array<std::size_t, 3> split_sizes(std::size_t n, const SplitRatios& ratios);

/// Sorts by id, shuffles with the seed and cuts at split_sizes. A
/// train_fraction below 1 keeps that share of the training split.
Split split(std::vector<Episode> episodes, const SplitRatios& ratios, std::uint64_t seed,
            double train_fraction = 1.0);

/// Deterministic subsample of round(n * fraction) episodes, at least one when
/// fraction > 0 and the input is non-empty. Output is sorted by id.
std::vector<Episode> subsample(std::vector<Episode> episodes, double fraction, std::uint64_t seed);

}  // namespace guikit
