#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <vector>

namespace guikit {

struct CheckResult {
  std::string name;
  bool passed = false;
  std::string detail;
};

/// Expected renderings keyed by name. The built-in set reproduces the
/// target-output table byte for byte plus our own target/history goldens.
std::map<std::string, std::string> builtin_goldens();

/// Reads `name<TAB>expected` lines from `decisions.golden` in the directory.
std::map<std::string, std::string> load_goldens(const std::filesystem::path& dir);

/// Runs the format, normalization, gradient, split and metric checks. An
/// empty `golden_dir` uses the built-in goldens.
std::vector<CheckResult> run_selfcheck(const std::filesystem::path& golden_dir = {});

}  // namespace guikit
