#pragma once

#include <filesystem>
#include <string>
#include <vector>

namespace livefund::app {

struct FileVerdict {
  std::filesystem::path file;
  std::size_t records = 0;
  std::vector<std::string> problems;  // "line N: ..." where a line applies

  bool ok() const { return problems.empty(); }
};

struct FixtureReport {
  std::vector<FileVerdict> files;

  bool ok() const;
};

/// Checks manifest coverage, record invariants, date order and duplicate
/// bars for every stream under `dir`. Never throws for bad content.
FixtureReport validate_fixtures(const std::filesystem::path& dir);

}  // namespace livefund::app
