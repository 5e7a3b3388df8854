#pragma once

#include <atomic>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "livefund/domain/types.hpp"

namespace livefund::testing {

namespace fs = std::filesystem;

inline fs::path source_dir() { return fs::path(LIVEFUND_SOURCE_DIR); }
inline fs::path bundled_fixtures() { return source_dir() / "fixtures" / "bundled"; }

/// Fresh directory under the system temp dir, removed on destruction.
class TempDir {
 public:
  explicit TempDir(const std::string& tag = "lf") {
    static std::atomic<int> counter{0};
    const auto stamp = std::chrono::steady_clock::now().time_since_epoch().count();
    path_ = fs::temp_directory_path() /
            (tag + "-" + std::to_string(stamp) + "-" + std::to_string(counter++));
    fs::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    fs::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const fs::path& path() const { return path_; }
  fs::path operator/(const std::string& name) const { return path_ / name; }

 private:
  fs::path path_;
};

inline std::string read_file(const fs::path& file) {
  std::ifstream in(file, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline void write_file(const fs::path& file, const std::string& text) {
  fs::create_directories(file.parent_path());
  std::ofstream out(file, std::ios::binary | std::ios::trunc);
  out << text;
}

inline std::vector<std::string> read_lines(const fs::path& file) {
  std::ifstream in(file);
  std::vector<std::string> lines;
  for (std::string line; std::getline(in, line);) lines.push_back(line);
  return lines;
}

inline void write_lines(const fs::path& file, const std::vector<std::string>& lines) {
  std::string text;
  for (const auto& l : lines) text += l + "\n";
  write_file(file, text);
}

inline Date d(const char* iso) { return Date::parse(iso); }
inline Ticker tk(const char* s) { return Ticker(s); }

inline Signal sig(SignalDirection dir, AnalystKind kind = AnalystKind::Technical, bool valid = true) {
  if (!valid) return Signal::fallback(kind, Ticker("AAPL"), Date(2025, 4, 1));
  return Signal::make(kind, Ticker("AAPL"), Date(2025, 4, 1), dir, "because");
}

}  // namespace livefund::testing
