#pragma once

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "laysumm/error.hpp"

namespace laysumm {

namespace fs = std::filesystem;

inline std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::IoError, "cannot open " + path.string(), path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline void write_file(const fs::path& path, std::string_view content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorKind::IoError, "cannot write " + path.string(), path.string());
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
  if (!out) throw Error(ErrorKind::IoError, "write failed for " + path.string(), path.string());
}

/// Lines of a UTF-8 data file with trailing whitespace trimmed; blank lines
/// and lines starting with '#' are dropped.
inline std::vector<std::string> read_data_lines(const fs::path& path) {
  std::istringstream in(read_file(path));
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) {
    while (!line.empty() && (line.back() == '\r' || line.back() == ' ' || line.back() == '\t'))
      line.pop_back();
    if (line.empty() || line.front() == '#') continue;
    lines.push_back(line);
  }
  return lines;
}

// Resolution order: explicit argument, $LAYSUMM_DATA_DIR, build-time default.
inline fs::path data_dir(const fs::path& override_dir = {}) {
  if (!override_dir.empty()) return override_dir;
  if (const char* env = std::getenv("LAYSUMM_DATA_DIR"); env && *env) return fs::path(env);
#ifdef LAYSUMM_DEFAULT_DATA_DIR
  return fs::path(LAYSUMM_DEFAULT_DATA_DIR);
#else
  return fs::path("data");
#endif
}

}  // namespace laysumm
