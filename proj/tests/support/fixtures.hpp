#pragma once

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

namespace testsupport {

inline std::filesystem::path fixture_dir() { return FIXTURE_DIR; }

inline std::string read_file(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

inline std::vector<std::filesystem::path> gmod_files(const std::filesystem::path& dir) {
  std::vector<std::filesystem::path> out;
  for (const auto& e : std::filesystem::directory_iterator(dir)) {
    const auto name = e.path().filename().string();
    if (e.is_regular_file() && name.ends_with(".gmod.json")) out.push_back(e.path());
  }
  std::sort(out.begin(), out.end());
  return out;
}

inline std::vector<std::filesystem::path> valid_fixtures() { return gmod_files(fixture_dir()); }
inline std::vector<std::filesystem::path> invalid_fixtures() { return gmod_files(fixture_dir() / "invalid"); }

/// "E013_repeated_box_input.gmod.json" -> "E013"
inline std::string designated_code(const std::filesystem::path& p) {
  return p.filename().string().substr(0, 4);
}

}  // namespace testsupport
