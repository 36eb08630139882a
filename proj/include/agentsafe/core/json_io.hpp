#pragma once

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "agentsafe/core/error.hpp"

namespace agentsafe {

using json = nlohmann::json;
using ordered_json = nlohmann::ordered_json;

inline std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::IoError, "cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline void write_file(const std::filesystem::path& path, std::string_view content) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::IoError, "cannot write " + path.string());
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
}

/// Parses a JSON document; `code` is the error reported on malformed input.
inline json load_json(const std::filesystem::path& path, ErrorCode code = ErrorCode::ConfigError) {
  std::string content;
  try {
    content = read_file(path);
  } catch (const Error& e) {
    throw Error(code, e.what());
  }
  try {
    return json::parse(content);
  } catch (const json::exception& e) {
    throw Error(code, path.string() + ": " + e.what());
  }
}

inline std::vector<json> load_jsonl(const std::filesystem::path& path, ErrorCode code = ErrorCode::IoError) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(code, "cannot open " + path.string());
  std::vector<json> out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    try {
      out.push_back(json::parse(line));
    } catch (const json::exception& e) {
      throw Error(code, path.string() + ":" + std::to_string(lineno) + ": " + e.what());
    }
  }
  return out;
}

inline std::vector<std::string> read_lines(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::IoError, "cannot open " + path.string());
  std::vector<std::string> out;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty()) out.push_back(line);
  }
  return out;
}

}  // namespace agentsafe
