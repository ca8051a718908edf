// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "curate/error.hpp"
#include "json.hpp"

namespace curate {

using Record = nlohmann::ordered_json;

/// Compact single-line JSON. Invalid UTF-8 is an error rather than being
/// replaced, so a round trip never silently alters text.
inline std::string dump_record(const Record& r) {
  try {
    return r.dump();
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::malformed_record, std::string("cannot serialize record: ") + e.what());
  }
}

inline std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::io, "cannot open '" + path.string() + "' for reading");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline void write_file(const std::filesystem::path& path, const std::string& contents) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::io, "cannot open '" + path.string() + "' for writing");
  out << contents;
  out.flush();
  if (!out) throw Error(ErrorCode::io, "write to '" + path.string() + "' failed");
}

inline Record parse_json_text(const std::string& text, const std::string& what) {
  try {
    return Record::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(ErrorCode::malformed_record, what + ": " + e.what());
  }
}

inline Record read_json_file(const std::filesystem::path& path) {
  return parse_json_text(read_file(path), "'" + path.string() + "'");
}

/// One JSON value per line. Returns (1-based line number, value) pairs.
inline std::vector<std::pair<std::size_t, Record>> parse_json_lines(const std::string& contents,
                                                                    const std::string& what) {
  std::vector<std::pair<std::size_t, Record>> out;
  std::size_t line_no = 0;
  std::size_t start = 0;
  while (start < contents.size()) {
    std::size_t nl = contents.find('\n', start);
    std::size_t end = nl == std::string::npos ? contents.size() : nl;
    std::string line = contents.substr(start, end - start);
    if (!line.empty() && line.back() == '\r') line.pop_back();
    ++line_no;
    if (line.empty()) {
      throw Error(ErrorCode::malformed_record, what + " line " + std::to_string(line_no) + ": empty line");
    }
    try {
      out.emplace_back(line_no, Record::parse(line));
    } catch (const nlohmann::json::parse_error& e) {
      throw Error(ErrorCode::malformed_record,
                  what + " line " + std::to_string(line_no) + ": " + e.what());
    }
    if (nl == std::string::npos) break;
    start = nl + 1;
  }
  return out;
}

inline std::vector<Record> read_records(const std::filesystem::path& path) {
  std::vector<Record> out;
  for (auto& [line, r] : parse_json_lines(read_file(path), "'" + path.string() + "'")) out.push_back(std::move(r));
  return out;
}

inline std::string render_records(const std::vector<Record>& records) {
  std::string out;
  for (const auto& r : records) {
    out += dump_record(r);
    out += '\n';
  }
  return out;
}

inline void write_records(const std::filesystem::path& path, const std::vector<Record>& records) {
  write_file(path, render_records(records));
}

}  // namespace curate
