#pragma once

// JSON helpers shared by the file readers. Not installed.

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <string_view>

#include <json.hpp>

#include "qosa/hscore.hpp"

namespace qosa::detail {

using nlohmann::json;

[[noreturn]] inline void schema_error(const std::string& where, const std::string& what) {
  raise(ErrorCode::kSchemaError, where + ": " + what);
}

inline Complex parse_complex(const json& j, const std::string& where) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number()) {
    schema_error(where, "expected a [re, im] pair of numbers");
  }
  return {j[0].get<double>(), j[1].get<double>()};
}

inline HSMatrix parse_matrix(const json& j, int n, const std::string& where) {
  if (!j.is_array()) schema_error(where, "expected an array of rows");
  if (static_cast<int>(j.size()) != n) {
    schema_error(where, "expected " + std::to_string(n) + " rows, got " + std::to_string(j.size()));
  }
  Eigen::MatrixXcd m(n, n);
  for (int r = 0; r < n; ++r) {
    const auto& row = j[static_cast<std::size_t>(r)];
    const std::string rw = where + "[" + std::to_string(r) + "]";
    if (!row.is_array() || static_cast<int>(row.size()) != n) {
      schema_error(rw, "expected a row of " + std::to_string(n) + " entries");
    }
    for (int c = 0; c < n; ++c) {
      m(r, c) = parse_complex(row[static_cast<std::size_t>(c)], rw + "[" + std::to_string(c) + "]");
    }
  }
  return HSMatrix(std::move(m));
}

inline std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) raise(ErrorCode::kIo, "cannot open '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline json parse_json(std::string_view text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    schema_error("$", std::string("malformed JSON: ") + e.what());
  }
}

}  // namespace qosa::detail
