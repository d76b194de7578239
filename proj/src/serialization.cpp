// Copyright 2026 The clonebench Authors
// SPDX-License-Identifier: Apache-2.0

#include "clonebench/serialization.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "clonebench/error.hpp"

namespace clonebench {

void check_schema_version(const nlohmann::json& j) {
  require(j.is_object() && j.contains("schema_version") &&
              j.at("schema_version").is_number_integer(),
          ErrorCode::kDataError, "document has no schema_version");
  const int v = j.at("schema_version").get<int>();
  require(v == kSchemaVersion, ErrorCode::kDataError,
          "unsupported schema_version " + std::to_string(v));
}

std::string u32_to_hex(std::uint32_t v) {
  char buf[9];
  std::snprintf(buf, sizeof buf, "%08x", v);
  return buf;
}

std::uint32_t hex_to_u32(std::string_view hex) {
  require(!hex.empty() && hex.size() <= 8, ErrorCode::kDataError,
          "checksum must be 1-8 hex digits");
  std::uint32_t v = 0;
  for (char c : hex) {
    int d;
    if (c >= '0' && c <= '9') {
      d = c - '0';
    } else if (c >= 'a' && c <= 'f') {
      d = c - 'a' + 10;
    } else if (c >= 'A' && c <= 'F') {
      d = c - 'A' + 10;
    } else {
      fail(ErrorCode::kDataError, "invalid hex digit in checksum");
    }
    v = (v << 4) | static_cast<std::uint32_t>(d);
  }
  return v;
}

nlohmann::json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  require(static_cast<bool>(in), ErrorCode::kDataError,
          "cannot open " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  try {
    return nlohmann::json::parse(buf.str());
  } catch (const nlohmann::json::parse_error& e) {
    fail(ErrorCode::kDataError, path.string() + ": " + e.what());
  }
}

void write_json_file(const std::filesystem::path& path, const nlohmann::json& j) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  require(static_cast<bool>(out), ErrorCode::kDataError,
          "cannot write " + path.string());
  out << j.dump(2) << '\n';
  require(static_cast<bool>(out), ErrorCode::kDataError,
          "write failed for " + path.string());
}

}  // namespace clonebench
