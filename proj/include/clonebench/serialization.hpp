// Copyright 2026 The clonebench Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>

#include "json.hpp"

namespace clonebench {

// Every persisted document and report carries this; loaders reject others.
inline constexpr int kSchemaVersion = 1;

// Throws data-error when schema_version is missing or unsupported.
void check_schema_version(const nlohmann::json& j);

std::string u32_to_hex(std::uint32_t v);
std::uint32_t hex_to_u32(std::string_view hex);

// Parse failures and missing files surface as data-error.
nlohmann::json read_json_file(const std::filesystem::path& path);
// Pretty-printed, newline-terminated; identical input gives identical bytes.
void write_json_file(const std::filesystem::path& path, const nlohmann::json& j);

}  // namespace clonebench
