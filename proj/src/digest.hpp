#pragma once

#include <filesystem>
#include <string>
#include <string_view>

namespace kgqa {

std::string sha256_hex(std::string_view data);
std::string sha256_file(const std::filesystem::path& path);

std::string read_file(const std::filesystem::path& path);

/// Writes to a sibling temp file and renames it over the target.
void write_file_atomic(const std::filesystem::path& path, std::string_view data);

}  // namespace kgqa
