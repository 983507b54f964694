#pragma once

#include <filesystem>
#include <string_view>

namespace lcf {

/// Writes content to path via a temporary file and atomic rename, so a
/// failed run leaves either no file or a complete one.
void write_file_atomic(const std::filesystem::path& path, std::string_view content);

/// Reads a whole file; throws std::runtime_error naming the path on failure.
std::string read_file(const std::filesystem::path& path);

}  // namespace lcf
