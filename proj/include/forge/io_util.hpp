#pragma once

#include <filesystem>
#include <string>

namespace forge {

// Writes to <path>.tmp in the same directory, then renames into place, so a
// failed run never leaves a partial output file behind.
void write_file_atomic(const std::filesystem::path& path, const std::string& content);

std::string read_file(const std::filesystem::path& path);

}  // namespace forge
