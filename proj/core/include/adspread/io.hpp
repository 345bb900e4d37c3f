#pragma once

#include <filesystem>
#include <string>
#include <string_view>

namespace adspread {

/// Reads a whole text file; throws Error(Io).
std::string read_text_file(const std::filesystem::path& path);

/// Writes via a temporary sibling and rename, so readers never see a
/// partially written file. Throws Error(Io).
void write_file_atomic(const std::filesystem::path& path, std::string_view contents);

}  // namespace adspread
