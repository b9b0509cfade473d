#pragma once

#include <filesystem>
#include <string>
#include <string_view>

namespace mfr {

/// Whole-file read; throws mfr::Error when the file cannot be opened.
std::string read_text_file(const std::filesystem::path& path);

/// Writes (truncating) and creates parent directories as needed.
void write_text_file(const std::filesystem::path& path, std::string_view text);

}  // namespace mfr
