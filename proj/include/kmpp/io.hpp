#pragma once

#include <filesystem>
#include <string>

namespace kmpp {

/// Whole-file read/write; failures throw IoError.
std::string read_text_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, const std::string& text);

}  // namespace kmpp
