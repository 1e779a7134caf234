#pragma once

#include <filesystem>
#include <string_view>

namespace iaxrsw {

/// Writes to a sibling temp file and renames it over `path`, so readers never
/// see a partial file. Throws Error{IoFailure}.
void write_file_atomic(const std::filesystem::path& path, std::string_view content);

} // namespace iaxrsw
