#pragma once

#include <filesystem>
#include <span>
#include <vector>

#include "pss/types.hpp"

namespace pss {

// Stream files are picked by extension: ".u32" holds raw little-endian u32
// values, ".txt" one decimal integer per line (blank lines skipped). Any
// other extension, unreadable file, malformed line or value outside the u32
// range throws std::runtime_error.
std::vector<Item> read_stream(const std::filesystem::path& path);
void write_stream(const std::filesystem::path& path, std::span<const Item> stream);

}  // namespace pss
