#pragma once

#include <string>
#include <string_view>

namespace gns {

// Shortest round-trip decimal form, locale-independent (std::to_chars).
std::string format_double(double value);

// Strict full-string parse; throws std::invalid_argument naming the token.
double parse_double_strict(std::string_view token);

// Writes to a sibling temp file and renames over the target, so readers
// never observe partial content. Throws std::runtime_error on I/O failure.
void write_file_atomic(const std::string& path, const std::string& content);

std::string read_file(const std::string& path);

}  // namespace gns
