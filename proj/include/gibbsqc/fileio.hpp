#pragma once

#include <string>

namespace gibbsqc {

// Throws ParseError naming the file when it cannot be read.
std::string read_text_file(const std::string& path);

// Throws std::runtime_error on failure. LF line endings, no translation.
void write_text_file(const std::string& path, const std::string& content);

}  // namespace gibbsqc
