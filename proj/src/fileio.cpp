#include "gibbsqc/fileio.hpp"

#include <fstream>
#include <sstream>

#include "gibbsqc/errors.hpp"

namespace gibbsqc {

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw ParseError("cannot read '" + path + "'");
  }
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) {
    throw std::runtime_error("cannot open '" + path + "' for writing");
  }
  out << content;
  if (!out) {
    throw std::runtime_error("write to '" + path + "' failed");
  }
}

}  // namespace gibbsqc
