#include "betheforge/csvio.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>

namespace betheforge {

std::string num12(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

CsvWriter::CsvWriter(std::vector<std::string> header) : columns_(header.size()) {
  row(std::move(header));
}

void CsvWriter::row(std::vector<std::string> cells) {
  if (cells.size() != columns_)
    throw domain_error("CsvWriter: column count mismatch");
  for (size_t i = 0; i < cells.size(); ++i) {
    if (i) text_ += ',';
    text_ += cells[i];
  }
  text_ += '\n';
}

void CsvWriter::raw_line(std::string line) {
  text_ += line;
  text_ += '\n';
}

void write_atomic(const std::string& path, const std::string& content) {
  namespace fs = std::filesystem;
  fs::path target(path);
  if (target.has_parent_path()) fs::create_directories(target.parent_path());
  fs::path tmp = target;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw numeric_error("write_atomic: cannot open " + tmp.string());
    out << content;
    if (!out.good()) throw numeric_error("write_atomic: write failed for " + tmp.string());
  }
  fs::rename(tmp, target);
}

}  // namespace betheforge
