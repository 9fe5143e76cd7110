#pragma once

#include <string>
#include <vector>

#include "betheforge/types.hpp"

namespace betheforge {

/// Fixed 12-significant-digit rendering, '.' decimal separator.  All CSV
/// output goes through this so identical configs give byte-identical files.
std::string num12(double v);

/// Builds a CSV document: header row + data rows, ',' delimiter, '\n' line
/// endings, no trailing whitespace.
class CsvWriter {
 public:
  explicit CsvWriter(std::vector<std::string> header);
  void row(std::vector<std::string> cells);
  void raw_line(std::string line);  // footer summaries
  const std::string& str() const { return text_; }

 private:
  std::string text_;
  size_t columns_ = 0;
};

/// Write-then-rename so readers never observe a partial file.
void write_atomic(const std::string& path, const std::string& content);

}  // namespace betheforge
