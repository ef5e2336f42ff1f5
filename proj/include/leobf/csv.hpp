#pragma once

#include <fstream>
#include <string>
#include <vector>

namespace leobf {

/// Stable text formatting for reproducible CSV output (%.17g round-trips
/// doubles exactly).
std::string csv_num(double v);
std::string csv_num(long long v);

class CsvWriter {
 public:
  CsvWriter(const std::string& path, const std::vector<std::string>& header);
  void row(const std::vector<std::string>& cells);

 private:
  std::ofstream out_;
  std::size_t width_;
};

}  // namespace leobf
