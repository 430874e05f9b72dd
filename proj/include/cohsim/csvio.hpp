#pragma once

#include <string>
#include <vector>

#include "cohsim/common.hpp"

namespace cohsim {

// numeric table with a single header row; cells serialized with %.17g so a
// write/read cycle reproduces every double bit-exactly
struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;
};

std::string format_g17(double v);

void write_csv(const std::string& path, const CsvTable& t);
CsvTable read_csv(const std::string& path);

}  // namespace cohsim
