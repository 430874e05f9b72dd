#include "cohsim/csvio.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

namespace cohsim {

std::string format_g17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_csv(const std::string& path, const CsvTable& t) {
  require(!t.header.empty(), "csv: empty header");
  std::ofstream os(path, std::ios::binary);  // binary: stable line endings
  require(os.good(), "csv: cannot open for writing: " + path);
  for (std::size_t c = 0; c < t.header.size(); ++c) {
    if (c) os << ',';
    os << t.header[c];
  }
  os << '\n';
  for (const auto& row : t.rows) {
    require(row.size() == t.header.size(), "csv: ragged row");
    for (std::size_t c = 0; c < row.size(); ++c) {
      require(std::isfinite(row[c]), "csv: non-finite value");
      if (c) os << ',';
      os << format_g17(row[c]);
    }
    os << '\n';
  }
  os.flush();
  require(os.good(), "csv: write failed: " + path);
}

CsvTable read_csv(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  require(is.good(), "csv: cannot open: " + path);
  CsvTable t;
  std::string line;
  require(static_cast<bool>(std::getline(is, line)), "csv: missing header");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  std::stringstream hs(line);
  std::string cell;
  while (std::getline(hs, cell, ',')) t.header.push_back(cell);
  require(!t.header.empty(), "csv: empty header");

  while (std::getline(is, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::vector<double> row;
    row.reserve(t.header.size());
    const char* p = line.c_str();
    for (;;) {
      char* end = nullptr;
      row.push_back(std::strtod(p, &end));
      require(end != p, "csv: bad numeric cell in " + path);
      p = end;
      if (*p == ',') {
        ++p;
      } else {
        require(*p == '\0', "csv: trailing junk in row");
        break;
      }
    }
    require(row.size() == t.header.size(), "csv: column count mismatch");
    t.rows.push_back(std::move(row));
  }
  return t;
}

}  // namespace cohsim
