#pragma once

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>

#include "ppgd/spectral/field.hpp"

namespace ppgd::spectral {

// Plain-text field format: a header line
//   # ppgd-field n=<n> length=<l>
// followed by n comma-separated rows of n samples, printed with 17
// significant digits so values round-trip exactly.

inline void write_field_csv(std::ostream& os, const SpectralField& f) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", f.grid().length);
  os << "# ppgd-field n=" << f.grid().n << " length=" << buf << "\n";
  const int n = f.grid().n;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      std::snprintf(buf, sizeof(buf), "%.17g", f(i, j));
      os << buf << (j + 1 < n ? "," : "\n");
    }
  }
}

inline void save_field_csv(const std::string& path, const SpectralField& f) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("save_field_csv: cannot open " + path);
  write_field_csv(os, f);
}

inline SpectralField read_field_csv(std::istream& is, const std::string& name = "<stream>") {
  std::string header;
  if (!std::getline(is, header))
    throw std::runtime_error("read_field_csv: empty input in " + name);
  int n = 0;
  double length = 0.0;
  if (std::sscanf(header.c_str(), "# ppgd-field n=%d length=%lf", &n, &length) != 2)
    throw std::runtime_error("read_field_csv: bad header in " + name + ": " + header);
  Grid grid(n, length);
  SpectralField f(grid);
  std::string line;
  for (int i = 0; i < n; ++i) {
    if (!std::getline(is, line))
      throw std::runtime_error("read_field_csv: truncated file " + name);
    std::istringstream row(line);
    std::string cell;
    for (int j = 0; j < n; ++j) {
      if (!std::getline(row, cell, ','))
        throw std::runtime_error("read_field_csv: short row in " + name);
      f(i, j) = std::stod(cell);
    }
  }
  if (!f.all_finite()) throw std::runtime_error("read_field_csv: non-finite value in " + name);
  return f;
}

inline SpectralField load_field_csv(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw std::runtime_error("load_field_csv: cannot open " + path);
  return read_field_csv(is, path);
}

}  // namespace ppgd::spectral
