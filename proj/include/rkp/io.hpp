#pragma once

// Deterministic text output: fixed 17-significant-digit floats, CSV with LF
// endings.

#include <cstdio>
#include <fstream>
#include <string>
#include <vector>

#include "rkp/core.hpp"

namespace rkp {

inline std::string fmt17(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

inline void write_csv(const std::string& path, const std::string& header,
                      const std::vector<std::vector<double>>& rows) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DomainError("write_csv: cannot open " + path);
  out << header << "\n";
  for (const auto& row : rows) {
    for (size_t i = 0; i < row.size(); ++i)
      out << (i ? "," : "") << fmt17(row[i]);
    out << "\n";
  }
}

}  // namespace rkp
