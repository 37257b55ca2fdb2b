// Minimal independent reader for CPLEX-style LP files, used to round-trip
// check the exporter. Supports the subset the exporter emits: Minimize,
// Subject To, Bounds, Generals, Binaries, End.

#pragma once

#include <map>
#include <string>
#include <vector>

#include "dwcuts/types.hpp"

namespace dwcuts::testsupport {

struct ParsedLpFile {
  std::map<std::string, double> objective;
  struct ParsedRow {
    std::string name;
    std::map<std::string, double> terms;
    RowSense sense;
    double rhs;
  };
  std::vector<ParsedRow> rows;
  std::map<std::string, std::pair<double, double>> bounds;
  std::vector<std::string> generals;
  std::vector<std::string> binaries;
};

ParsedLpFile parse_lp_file(const std::string& path);

}  // namespace dwcuts::testsupport
