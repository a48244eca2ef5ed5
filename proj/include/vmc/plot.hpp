#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace vmc {

/// Plain comma-separated table (no quoting; the harness never writes commas
/// inside fields).
struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  /// Index of a column, or -1.
  int column(std::string_view name) const;
};

/// Throws ConfigError naming the line when a row's width differs from the
/// header's.
CsvTable parseCsv(std::string_view text, std::string_view source = "csv");

/// Figure groups drawn as multi-panel figures, one file per sweep each.
struct FigureGroup {
  std::string name;
  std::vector<std::string> metrics;
};
const std::vector<FigureGroup>& figureGroups();

struct PlotReport {
  std::vector<std::string> files;
  std::vector<std::string> warnings;
};

/// Writes <sweep>_<metric>.svg for every metric column and <sweep>_<group>.svg
/// for every figure group into outDir, with one series per algorithm.
/// A table without rows only yields a warning. Throws ConfigError naming the
/// first missing column.
PlotReport emitPlots(const CsvTable& table, const std::string& outDir);

}  // namespace vmc
