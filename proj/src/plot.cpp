#include "vmc/plot.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>

#include <fmt/format.h>

#include "vmc/error.hpp"
#include "vmc/experiment.hpp"

namespace vmc {

int CsvTable::column(std::string_view name) const {
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (header[i] == name) return static_cast<int>(i);
  }
  return -1;
}

namespace {

std::vector<std::string> splitRow(std::string_view line) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const auto comma = line.find(',', start);
    out.emplace_back(line.substr(start, comma == std::string_view::npos ? line.size() - start
                                                                        : comma - start));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

}  // namespace

CsvTable parseCsv(std::string_view text, std::string_view source) {
  CsvTable table;
  int lineNo = 0;
  std::size_t pos = 0;
  while (pos < text.size()) {
    const auto nl = text.find('\n', pos);
    std::string_view line =
        text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
    pos = nl == std::string_view::npos ? text.size() : nl + 1;
    ++lineNo;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.empty()) continue;
    if (table.header.empty()) {
      table.header = splitRow(line);
      continue;
    }
    auto row = splitRow(line);
    if (row.size() != table.header.size()) {
      throw ConfigError(fmt::format("{}:{}: {} fields, header has {}", source, lineNo, row.size(),
                                    table.header.size()));
    }
    table.rows.push_back(std::move(row));
  }
  return table;
}

const std::vector<FigureGroup>& figureGroups() {
  static const std::vector<FigureGroup> groups = {
      {"gain", {"n_released_pm", "packing_efficiency", "power_kw", "wastage"}},
      {"cost", {"md_tb", "mt_hours", "dt_hours", "nc"}},
      {"overhead", {"mo", "mec_kj", "msv"}},
  };
  return groups;
}

namespace {

constexpr double kPanelWidth = 420.0;
constexpr double kPanelHeight = 300.0;
constexpr double kMarginLeft = 70.0;
constexpr double kMarginRight = 20.0;
constexpr double kMarginTop = 30.0;
constexpr double kMarginBottom = 45.0;

const char* colorFor(const std::string& algorithm) {
  if (algorithm == "ffdl1") return "#1f77b4";
  if (algorithm == "mmdvmc") return "#ff7f0e";
  if (algorithm == "amdvmc") return "#2ca02c";
  return "#7f7f7f";
}

struct Series {
  std::string algorithm;
  std::vector<std::pair<double, double>> points;  // sorted by x
};

using MetricData = std::vector<Series>;

double parseCell(const std::string& cell, std::string_view column, std::size_t row) {
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), v);
  if (ec != std::errc() || ptr != cell.data() + cell.size()) {
    throw ConfigError(
        fmt::format("csv row {}: column '{}' is not a number ('{}')", row + 2, column, cell));
  }
  return v;
}

std::string fmtTick(double v) { return fmt::format("{:.4g}", v); }

// Draws one panel whose top-left corner sits at (ox, oy).
std::string renderPanel(const std::string& metric, const std::string& sweep,
                        const MetricData& data, double ox, double oy) {
  double xmin = INFINITY, xmax = -INFINITY, ymin = 0.0, ymax = -INFINITY;
  for (const Series& s : data) {
    for (auto [x, y] : s.points) {
      xmin = std::min(xmin, x);
      xmax = std::max(xmax, x);
      ymin = std::min(ymin, y);
      ymax = std::max(ymax, y);
    }
  }
  if (!(xmax > xmin)) {
    xmin -= 0.5;
    xmax += 0.5;
  }
  if (!(ymax > ymin)) ymax = ymin + 1.0;

  const double plotW = kPanelWidth - kMarginLeft - kMarginRight;
  const double plotH = kPanelHeight - kMarginTop - kMarginBottom;
  auto sx = [&](double x) { return ox + kMarginLeft + (x - xmin) / (xmax - xmin) * plotW; };
  auto sy = [&](double y) { return oy + kMarginTop + (1.0 - (y - ymin) / (ymax - ymin)) * plotH; };

  std::string svg = fmt::format("<g class=\"panel\" data-metric=\"{}\">\n", metric);
  svg += fmt::format(
      "<text x=\"{:.1f}\" y=\"{:.1f}\" text-anchor=\"middle\" font-size=\"14\">{}</text>\n",
      ox + kMarginLeft + plotW / 2, oy + 18, metric);
  svg += fmt::format(
      "<rect x=\"{:.1f}\" y=\"{:.1f}\" width=\"{:.1f}\" height=\"{:.1f}\" fill=\"none\" "
      "stroke=\"#333\"/>\n",
      ox + kMarginLeft, oy + kMarginTop, plotW, plotH);
  constexpr int kTicks = 5;
  for (int i = 0; i <= kTicks; ++i) {
    const double xv = xmin + (xmax - xmin) * i / kTicks;
    const double yv = ymin + (ymax - ymin) * i / kTicks;
    svg += fmt::format(
        "<text x=\"{:.1f}\" y=\"{:.1f}\" text-anchor=\"middle\" font-size=\"10\">{}</text>\n",
        sx(xv), oy + kMarginTop + plotH + 14, fmtTick(xv));
    svg += fmt::format(
        "<text x=\"{:.1f}\" y=\"{:.1f}\" text-anchor=\"end\" font-size=\"10\">{}</text>\n",
        ox + kMarginLeft - 4, sy(yv) + 3, fmtTick(yv));
  }
  svg += fmt::format(
      "<text x=\"{:.1f}\" y=\"{:.1f}\" text-anchor=\"middle\" font-size=\"11\">{}</text>\n",
      ox + kMarginLeft + plotW / 2, oy + kPanelHeight - 8, sweep);

  double legendY = oy + kMarginTop + 12;
  for (const Series& s : data) {
    std::string pts;
    for (auto [x, y] : s.points) pts += fmt::format("{:.2f},{:.2f} ", sx(x), sy(y));
    if (!pts.empty()) pts.pop_back();
    svg += fmt::format(
        "<polyline class=\"series\" data-algorithm=\"{}\" fill=\"none\" stroke=\"{}\" "
        "stroke-width=\"2\" points=\"{}\"/>\n",
        s.algorithm, colorFor(s.algorithm), pts);
    for (auto [x, y] : s.points) {
      svg += fmt::format("<circle cx=\"{:.2f}\" cy=\"{:.2f}\" r=\"3\" fill=\"{}\"/>\n", sx(x),
                         sy(y), colorFor(s.algorithm));
    }
    svg += fmt::format(
        "<text x=\"{:.1f}\" y=\"{:.1f}\" font-size=\"10\" fill=\"{}\">{}</text>\n",
        ox + kMarginLeft + 6, legendY, colorFor(s.algorithm), s.algorithm);
    legendY += 12;
  }
  svg += "</g>\n";
  return svg;
}

std::string svgDocument(double width, double height, const std::string& body) {
  return fmt::format(
      "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
      "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{0:.0f}\" height=\"{1:.0f}\" "
      "viewBox=\"0 0 {0:.0f} {1:.0f}\">\n"
      "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n{2}</svg>\n",
      width, height, body);
}

void writeText(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError(fmt::format("cannot write '{}'", path.string()));
  out << text;
}

}  // namespace

PlotReport emitPlots(const CsvTable& table, const std::string& outDir) {
  PlotReport report;
  if (table.rows.empty()) {
    report.warnings.push_back("csv has no data rows; nothing to plot");
    return report;
  }
  for (const char* required : {"sweep", "sweep_value", "algorithm"}) {
    if (table.column(required) < 0) {
      throw ConfigError(fmt::format("csv is missing column '{}'", required));
    }
  }
  for (const std::string& metric : metricColumns()) {
    if (table.column(metric) < 0) {
      throw ConfigError(fmt::format("csv is missing column '{}'", metric));
    }
  }

  const int sweepCol = table.column("sweep");
  const int xCol = table.column("sweep_value");
  const int algoCol = table.column("algorithm");

  // sweep -> metric -> series, algorithms in first-appearance order
  std::map<std::string, std::map<std::string, MetricData>> data;
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    const auto& row = table.rows[r];
    const double x = parseCell(row[xCol], "sweep_value", r);
    for (const std::string& metric : metricColumns()) {
      const double y = parseCell(row[table.column(metric)], metric, r);
      MetricData& series = data[row[sweepCol]][metric];
      auto it = std::find_if(series.begin(), series.end(),
                             [&](const Series& s) { return s.algorithm == row[algoCol]; });
      if (it == series.end()) {
        series.push_back({row[algoCol], {}});
        it = std::prev(series.end());
      }
      it->points.emplace_back(x, y);
    }
  }

  std::filesystem::create_directories(outDir);
  for (auto& [sweep, metrics] : data) {
    for (auto& [metric, series] : metrics) {
      for (Series& s : series) std::sort(s.points.begin(), s.points.end());
      const auto path = std::filesystem::path(outDir) / fmt::format("{}_{}.svg", sweep, metric);
      writeText(path, svgDocument(kPanelWidth, kPanelHeight,
                                  renderPanel(metric, sweep, series, 0.0, 0.0)));
      report.files.push_back(path.string());
    }
    for (const FigureGroup& group : figureGroups()) {
      std::string body;
      const int columns = 2;
      const int n = static_cast<int>(group.metrics.size());
      for (int i = 0; i < n; ++i) {
        body += renderPanel(group.metrics[i], sweep, metrics[group.metrics[i]],
                            (i % columns) * kPanelWidth, (i / columns) * kPanelHeight);
      }
      const int rowsOfPanels = (n + columns - 1) / columns;
      const auto path =
          std::filesystem::path(outDir) / fmt::format("{}_{}.svg", sweep, group.name);
      writeText(path, svgDocument(columns * kPanelWidth, rowsOfPanels * kPanelHeight, body));
      report.files.push_back(path.string());
    }
  }
  return report;
}

}  // namespace vmc
