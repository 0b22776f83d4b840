#pragma once

#include <string>
#include <utility>
#include <vector>

namespace nev::harness {

struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;
};

// Header line, then one line per row; %.17g, '.' separator, LF endings.
// Throws on an empty table or a row whose width differs from the header.
std::string format_csv(const Table& t);
void emit_csv(const Table& t, const std::string& path);

struct PlotSeries {
  std::string label;
  std::vector<std::pair<double, double>> points;
};

struct PlotSpec {
  std::string title;
  std::string x_label = "r";
  std::string y_label;
  std::vector<PlotSeries> series;
  std::vector<std::pair<double, double>> flagged;  // shaded x-intervals
};

// Single-panel log-log plot. Non-positive values are dropped; throws when no
// plottable point remains.
std::string render_svg(const PlotSpec& spec);
void emit_svg(const PlotSpec& spec, const std::string& path);

void write_text(const std::string& text, const std::string& path);

}  // namespace nev::harness
