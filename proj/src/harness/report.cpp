#include "nev/harness/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>

#include "nev/error.hpp"

namespace nev::harness {

namespace {

std::string number(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string short_number(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.4g", x);
  return buf;
}

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '&': out += "&amp;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

const char* kColors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"};

}  // namespace

std::string format_csv(const Table& t) {
  if (t.header.empty() || t.rows.empty()) throw Error(ErrorKind::precondition, "empty table");
  std::string out;
  for (std::size_t k = 0; k < t.header.size(); ++k) {
    if (k) out += ',';
    out += t.header[k];
  }
  out += '\n';
  for (const auto& row : t.rows) {
    if (row.size() != t.header.size())
      throw Error(ErrorKind::precondition, "row width does not match the header");
    for (std::size_t k = 0; k < row.size(); ++k) {
      if (k) out += ',';
      out += number(row[k]);
    }
    out += '\n';
  }
  return out;
}

void write_text(const std::string& text, const std::string& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorKind::io, "cannot write '" + path + "'");
  out << text;
  if (!out) throw Error(ErrorKind::io, "write failed for '" + path + "'");
}

void emit_csv(const Table& t, const std::string& path) { write_text(format_csv(t), path); }

std::string render_svg(const PlotSpec& spec) {
  constexpr double W = 720, H = 480, L = 80, R = 160, T = 40, B = 60;
  double xmin = std::numeric_limits<double>::infinity(), xmax = -xmin;
  double ymin = xmin, ymax = -xmin;
  std::size_t usable = 0;
  for (const auto& s : spec.series)
    for (const auto& [x, y] : s.points) {
      if (!(x > 0.0) || !(y > 0.0) || !std::isfinite(x) || !std::isfinite(y)) continue;
      xmin = std::min(xmin, x);
      xmax = std::max(xmax, x);
      ymin = std::min(ymin, y);
      ymax = std::max(ymax, y);
      ++usable;
    }
  if (usable == 0) throw Error(ErrorKind::precondition, "nothing to plot");
  double lx0 = std::floor(std::log10(xmin)), lx1 = std::ceil(std::log10(xmax));
  double ly0 = std::floor(std::log10(ymin)), ly1 = std::ceil(std::log10(ymax));
  if (lx1 <= lx0) lx1 = lx0 + 1;
  if (ly1 <= ly0) ly1 = ly0 + 1;
  auto px = [&](double x) { return L + (std::log10(x) - lx0) / (lx1 - lx0) * (W - L - R); };
  auto py = [&](double y) { return H - B - (std::log10(y) - ly0) / (ly1 - ly0) * (H - T - B); };

  std::string s;
  s += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"720\" height=\"480\" viewBox=\"0 0 720 480\">\n";
  s += "<rect x=\"0\" y=\"0\" width=\"720\" height=\"480\" fill=\"white\"/>\n";
  s += "<text x=\"" + number(W / 2) + "\" y=\"24\" text-anchor=\"middle\" font-size=\"16\">" +
       escape(spec.title) + "</text>\n";
  for (const auto& [lo, hi] : spec.flagged) {
    double a = std::clamp(lo, std::pow(10.0, lx0), std::pow(10.0, lx1));
    double b = std::clamp(hi, std::pow(10.0, lx0), std::pow(10.0, lx1));
    if (!(b > a)) continue;
    s += "<rect class=\"flagged\" x=\"" + short_number(px(a)) + "\" y=\"" + number(T) +
         "\" width=\"" + short_number(px(b) - px(a)) + "\" height=\"" + number(H - T - B) +
         "\" fill=\"#f4a6a6\" fill-opacity=\"0.5\"/>\n";
  }
  // Decade grid and ticks.
  for (double d = lx0; d <= lx1; d += 1.0) {
    double x = px(std::pow(10.0, d));
    s += "<line x1=\"" + short_number(x) + "\" y1=\"" + number(T) + "\" x2=\"" + short_number(x) +
         "\" y2=\"" + number(H - B) + "\" stroke=\"#dddddd\"/>\n";
    s += "<text x=\"" + short_number(x) + "\" y=\"" + number(H - B + 18) +
         "\" text-anchor=\"middle\" font-size=\"12\">1e" + short_number(d) + "</text>\n";
  }
  for (double d = ly0; d <= ly1; d += 1.0) {
    double y = py(std::pow(10.0, d));
    s += "<line x1=\"" + number(L) + "\" y1=\"" + short_number(y) + "\" x2=\"" + number(W - R) +
         "\" y2=\"" + short_number(y) + "\" stroke=\"#dddddd\"/>\n";
    s += "<text x=\"" + number(L - 6) + "\" y=\"" + short_number(y + 4) +
         "\" text-anchor=\"end\" font-size=\"12\">1e" + short_number(d) + "</text>\n";
  }
  s += "<rect x=\"" + number(L) + "\" y=\"" + number(T) + "\" width=\"" + number(W - L - R) +
       "\" height=\"" + number(H - T - B) + "\" fill=\"none\" stroke=\"black\"/>\n";
  s += "<text class=\"x-label\" x=\"" + number(L + (W - L - R) / 2) + "\" y=\"" + number(H - 16) +
       "\" text-anchor=\"middle\" font-size=\"14\">" + escape(spec.x_label) + "</text>\n";
  s += "<text class=\"y-label\" x=\"20\" y=\"" + number(T + (H - T - B) / 2) +
       "\" text-anchor=\"middle\" font-size=\"14\" transform=\"rotate(-90 20 " +
       number(T + (H - T - B) / 2) + ")\">" + escape(spec.y_label) + "</text>\n";

  std::size_t idx = 0;
  for (const auto& series : spec.series) {
    const char* color = kColors[idx % (sizeof kColors / sizeof kColors[0])];
    std::string pts;
    for (const auto& [x, y] : series.points) {
      if (!(x > 0.0) || !(y > 0.0) || !std::isfinite(x) || !std::isfinite(y)) continue;
      if (!pts.empty()) pts += ' ';
      pts += short_number(px(x)) + "," + short_number(py(y));
    }
    if (!pts.empty())
      s += "<polyline class=\"series\" fill=\"none\" stroke=\"" + std::string(color) +
           "\" stroke-width=\"1.5\" points=\"" + pts + "\"/>\n";
    double ly = T + 16 + 20 * static_cast<double>(idx);
    s += "<line x1=\"" + number(W - R + 12) + "\" y1=\"" + number(ly) + "\" x2=\"" +
         number(W - R + 36) + "\" y2=\"" + number(ly) + "\" stroke=\"" + color +
         "\" stroke-width=\"2\"/>\n";
    s += "<text x=\"" + number(W - R + 42) + "\" y=\"" + number(ly + 4) + "\" font-size=\"12\">" +
         escape(series.label) + "</text>\n";
    ++idx;
  }
  s += "</svg>\n";
  return s;
}

void emit_svg(const PlotSpec& spec, const std::string& path) { write_text(render_svg(spec), path); }

}  // namespace nev::harness
