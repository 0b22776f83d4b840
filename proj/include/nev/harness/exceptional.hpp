#pragma once

#include <string>
#include <utility>
#include <vector>

namespace nev::harness {

enum class Verdict { pass, fail, inconclusive };
const char* to_string(Verdict v);

struct ExceptionalReport {
  std::vector<std::pair<double, double>> flagged;  // disjoint, sorted (r_lo, r_hi)
  double log_measure = 0.0;
  std::vector<std::pair<double, double>> log_density_series;  // (r, density)
  Verdict verdict = Verdict::pass;
  // Trend of the density series over the top decade (op1 mode).
  double density_slope = 0.0;
  double density_slope_stderr = 0.0;
};

struct ExceptionalOptions {
  double log_measure_cap = 1.0;
  bool density_mode = false;  // op1: judge by the density trend instead of the cap
  double density_final_cap = 0.2;
};

// Flags maximal runs of grid points whose value exceeds `threshold`. Interval
// ends sit at geometric midpoints to the neighbouring grid points (the grid
// end itself at the boundary). Throws on an empty series.
ExceptionalReport detect_exceptional(const std::vector<std::pair<double, double>>& series,
                                     double threshold, const ExceptionalOptions& opt = {});

// Log-measure of the flagged set inside [1, r], divided by log r.
double log_density(const std::vector<std::pair<double, double>>& flagged, double r);

// Sliding medians of `window` consecutive points over the top decade of the
// series. PASS when the last median is below `threshold` and the medians never
// increase.
struct MedianTrend {
  std::vector<std::pair<double, double>> medians;  // (window centre r, median)
  bool below = false;
  bool non_increasing = false;
  Verdict verdict = Verdict::fail;
};
MedianTrend sliding_median_trend(const std::vector<std::pair<double, double>>& series, int window,
                                 double threshold);

// Cap first; past the cap, a top-decade slope (value against log r) whose 95%
// interval straddles 0 is INCONCLUSIVE, anything else FAIL.
Verdict capped_trend_verdict(const ExceptionalReport& report,
                             const std::vector<std::pair<double, double>>& series, double cap);

}  // namespace nev::harness
