#include "nev/harness/exceptional.hpp"

#include <algorithm>
#include <cmath>

#include "nev/error.hpp"
#include "nev/nevanlinna/growth.hpp"

namespace nev::harness {

const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::pass: return "PASS";
    case Verdict::fail: return "FAIL";
    case Verdict::inconclusive: return "INCONCLUSIVE";
  }
  return "?";
}

double log_density(const std::vector<std::pair<double, double>>& flagged, double r) {
  if (!(r > 1.0)) return 0.0;
  double measure = 0.0;
  for (const auto& [lo, hi] : flagged) {
    double a = std::max(lo, 1.0), b = std::min(hi, r);
    if (b > a) measure += std::log(b / a);
  }
  return std::clamp(measure / std::log(r), 0.0, 1.0);
}

ExceptionalReport detect_exceptional(const std::vector<std::pair<double, double>>& series,
                                     double threshold, const ExceptionalOptions& opt) {
  if (series.empty()) throw Error(ErrorKind::precondition, "empty series");
  for (std::size_t k = 1; k < series.size(); ++k)
    if (!(series[k].first > series[k - 1].first))
      throw Error(ErrorKind::precondition, "series must be sorted by r");
  ExceptionalReport rep;
  std::size_t n = series.size();
  auto lower = [&](std::size_t k) {
    return k == 0 ? series[0].first : std::sqrt(series[k - 1].first * series[k].first);
  };
  auto upper = [&](std::size_t k) {
    return k + 1 == n ? series[k].first : std::sqrt(series[k].first * series[k + 1].first);
  };
  std::size_t k = 0;
  while (k < n) {
    if (!(series[k].second > threshold)) {
      ++k;
      continue;
    }
    std::size_t j = k;
    while (j + 1 < n && series[j + 1].second > threshold) ++j;
    double lo = lower(k), hi = upper(j);
    rep.flagged.push_back({lo, hi});
    rep.log_measure += std::log(hi / lo);
    k = j + 1;
  }
  for (const auto& [r, v] : series)
    if (r > 1.0) rep.log_density_series.push_back({r, log_density(rep.flagged, r)});

  if (!opt.density_mode) {
    rep.verdict = rep.log_measure <= opt.log_measure_cap ? Verdict::pass : Verdict::fail;
    return rep;
  }
  // Density trend over the top decade of the grid.
  const auto& ds = rep.log_density_series;
  if (ds.empty()) {
    rep.verdict = Verdict::pass;
    return rep;
  }
  double top = ds.back().first;
  std::vector<double> x, y;
  for (const auto& [r, d] : ds)
    if (r >= top / 10.0) {
      x.push_back(std::log(r));
      y.push_back(d);
    }
  if (x.size() < 3) {
    x.clear();
    y.clear();
    for (const auto& [r, d] : ds) {
      x.push_back(std::log(r));
      y.push_back(d);
    }
  }
  double final_density = ds.back().second;
  if (x.size() >= 2) {
    auto s = nevanlinna::least_squares(x, y);
    rep.density_slope = s.slope;
    rep.density_slope_stderr = s.stderr_;
  }
  double hi95 = rep.density_slope + 1.96 * rep.density_slope_stderr;
  double lo95 = rep.density_slope - 1.96 * rep.density_slope_stderr;
  if (final_density < opt.density_final_cap || hi95 < 0.0)
    rep.verdict = Verdict::pass;
  else if (lo95 > 0.0 || (rep.density_slope_stderr == 0.0 && rep.density_slope >= 0.0))
    rep.verdict = Verdict::fail;
  else
    rep.verdict = Verdict::inconclusive;
  return rep;
}

namespace {

std::vector<std::pair<double, double>> top_decade(const std::vector<std::pair<double, double>>& s) {
  std::vector<std::pair<double, double>> out;
  if (s.empty()) return out;
  for (const auto& p : s)
    if (p.first >= s.back().first / 10.0) out.push_back(p);
  return out;
}

}  // namespace

MedianTrend sliding_median_trend(const std::vector<std::pair<double, double>>& series, int window,
                                 double threshold) {
  if (series.empty()) throw Error(ErrorKind::precondition, "empty series");
  if (window < 1) throw Error(ErrorKind::precondition, "window must be positive");
  auto top = top_decade(series);
  std::size_t w = std::min<std::size_t>(static_cast<std::size_t>(window), top.size());
  MedianTrend out;
  for (std::size_t k = 0; k + w <= top.size(); ++k) {
    std::vector<double> v;
    for (std::size_t j = k; j < k + w; ++j) v.push_back(top[j].second);
    std::sort(v.begin(), v.end());
    double med = w % 2 ? v[w / 2] : 0.5 * (v[w / 2 - 1] + v[w / 2]);
    double centre = std::sqrt(top[k].first * top[k + w - 1].first);
    out.medians.push_back({centre, med});
  }
  out.below = out.medians.back().second < threshold;
  out.non_increasing = true;
  for (std::size_t k = 1; k < out.medians.size(); ++k) {
    double prev = out.medians[k - 1].second;
    if (out.medians[k].second > prev + 1e-12 * std::max(1.0, std::abs(prev))) out.non_increasing = false;
  }
  out.verdict = out.below && out.non_increasing ? Verdict::pass : Verdict::fail;
  return out;
}

Verdict capped_trend_verdict(const ExceptionalReport& report,
                             const std::vector<std::pair<double, double>>& series, double cap) {
  if (report.log_measure <= cap) return Verdict::pass;
  auto top = top_decade(series);
  if (top.size() < 3) return Verdict::inconclusive;
  std::vector<double> x, y;
  for (const auto& [r, v] : top) {
    x.push_back(std::log(r));
    y.push_back(v);
  }
  auto s = nevanlinna::least_squares(x, y);
  double scale = 0.0;
  for (double v : y) scale = std::max(scale, std::abs(v));
  // Rounding noise on an exactly linear series is not uncertainty.
  double se = s.stderr_ <= 1e-12 * std::max(1.0, scale) ? 0.0 : s.stderr_;
  bool straddles = s.slope - 1.96 * se < 0.0 && s.slope + 1.96 * se > 0.0;
  return straddles ? Verdict::inconclusive : Verdict::fail;
}

}  // namespace nev::harness
