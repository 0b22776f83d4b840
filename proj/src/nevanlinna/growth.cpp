#include "nev/nevanlinna/growth.hpp"

#include <algorithm>
#include <cmath>

namespace nev::nevanlinna {

Slope least_squares(const std::vector<double>& x, const std::vector<double>& y) {
  std::size_t n = x.size();
  if (n < 2 || y.size() != n) throw Error(ErrorKind::precondition, "need two or more points");
  double mx = 0.0, my = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    mx += x[k];
    my += y[k];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    sxx += (x[k] - mx) * (x[k] - mx);
    sxy += (x[k] - mx) * (y[k] - my);
  }
  if (sxx == 0.0) throw Error(ErrorKind::degenerate, "abscissae coincide");
  Slope s;
  s.slope = sxy / sxx;
  s.intercept = my - s.slope * mx;
  if (n > 2) {
    double rss = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
      double e = y[k] - (s.intercept + s.slope * x[k]);
      rss += e * e;
    }
    s.stderr_ = std::sqrt(rss / static_cast<double>(n - 2) / sxx);
  }
  return s;
}

namespace {
std::vector<FunctionalSample> sorted(std::vector<FunctionalSample> s) {
  std::sort(s.begin(), s.end(),
            [](const FunctionalSample& a, const FunctionalSample& b) { return a.r < b.r; });
  return s;
}
}  // namespace

OrderEstimate order_estimate(const std::vector<FunctionalSample>& samples) {
  auto s = sorted(samples);
  if (s.size() < 8 || !(s.front().r > 0.0) || s.back().r / s.front().r < 1e3)
    throw Error(ErrorKind::insufficient_range, "need >= 8 samples spanning >= 3 decades");
  std::size_t first = s.size() / 2;
  std::vector<double> x, y, xh, yh;
  for (std::size_t k = first; k < s.size(); ++k) {
    double lr = std::log(s[k].r);
    double lp = std::max(0.0, std::log(s[k].T));
    x.push_back(lr);
    y.push_back(lp);
    if (lp > 0.0 && lr > 0.0) {
      xh.push_back(lr);
      yh.push_back(std::log(lp / lr));
    }
  }
  OrderEstimate est;
  est.rho = least_squares(x, y).slope;
  if (xh.size() >= 2) est.varsigma = std::max(0.0, least_squares(xh, yh).slope);
  return est;
}

double interpolate_T(const std::vector<FunctionalSample>& samples, double r) {
  auto s = sorted(samples);
  if (s.empty()) throw Error(ErrorKind::precondition, "no samples");
  double lo = s.front().r, hi = s.back().r;
  if (r < lo * (1.0 - 1e-12) || r > hi * (1.0 + 1e-12))
    throw Error(ErrorKind::extrapolation, "radius outside the sampled grid");
  if (s.size() == 1) return s.front().T;
  auto it = std::lower_bound(s.begin(), s.end(), r,
                             [](const FunctionalSample& a, double v) { return a.r < v; });
  if (it == s.begin()) return it->T;
  if (it == s.end()) return s.back().T;
  const auto& b = *it;
  const auto& a = *(it - 1);
  double t = (std::log(r) - std::log(a.r)) / (std::log(b.r) - std::log(a.r));
  return a.T + t * (b.T - a.T);
}

std::vector<std::pair<double, double>> increment_probe(const std::vector<FunctionalSample>& samples,
                                                       const std::function<double(double)>& u,
                                                       double tau) {
  auto s = sorted(samples);
  if (s.empty()) throw Error(ErrorKind::precondition, "no samples");
  std::vector<std::pair<double, double>> out;
  double top = s.back().r * (1.0 + 1e-12);
  for (const auto& x : s) {
    double step = u(x.r);
    if (step == 0.0) {
      out.push_back({x.r, 0.0});
      continue;
    }
    if (x.r + step > top || !(x.T > 0.0)) continue;
    double inc = interpolate_T(s, x.r + step) - x.T;
    out.push_back({x.r, inc * std::pow(x.r, tau) / x.T});
  }
  if (out.empty()) throw Error(ErrorKind::extrapolation, "every r + u exceeds the grid");
  return out;
}

std::vector<std::pair<double, double>> increment_probe(const std::vector<FunctionalSample>& samples,
                                                       double u, double tau) {
  return increment_probe(samples, [u](double) { return u; }, tau);
}

}  // namespace nev::nevanlinna
