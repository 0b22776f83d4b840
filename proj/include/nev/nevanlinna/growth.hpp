#pragma once

#include <functional>
#include <utility>
#include <vector>

#include "nev/nevanlinna/functionals.hpp"

namespace nev::nevanlinna {

struct OrderEstimate {
  double rho = 0.0;
  double varsigma = 0.0;
};

// Least-squares slopes over the top half of the grid. rho from log+ T
// against log r; varsigma from log(log+ T / log r) against log r, clamped
// at 0. Needs >= 8 samples spanning >= 3 decades.
OrderEstimate order_estimate(const std::vector<FunctionalSample>& samples);

// T at r by piecewise-linear interpolation in log r; extrapolation error
// outside the sampled range.
double interpolate_T(const std::vector<FunctionalSample>& samples, double r);

// (r, (T(r+u) - T(r)) r^tau / T(r)) at every sample with r + u(r) inside the
// grid. Extrapolation error when no sample qualifies.
std::vector<std::pair<double, double>> increment_probe(const std::vector<FunctionalSample>& samples,
                                                       const std::function<double(double)>& u,
                                                       double tau);
std::vector<std::pair<double, double>> increment_probe(const std::vector<FunctionalSample>& samples,
                                                       double u, double tau);

// Least-squares slope and its standard error.
struct Slope {
  double slope = 0.0;
  double stderr_ = 0.0;
  double intercept = 0.0;
};
Slope least_squares(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace nev::nevanlinna
