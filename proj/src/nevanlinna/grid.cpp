#include "nev/nevanlinna/grid.hpp"

#include <cmath>

#include "nev/expr/catalog.hpp"

namespace nev::nevanlinna {

std::vector<double> geometric_grid(double r_min, double r_max, int points) {
  if (!(r_min > 0.0) || !(r_max > r_min) || points < 2)
    throw Error(ErrorKind::precondition, "grid needs 0 < r_min < r_max and at least 2 points");
  std::vector<double> out(static_cast<std::size_t>(points));
  double a = std::log(r_min), b = std::log(r_max);
  for (int k = 0; k < points; ++k) out[static_cast<std::size_t>(k)] = std::exp(a + (b - a) * k / (points - 1));
  out.front() = r_min;
  out.back() = r_max;
  return out;
}

double avoid_singular_radius(const expr::NodePtr& f, double r) {
  auto near = expr::zeros_poles_near(f, 1.01 * r + 1e-9);
  double fetched = r;
  for (int pass = 0; pass < 100; ++pass) {
    bool moved = false;
    for (const auto& e : near) {
      double mod = std::abs(e.location);
      if (std::abs(mod - r) < 1e-6 * r) {
        r = std::max(r, mod) * (1.0 + 1e-5);
        moved = true;
      }
    }
    if (!moved) return r;
    if (r > 1.005 * fetched) {
      near = expr::zeros_poles_near(f, 1.01 * r + 1e-9);
      fetched = r;
    }
  }
  return r;
}

}  // namespace nev::nevanlinna
