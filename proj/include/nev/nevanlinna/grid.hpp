#pragma once

#include <vector>

#include "nev/expr/ast.hpp"

namespace nev::nevanlinna {

// `points` radii from r_min to r_max, equally spaced in log r.
std::vector<double> geometric_grid(double r_min, double r_max, int points);

// r moved outward (by 1e-5 relative steps) until no zero or pole of f lies
// within 1e-6 relative of |z| = r.
double avoid_singular_radius(const expr::NodePtr& f, double r);

}  // namespace nev::nevanlinna
