#pragma once

#include <functional>
#include <vector>

#include "nev/expr/ast.hpp"

namespace nev::nevanlinna {

// Evaluation cap shared by one winding computation.
inline constexpr long kWindingEvalCap = 1L << 20;

// Total change of arg f along the path t -> path(t), t in [t0, t1], tracked
// by phase unwrapping with adaptive bisection. Throws boundary_collision when
// f has a zero or pole on the path, budget_exceeded past the cap.
double arg_change(const expr::NodePtr& f, const std::function<cplx(double)>& path, double t0,
                  double t1, int initial_steps, long& evals);

// Winding number of f(closed polygon), i.e. zeros minus poles inside.
int winding_polygon(const expr::NodePtr& f, const std::vector<cplx>& vertices);

// Zeros minus poles of f inside |z - center| < radius.
int winding_circle(const expr::NodePtr& f, cplx center, double radius);

inline int winding_count(const expr::MeroExpr& f, double r) {
  return winding_circle(f.root(), cplx{}, r);
}

}  // namespace nev::nevanlinna
