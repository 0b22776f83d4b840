#include "nev/nevanlinna/argument_principle.hpp"

#include <cmath>
#include <numbers>

#include "nev/expr/evaluate.hpp"

namespace nev::nevanlinna {

namespace {

constexpr double kPi = std::numbers::pi;

double wrap(double d) {
  d = std::remainder(d, 2.0 * kPi);
  return d;
}

struct Point {
  double t;
  expr::LogPolar v;
};

class Tracker {
 public:
  Tracker(const expr::NodePtr& f, const std::function<cplx(double)>& path, long& evals)
      : f_(f), path_(path), evals_(evals) {}

  Point at(double t) {
    if (++evals_ > kWindingEvalCap)
      throw Error(ErrorKind::budget_exceeded, "winding number evaluation cap reached");
    Point p{t, expr::log_polar(f_, path_(t))};
    if (p.v.pole || p.v.zero || !std::isfinite(p.v.log_abs))
      throw Error(ErrorKind::boundary_collision, "zero or pole on the contour");
    return p;
  }

  double refine(const Point& a, const Point& b, int depth) {
    double d = wrap(b.v.arg - a.v.arg);
    bool smooth = std::abs(d) <= kPi / 4 && std::abs(b.v.log_abs - a.v.log_abs) <= 1.0;
    if (smooth) return d;
    if (depth > 60 || std::abs(b.t - a.t) <= 1e-15 * (1.0 + std::abs(a.t))) {
      if (std::abs(d) > kPi / 2)
        throw Error(ErrorKind::boundary_collision, "phase jump unresolved near the contour");
      return d;
    }
    Point m = at(0.5 * (a.t + b.t));
    return refine(a, m, depth + 1) + refine(m, b, depth + 1);
  }

 private:
  const expr::NodePtr& f_;
  const std::function<cplx(double)>& path_;
  long& evals_;
};

int round_winding(double total) {
  double w = total / (2.0 * kPi);
  double k = std::round(w);
  if (std::abs(w - k) > 0.05)
    throw Error(ErrorKind::boundary_collision, "winding number not near an integer");
  return static_cast<int>(k);
}

}  // namespace

double arg_change(const expr::NodePtr& f, const std::function<cplx(double)>& path, double t0,
                  double t1, int initial_steps, long& evals) {
  Tracker tr(f, path, evals);
  int n = std::max(1, initial_steps);
  Point prev = tr.at(t0);
  double total = 0.0;
  for (int k = 1; k <= n; ++k) {
    double t = k == n ? t1 : t0 + (t1 - t0) * k / n;
    Point next = tr.at(t);
    total += tr.refine(prev, next, 0);
    prev = next;
  }
  return total;
}

int winding_polygon(const expr::NodePtr& f, const std::vector<cplx>& vertices) {
  long evals = 0;
  double total = 0.0;
  for (std::size_t k = 0; k < vertices.size(); ++k) {
    cplx a = vertices[k];
    cplx b = vertices[(k + 1) % vertices.size()];
    double len = std::abs(b - a);
    int steps = std::max(16, static_cast<int>(std::ceil(8.0 * len)));
    std::function<cplx(double)> seg = [a, b](double t) { return a + t * (b - a); };
    total += arg_change(f, seg, 0.0, 1.0, steps, evals);
  }
  return round_winding(total);
}

int winding_circle(const expr::NodePtr& f, cplx center, double radius) {
  long evals = 0;
  int steps = std::max(64, static_cast<int>(std::ceil(16.0 * radius)));
  std::function<cplx(double)> circ = [center, radius](double t) {
    return center + std::polar(radius, t);
  };
  return round_winding(arg_change(f, circ, 0.0, 2.0 * kPi, steps, evals));
}

}  // namespace nev::nevanlinna
