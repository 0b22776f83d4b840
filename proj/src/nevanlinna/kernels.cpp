#include "nev/nevanlinna/kernels.hpp"

#include <cmath>

#include "nev/expr/catalog.hpp"
#include "nev/expr/evaluate.hpp"

namespace nev::nevanlinna {

double poisson_kernel(cplx z, double theta) {
  double a = std::abs(z);
  if (!(a < 1.0)) throw Error(ErrorKind::domain, "Poisson kernel needs |z| < 1");
  return (1.0 - a) * (1.0 + a) / std::norm(std::polar(1.0, theta) - z);
}

double green(cplx z, cplx a) {
  double rz = std::abs(z), ra = std::abs(a);
  if (!(rz < 1.0) || !(ra < 1.0)) throw Error(ErrorKind::domain, "Green function needs |z|, |a| < 1");
  if (z == a) throw Error(ErrorKind::coincidence, "Green function is singular at z = a");
  // |1 - conj(a) z|^2 = |z - a|^2 + (1 - |z|^2)(1 - |a|^2)
  double gap = (1.0 - rz) * (1.0 + rz) * (1.0 - ra) * (1.0 + ra);
  return 0.5 * std::log1p(gap / std::norm(z - a));
}

QuadratureResult poisson_jensen_reconstruct(const expr::MeroExpr& f, double s, cplx z,
                                            const QuadratureOptions& opt) {
  if (!(s > 0.0)) throw Error(ErrorKind::precondition, "radius must be positive");
  if (!(std::abs(z) < s)) throw Error(ErrorKind::domain, "z must lie inside the disk");
  auto list = expr::enumerate_zeros_poles(f, s);
  for (const auto& e : list.entries)
    if (std::abs(e.location - z) <= 1e-12 * std::max(1.0, s))
      throw Error(ErrorKind::precondition, "z is a zero or pole of f");
  cplx w = z / s;
  auto weight = [w](double t) { return poisson_kernel(w, t); };
  std::vector<double> breaks;
  if (w != cplx{}) {
    double c = std::arg(w), width = 1.0 - std::abs(w);
    for (double k : {-4.0, -1.0, 0.0, 1.0, 4.0}) breaks.push_back(c + k * width);
  }
  auto near = expr::zeros_poles_near(f.root(), 1.25 * s);
  QuadratureResult q =
      circle_log_integral(f.root(), s, LogKind::log_abs, near, weight, breaks, opt);
  double correction = 0.0;
  for (const auto& e : list.entries) {
    double g = e.multiplicity * green(w, e.location / s);
    correction += e.kind == expr::PointKind::zero ? -g : g;
  }
  q.value += correction;
  return q;
}

}  // namespace nev::nevanlinna
