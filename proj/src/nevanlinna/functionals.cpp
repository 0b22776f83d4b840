#include "nev/nevanlinna/functionals.hpp"

#include <cmath>

namespace nev::nevanlinna {

namespace {

// Candidates slightly outside the circle still shape the integrand.
double candidate_radius(double r) { return 1.25 * r + 1e-9; }

}  // namespace

QuadratureResult proximity(const expr::NodePtr& f, double r, const QuadratureOptions& opt) {
  if (!(r > 0.0) || !std::isfinite(r))
    throw Error(ErrorKind::precondition, "radius must be positive and finite");
  auto cands = expr::pole_candidates(f, candidate_radius(r));
  return circle_log_integral(f, r, LogKind::log_plus, cands, nullptr, {}, opt);
}

QuadratureResult proximity(const expr::MeroExpr& f, double r, const QuadratureOptions& opt) {
  return proximity(f.root(), r, opt);
}

CountResult count_from_catalog(const expr::ZeroPoleList& list, expr::PointKind kind) {
  CountResult c;
  double r = list.radius;
  for (const auto& e : list.entries) {
    if (e.kind != kind) continue;
    double mod = std::abs(e.location);
    double lg = mod == 0.0 ? std::log(r) : std::log(r / mod);
    c.n += e.multiplicity;
    c.N += e.multiplicity * lg;
    c.n_distinct += 1;
    c.N_distinct += lg;
  }
  return c;
}

CountResult counting(const expr::MeroExpr& f, double r, Target target) {
  auto list = expr::enumerate_zeros_poles(f, r);
  return count_from_catalog(list, target == Target::poles ? expr::PointKind::pole
                                                          : expr::PointKind::zero);
}

FunctionalSample characteristic(const expr::MeroExpr& f, double r, const QuadratureOptions& opt) {
  auto list = expr::enumerate_zeros_poles(f, r);
  CountResult poles = count_from_catalog(list, expr::PointKind::pole);
  CountResult zeros = count_from_catalog(list, expr::PointKind::zero);
  FunctionalSample s;
  s.r = r;
  s.diagnostics = proximity(f, r, opt);
  s.m = s.diagnostics.value;
  s.n = poles.n;
  s.N = poles.N;
  s.n_zeros = zeros.n;
  s.N_zeros = zeros.N;
  s.T = s.m + s.N;
  return s;
}

double AngularCountParams::threshold() const { return 1.0 - std::sqrt(epsilon); }

namespace {
void check_params(const AngularCountParams& p) {
  if (!(p.epsilon > 0.0 && p.epsilon < 1.0))
    throw Error(ErrorKind::precondition, "epsilon must lie in (0, 1)");
  if (p.omega == cplx{}) throw Error(ErrorKind::precondition, "omega must be nonzero");
}
}  // namespace

int angular_count_from_catalog(const expr::ZeroPoleList& list, expr::PointKind kind,
                               const AngularCountParams& p) {
  check_params(p);
  double th = p.threshold();
  int count = 0;
  for (const auto& e : list.entries) {
    if (e.kind != kind || e.location == cplx{}) continue;
    if (std::abs(std::sin(std::arg(e.location / p.omega))) >= th) count += e.multiplicity;
  }
  return count;
}

int angular_counting(const expr::MeroExpr& f, double r, const AngularCountParams& p, Target target) {
  check_params(p);
  auto list = expr::enumerate_zeros_poles(f, r);
  return angular_count_from_catalog(
      list, target == Target::poles ? expr::PointKind::pole : expr::PointKind::zero, p);
}

double pair_ratio(const expr::MeroExpr& f, double r, const AngularCountParams& p, Target target) {
  check_params(p);
  auto list = expr::enumerate_zeros_poles(f, r);
  auto kind = target == Target::poles ? expr::PointKind::pole : expr::PointKind::zero;
  int n = list.count(kind);
  if (n == 0) throw Error(ErrorKind::zero_denominator, "n(r) is zero; ratio undefined");
  return static_cast<double>(angular_count_from_catalog(list, kind, p)) / n;
}

}  // namespace nev::nevanlinna
