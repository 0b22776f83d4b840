#include "nev/shifts/shifts.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "nev/expr/evaluate.hpp"
#include "nev/expr/transform.hpp"
#include "nev/nevanlinna/grid.hpp"

namespace nev::shifts {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kTwoPi = 2.0 * kPi;

expr::MeroExpr g_prime(const expr::MeroExpr& f, cplx a) {
  expr::MeroExpr gp = expr::minus_constant(expr::differentiate(f), a);
  if (expr::is_constant_value(gp.root(), 0.0))
    throw Error(ErrorKind::precondition, "f' - a vanishes identically");
  return gp;
}

double safe_T(const expr::MeroExpr& f, double r) {
  double rr = nevanlinna::avoid_singular_radius(f.root(), r);
  return nevanlinna::characteristic(f, rr).T;
}

}  // namespace

expr::MeroExpr shift_quotient(const expr::MeroExpr& f, cplx a, cplx eta) {
  expr::MeroExpr gp = g_prime(f, a);
  return (expr::shift(f, eta) - f - expr::constant(a * eta)) / gp;
}

double lagrange_bound_check(const expr::MeroExpr& f, cplx a, double r, cplx eta, int n_angles) {
  if (eta == cplx{}) throw Error(ErrorKind::precondition, "eta must be nonzero");
  if (!(r > 0.0) || n_angles < 1) throw Error(ErrorKind::precondition, "need r > 0 and angles");
  expr::MeroExpr gp = g_prime(f, a);
  constexpr int kSegment = 256;
  double worst = -HUGE_VAL;
  for (int k = 0; k < n_angles; ++k) {
    double theta = kTwoPi * k / n_angles;
    bool done = false;
    for (int attempt = 0; attempt < 8 && !done; ++attempt, theta += 1e-4 * (attempt + 1)) {
      cplx z = std::polar(r, theta);
      auto fz = expr::value_at(f, z);
      auto fze = expr::value_at(f, z + eta);
      auto g0 = expr::value_at(gp, z);
      if (!fz || !fze || !g0 || *g0 == cplx{}) continue;
      cplx quotient = (*fze - *fz - a * eta) / *g0;
      auto seg = [&](double t) -> double {
        auto v = expr::value_at(gp, z + t * eta);
        return v ? std::abs(*v) : HUGE_VAL;
      };
      std::vector<double> vals(kSegment + 1);
      int best = 0;
      bool bad = false;
      for (int j = 0; j <= kSegment; ++j) {
        vals[j] = seg(static_cast<double>(j) / kSegment);
        if (!std::isfinite(vals[j])) bad = true;
        if (vals[j] > vals[best]) best = j;
      }
      if (bad) continue;
      // Golden-section refinement around the best sample.
      double lo = std::max(0, best - 1) / static_cast<double>(kSegment);
      double hi = std::min(kSegment, best + 1) / static_cast<double>(kSegment);
      double maxg = vals[best];
      const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
      double c = hi - gr * (hi - lo), d = lo + gr * (hi - lo);
      double fc = seg(c), fd = seg(d);
      for (int it = 0; it < 60; ++it) {
        if (fc > fd) {
          hi = d;
          d = c;
          fd = fc;
          c = hi - gr * (hi - lo);
          fc = seg(c);
        } else {
          lo = c;
          c = d;
          fc = fd;
          d = lo + gr * (hi - lo);
          fd = seg(d);
        }
      }
      maxg = std::max({maxg, fc, fd});
      worst = std::max(worst, std::abs(quotient) - std::abs(eta) * maxg / std::abs(*g0));
      done = true;
    }
    if (!done) throw Error(ErrorKind::budget_exceeded, "resample budget exceeded near singularities");
  }
  return worst;
}

double vanishing_shift_proximity(const expr::MeroExpr& f, cplx a, double r, cplx eta) {
  if (eta == cplx{}) throw Error(ErrorKind::precondition, "eta must be nonzero");
  return nevanlinna::proximity(shift_quotient(f, a, eta), r).value;
}

double default_alpha(double r) { return r > 1.0 ? 1.0 / std::log(r) : HUGE_VAL; }

VanishingProbe vanishing_limit_probe(const expr::MeroExpr& f, cplx a,
                                     const std::vector<std::pair<double, cplx>>& points,
                                     double threshold, const AlphaFn& alpha) {
  if (expr::is_z_free(f.root())) throw Error(ErrorKind::precondition, "f must be non-constant");
  if (points.empty()) throw Error(ErrorKind::precondition, "empty eta sequence");
  for (std::size_t k = 0; k < points.size(); ++k) {
    if (k > 0 && !(std::abs(points[k].second) < std::abs(points[k - 1].second)))
      throw Error(ErrorKind::precondition, "|eta| must be strictly decreasing");
    if (!(std::abs(points[k].second) < alpha(points[k].first)))
      throw Error(ErrorKind::precondition, "|eta| must stay below alpha(r)");
  }
  VanishingProbe out;
  for (const auto& [r, eta] : points)
    out.table.push_back({r, eta, vanishing_shift_proximity(f, a, r, eta)});
  out.verdict = out.table.back().m < threshold ? harness::Verdict::pass : harness::Verdict::fail;
  return out;
}

VanishingProbe vanishing_limit_probe(const expr::MeroExpr& f, cplx a, double r,
                                     const std::vector<cplx>& etas, double threshold,
                                     const AlphaFn& alpha) {
  std::vector<std::pair<double, cplx>> points;
  for (cplx e : etas) points.push_back({r, e});
  return vanishing_limit_probe(f, a, points, threshold, alpha);
}

double OmegaSpec::at(double r) const { return coef * std::pow(r, beta); }

BoundBreakdown unbounded_shift_breakdown(const expr::MeroExpr& f, cplx a, const OmegaSpec& omega,
                                         double r, double epsilon, double varsigma) {
  double window = std::min(0.5 - 0.5 * varsigma, 1.0 - 4.0 * varsigma / 3.0);
  if (!(omega.beta > 0.0 && omega.beta < window))
    throw Error(ErrorKind::precondition, "beta outside (0, min(1/2 - varsigma/2, 1 - 4 varsigma/3))");
  if (!(std::abs(omega.coef) > 0.0 && std::abs(omega.coef) <= 1.0))
    throw Error(ErrorKind::precondition, "omega coefficient must satisfy 0 < |coef| <= 1");
  if (!(epsilon > 0.0 && epsilon < 1.0)) throw Error(ErrorKind::precondition, "epsilon in (0, 1)");
  double e1 = 1.0 - varsigma - 2.0 * omega.beta - epsilon;
  double e2 = 1.5 - 2.0 * varsigma - 1.5 * omega.beta - epsilon;
  if (!(e1 > 0.0) || !(e2 > 0.0))
    throw Error(ErrorKind::precondition, "exponent 1-s-2b-e or 3/2-2s-3b/2-e not positive");
  if (!(r > 1.0)) throw Error(ErrorKind::precondition, "r must exceed 1");

  BoundBreakdown b;
  b.omega = omega.at(r);
  expr::MeroExpr fp = expr::differentiate(f);
  expr::MeroExpr gp = g_prime(f, a);
  b.lhs = nevanlinna::proximity(shift_quotient(f, a, b.omega), r).value;
  b.T_fprime = nevanlinna::characteristic(fp, r).T;
  b.term_T = b.T_fprime / std::pow(r, e1);

  nevanlinna::AngularCountParams p{epsilon, cplx{b.omega}};
  auto zeros = expr::enumerate_zeros_poles(gp, r);
  auto cz = nevanlinna::count_from_catalog(zeros, expr::PointKind::zero);
  if (cz.n > 0) {
    double R = static_cast<double>(nevanlinna::angular_count_from_catalog(zeros, expr::PointKind::zero, p)) / cz.n;
    b.term_Rzero = R * cz.N / std::pow(r, e2);
  }
  auto poles = expr::enumerate_zeros_poles(fp, r);
  auto cp = nevanlinna::count_from_catalog(poles, expr::PointKind::pole);
  if (cp.n > 0) {
    double R = static_cast<double>(nevanlinna::angular_count_from_catalog(poles, expr::PointKind::pole, p)) / cp.n;
    b.term_Rpole = R * cp.N / std::pow(r, e2);
  }
  b.term_log = std::log(r);
  b.ratio_lhs_over_T = b.T_fprime > 0.0 ? b.lhs / b.T_fprime : 0.0;
  return b;
}

double omega_ceiling(double r, double epsilon, const std::function<double(double)>& T_eval) {
  if (!(r > 0.0) || !(epsilon > 0.0)) throw Error(ErrorKind::precondition, "need r > 0, eps > 0");
  double T = T_eval(r + epsilon);
  if (!(T > 1.0)) throw Error(ErrorKind::degenerate, "T(r + eps, f) <= 1; ceiling formula degenerate");
  return std::pow(T, -3.0 * epsilon / (1.0 + 2.0 * epsilon)) * std::pow(r, -epsilon / (1.0 + epsilon));
}

double angular_shift_proximity(const expr::MeroExpr& f, double r, double omega) {
  if (!(omega >= 0.0) || !std::isfinite(omega))
    throw Error(ErrorKind::precondition, "omega must be >= 0");
  if (omega == 0.0) return 0.0;
  expr::MeroExpr fp = expr::differentiate(f);
  if (expr::is_constant_value(fp.root(), 0.0))
    throw Error(ErrorKind::precondition, "f' vanishes identically");
  expr::MeroExpr q = (expr::angular_shift(f, omega) - f) / fp;
  return nevanlinna::proximity(q, r).value;
}

namespace {

struct Circle {
  const expr::MeroExpr& f;
  const expr::MeroExpr& fp;
  double r;

  double L(double t) const {
    expr::LogPolar v = expr::log_polar(f.root(), std::polar(r, t));
    if (v.zero) return -HUGE_VAL;
    if (v.pole) return HUGE_VAL;
    return v.log_abs;
  }
  // d/dt log|f(r e^{it})| = Re(f'/f * i r e^{it})
  double D(double t) const {
    cplx z = std::polar(r, t);
    expr::LogPolar a = expr::log_polar(f.root(), z);
    expr::LogPolar b = expr::log_polar(fp.root(), z);
    if (a.zero || a.pole || b.pole) return 0.0;
    if (b.zero) return 0.0;
    cplx q = std::polar(std::exp(b.log_abs - a.log_abs), b.arg - a.arg);
    return (q * cplx{0.0, 1.0} * z).real();
  }
};

std::pair<double, double> golden_max(const Circle& c, double lo, double hi) {
  const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
  double x1 = hi - gr * (hi - lo), x2 = lo + gr * (hi - lo);
  double f1 = c.L(x1), f2 = c.L(x2);
  for (int it = 0; it < 48 && hi - lo > 1e-13; ++it) {
    if (f1 > f2) {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - gr * (hi - lo);
      f1 = c.L(x1);
    } else {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + gr * (hi - lo);
      f2 = c.L(x2);
    }
  }
  return f1 > f2 ? std::pair{x1, f1} : std::pair{x2, f2};
}

}  // namespace

double oscillation_v(const expr::MeroExpr& f, double r, double theta, const OscillationOptions& opt) {
  if (!(r > 0.0)) throw Error(ErrorKind::precondition, "radius must be positive");
  if (!(theta >= 0.0)) throw Error(ErrorKind::precondition, "theta must be >= 0");
  if (theta == 0.0) return 0.0;
  expr::MeroExpr fp = expr::differentiate(f);
  Circle c{f, fp, r};
  int n = opt.base_samples;
  double h = kTwoPi / n;
  std::vector<double> L(n), D(n);
  for (int k = 0; k < n; ++k) {
    L[k] = c.L(k * h);
    D[k] = c.D(k * h);
  }
  // Local maxima of log|f| along the circle.
  std::vector<std::pair<double, double>> maxima;
  for (int k = 0; k < n; ++k) {
    int j = (k + 1) % n;
    if (D[k] > 0.0 && D[j] <= 0.0) {
      auto m = golden_max(c, k * h, (k + 1) * h);
      m.second = std::max({m.second, L[k], L[j]});
      maxima.push_back(m);
    }
  }
  double width = std::min(theta, kTwoPi);
  bool full = theta >= kTwoPi;
  double acc = 0.0;
  int used = 0, skipped = 0;
  for (int k = 0; k < n; ++k) {
    double base = L[k];
    if (!std::isfinite(base)) {
      if (++skipped > opt.max_singular_bases)
        throw Error(ErrorKind::budget_exceeded, "too many singular base angles");
      continue;
    }
    double t = k * h;
    double sup = base;
    if (!full) sup = std::max(sup, c.L(t + width));
    for (const auto& [tm, lm] : maxima) {
      double d = std::fmod(tm - t + 2.0 * kTwoPi, kTwoPi);
      if (full || (d > 0.0 && d < width)) sup = std::max(sup, lm);
    }
    if (!std::isfinite(sup)) throw Error(ErrorKind::non_finite, "pole on the oscillation circle");
    acc += sup - base;
    ++used;
  }
  return used > 0 ? std::max(0.0, acc / used) : 0.0;
}

double lambda_r(double T_value, double r) {
  if (r < std::numbers::e) throw Error(ErrorKind::domain, "lambda(r) needs r >= e");
  if (!(T_value > 0.0)) throw Error(ErrorKind::precondition, "T must be positive");
  double lp = std::max(0.0, std::log(T_value / std::log(r)));
  if (lp == 0.0) return 1.0;
  return std::min(1.0, 1.0 / lp);
}

Op1Result op1_probe(const expr::MeroExpr& f, double epsilon, const std::vector<double>& r_grid) {
  if (!(epsilon > 0.0)) throw Error(ErrorKind::precondition, "epsilon must be positive");
  if (r_grid.empty()) throw Error(ErrorKind::precondition, "empty grid");
  Op1Result out;
  std::vector<std::pair<double, double>> series;
  for (double r0 : r_grid) {
    if (r0 < std::numbers::e) throw Error(ErrorKind::domain, "op1 grid needs r >= e");
    double r = nevanlinna::avoid_singular_radius(f.root(), r0);
    Op1Point p{};
    p.r = r;
    p.T = nevanlinna::characteristic(f, r).T;
    p.lambda = lambda_r(p.T, r);
    p.theta = std::pow(p.lambda, 20);
    p.v = oscillation_v(f, r, p.theta);
    p.flagged = p.v > epsilon * p.T;
    out.points.push_back(p);
    series.push_back({r, p.v / p.T});
  }
  harness::ExceptionalOptions opt;
  opt.density_mode = true;
  out.report = harness::detect_exceptional(series, epsilon, opt);
  return out;
}

Ol1Result ol1_check(const expr::MeroExpr& f, double r, double sigma, double c0) {
  if (!(sigma > 1.0 && sigma < std::numbers::e))
    throw Error(ErrorKind::precondition, "sigma must lie in (1, e)");
  if (!(r > 0.0)) throw Error(ErrorKind::precondition, "r must be positive");
  double ls = std::log(sigma);
  double theta = std::pow(ls, 10);
  double a = std::log(r), half = 0.5 * ls;
  Ol1Result out;
  for (const auto& [x, w] : nevanlinna::gauss_legendre(32)) {
    double t = std::exp(a + half * (x + 1.0));
    double tt = nevanlinna::avoid_singular_radius(f.root(), t);
    out.lhs += half * w * oscillation_v(f, tt, theta);
  }
  out.T_dilated = safe_T(f, sigma * sigma * sigma * r);
  double scale = ls * ls;
  out.rhs_coeff_ratio = out.T_dilated > 0.0 ? out.lhs / (scale * out.T_dilated)
                                            : (out.lhs == 0.0 ? 0.0 : HUGE_VAL);
  out.bound = 508.0 * scale * (out.T_dilated + c0);
  out.holds = out.lhs <= out.bound;
  return out;
}

}  // namespace nev::shifts
