#include "nev/consequences/consequences.hpp"

#include <algorithm>
#include <cmath>

#include "nev/expr/catalog.hpp"
#include "nev/expr/evaluate.hpp"
#include "nev/expr/transform.hpp"
#include "nev/nevanlinna/functionals.hpp"
#include "nev/nevanlinna/grid.hpp"
#include "nev/nevanlinna/growth.hpp"

namespace nev::consequences {

namespace {

using expr::MeroExpr;
using nevanlinna::avoid_singular_radius;

std::vector<double> top_decade(const std::vector<double>& grid) {
  std::vector<double> g = grid;
  std::sort(g.begin(), g.end());
  std::vector<double> out;
  for (double r : g)
    if (r >= g.back() / 10.0) out.push_back(r);
  return out;
}

double clamp01(double x) { return std::clamp(x, 0.0, 1.0); }

// r nudged off the zero/pole moduli of every listed expression.
double safe_radius(const std::vector<expr::NodePtr>& fs, double r) {
  for (int pass = 0; pass < 8; ++pass) {
    double before = r;
    for (const auto& f : fs) r = avoid_singular_radius(f, r);
    if (r == before) break;
  }
  return r;
}

std::vector<double> order_grid(const std::vector<double>& grid) {
  auto [lo, hi] = std::minmax_element(grid.begin(), grid.end());
  double a = std::max(1.0, *lo);
  double b = std::max(*hi, 1e3 * a);
  return nevanlinna::geometric_grid(a, b, 16);
}

nevanlinna::OrderEstimate estimate_order(const MeroExpr& f, const std::vector<double>& grid) {
  std::vector<nevanlinna::FunctionalSample> samples;
  for (double r : order_grid(grid)) {
    double rr = avoid_singular_radius(f.root(), r);
    samples.push_back(nevanlinna::characteristic(f, rr));
  }
  return nevanlinna::order_estimate(samples);
}

}  // namespace

double percentile(std::vector<double> values, double q) {
  if (values.empty()) throw Error(ErrorKind::precondition, "percentile of an empty set");
  std::sort(values.begin(), values.end());
  double pos = q * static_cast<double>(values.size() - 1);
  std::size_t k = static_cast<std::size_t>(std::floor(pos));
  if (k + 1 >= values.size()) return values.back();
  double t = pos - static_cast<double>(k);
  return values[k] + t * (values[k + 1] - values[k]);
}

DeficiencyEstimate deficiency_varying(
    const std::function<std::pair<MeroExpr, Value>(double)>& at, const std::vector<double>& r_grid) {
  if (r_grid.size() < 2) throw Error(ErrorKind::precondition, "grid too small");
  auto [lo, hi] = std::minmax_element(r_grid.begin(), r_grid.end());
  if (!(*lo > 0.0) || *hi / *lo < 100.0 * (1.0 - 1e-12))
    throw Error(ErrorKind::precondition, "deficiency grid must span at least 2 decades");
  DeficiencyEstimate est;
  est.r_min = *lo;
  est.r_max = *hi;
  double max_T = 0.0;
  for (double r0 : top_decade(r_grid)) {
    auto [f, a] = at(r0);
    est.a = a;
    if (expr::is_z_free(f.root())) throw Error(ErrorKind::precondition, "f must be non-constant");
    MeroExpr g = a ? expr::minus_constant(f, *a) : f;
    double r = safe_radius({f.root(), g.root()}, r0);
    auto sample = nevanlinna::characteristic(f, r);
    max_T = std::max(max_T, sample.T);
    if (!(sample.T > 0.0)) continue;
    double m, nbar;
    if (a) {
      m = nevanlinna::proximity(expr::reciprocal(g), r).value;
      auto list = expr::enumerate_zeros_poles(g, r);
      nbar = nevanlinna::count_from_catalog(list, expr::PointKind::zero).N_distinct;
    } else {
      m = sample.m;
      auto list = expr::enumerate_zeros_poles(f, r);
      nbar = nevanlinna::count_from_catalog(list, expr::PointKind::pole).N_distinct;
    }
    est.radii.push_back(r);
    est.m_over_T.push_back(m / sample.T);
    est.nbar_over_T.push_back(nbar / sample.T);
  }
  if (max_T < 1.0 || est.radii.empty())
    throw Error(ErrorKind::degenerate, "T(r, f) < 1 across the grid");
  est.delta = clamp01(percentile(est.m_over_T, 0.1));
  est.theta_bar = clamp01(1.0 - percentile(est.nbar_over_T, 0.9));
  return est;
}

DeficiencyEstimate deficiency(const MeroExpr& f, Value a, const std::vector<double>& r_grid) {
  return deficiency_varying([&](double) { return std::pair{f, a}; }, r_grid);
}

void check_not_periodic(const MeroExpr& f, cplx c) {
  double worst = 0.0;
  for (int k = 0; k < 50; ++k) {
    // Deterministic probe points spread over |z| <= 3.
    cplx z = std::polar(0.06 * (k + 1), 2.399963229728653 * k);
    auto a = expr::value_at(f, z);
    auto b = expr::value_at(f, z + c);
    if (!a || !b) continue;
    worst = std::max(worst, std::abs(*b - *a));
  }
  if (!(worst > 1e-6)) throw Error(ErrorKind::periodic, "f is numerically c-periodic");
}

std::vector<PairRecord> pair_scan(const MeroExpr& f, Value a, cplx c, double r) {
  if (!(r > 0.0)) throw Error(ErrorKind::precondition, "r must be positive");
  if (c == cplx{}) throw Error(ErrorKind::precondition, "c must be nonzero");
  check_not_periodic(f, c);
  MeroExpr h = a ? f : expr::reciprocal(f);
  MeroExpr g = a ? expr::minus_constant(f, *a) : h;
  double wide = avoid_singular_radius(g.root(), r + std::abs(c) + 1.0);
  auto list = expr::enumerate_zeros_poles(g, wide);
  auto pts = list.of_kind(expr::PointKind::zero);

  std::vector<MeroExpr> derivs{h};
  auto deriv = [&](std::size_t j) -> const MeroExpr& {
    while (derivs.size() <= j) derivs.push_back(expr::differentiate(derivs.back()));
    return derivs[j];
  };
  auto agree = [](cplx u, cplx v) {
    return std::abs(u - v) <= std::max(1e-12, 1e-8 * std::max(std::abs(u), std::abs(v)));
  };

  std::vector<PairRecord> out;
  for (const auto& p : pts) {
    cplx z0 = p.location;
    if (std::abs(z0) > r * (1.0 + 1e-12)) continue;
    const expr::ZeroPole* partner = nullptr;
    for (const auto& q : pts)
      if (std::abs(q.location - (z0 + c)) <= 1e-7 * std::max(1.0, std::abs(z0))) partner = &q;
    if (!partner) continue;
    cplx z1 = partner->location;
    PairRecord rec{z0, c, kEqualTermsCap, 0.0};
    for (int j = 0; j < kEqualTermsCap; ++j) {
      auto u = expr::value_at(deriv(static_cast<std::size_t>(j)), z0);
      auto v = expr::value_at(deriv(static_cast<std::size_t>(j)), z1);
      if (!u || !v) {
        rec.equal_terms = std::max(1, j);
        rec.residual = HUGE_VAL;
        break;
      }
      if (j > 0 && !agree(*u, *v)) {
        rec.equal_terms = j;
        rec.residual = std::abs(*u - *v);
        break;
      }
    }
    out.push_back(rec);
  }
  return out;
}

double integrated_pair_count(const std::vector<PairRecord>& pairs, double r) {
  double N = 0.0;
  for (const auto& p : pairs) {
    double mod = std::abs(p.z0);
    if (mod > r) continue;
    N += p.equal_terms * (mod == 0.0 ? std::log(r) : std::log(r / mod));
  }
  return N;
}

PairIndex pair_index_varying(const MeroExpr& f, Value a, const std::function<cplx(double)>& c_of_r,
                             const std::vector<double>& r_grid) {
  if (r_grid.empty()) throw Error(ErrorKind::precondition, "empty grid");
  PairIndex out;
  for (double r0 : top_decade(r_grid)) {
    double r = avoid_singular_radius(f.root(), r0);
    auto pairs = pair_scan(f, a, c_of_r(r), r);
    double T = nevanlinna::characteristic(f, r).T;
    if (!(T > 0.0)) continue;
    out.radii.push_back(r);
    out.ratios.push_back(integrated_pair_count(pairs, r) / T);
  }
  if (out.ratios.empty()) throw Error(ErrorKind::degenerate, "T vanishes on the grid");
  out.index = percentile(out.ratios, 0.1);
  return out;
}

PairIndex pair_index(const MeroExpr& f, Value a, cplx c, const std::vector<double>& r_grid) {
  if (r_grid.empty()) throw Error(ErrorKind::precondition, "empty grid");
  auto top = top_decade(r_grid);
  double r_max = avoid_singular_radius(f.root(), top.back());
  auto pairs = pair_scan(f, a, c, r_max);
  PairIndex out;
  for (double r0 : top) {
    double r = avoid_singular_radius(f.root(), r0);
    double T = nevanlinna::characteristic(f, r).T;
    if (!(T > 0.0)) continue;
    out.radii.push_back(r);
    out.ratios.push_back(integrated_pair_count(pairs, r) / T);
  }
  if (out.ratios.empty()) throw Error(ErrorKind::degenerate, "T vanishes on the grid");
  out.index = percentile(out.ratios, 0.1);
  return out;
}

double alpha1(const MeroExpr& f, double r) {
  double rr = avoid_singular_radius(f.root(), r);
  auto list = expr::enumerate_zeros_poles(f, rr);
  double nearest = HUGE_VAL, sum = 0.0;
  for (const auto& e : list.entries) {
    if (e.kind != expr::PointKind::pole) continue;
    double mod = std::abs(e.location);
    if (mod == 0.0) continue;
    nearest = std::min(nearest, mod);
    sum += e.multiplicity / mod;
  }
  double h = std::min(1.0 - 1e-9, nearest);
  double out = std::min(r, h / 2.0);
  if (r > 1.0) out = std::min(out, 1.0 / std::sqrt(std::log(r)));
  if (sum > 0.0) out = std::min(out, 1.0 / sum);
  return out;
}

namespace {

double limsup_N_over_T(const MeroExpr& f, const MeroExpr& fp, const std::vector<double>& grid) {
  std::vector<double> ratios;
  for (double r0 : top_decade(grid)) {
    double r = safe_radius({f.root(), fp.root()}, r0);
    auto list = expr::enumerate_zeros_poles(f, r);
    double N = nevanlinna::count_from_catalog(list, expr::PointKind::pole).N;
    double T = nevanlinna::characteristic(fp, r).T;
    if (T > 0.0) ratios.push_back(N / T);
  }
  if (ratios.empty()) throw Error(ErrorKind::degenerate, "T(r, f') vanishes on the grid");
  return percentile(ratios, 0.9);
}

PropResult finish_deficiency(double lhs, double limsup, double delta_shift) {
  PropResult out;
  out.lhs = lhs;
  out.limsup_N_over_T = limsup;
  out.rhs = (1.0 + limsup) * delta_shift;
  out.margin = out.rhs - out.lhs;
  out.verdict = out.margin >= -kVerdictSlack ? harness::Verdict::pass : harness::Verdict::fail;
  return out;
}

void require_entire_finite_order(const MeroExpr& f, const std::vector<double>& grid) {
  double r_max = *std::max_element(grid.begin(), grid.end());
  double r = avoid_singular_radius(f.root(), r_max);
  if (expr::enumerate_zeros_poles(f, r).count(expr::PointKind::pole) > 0)
    throw Error(ErrorKind::precondition, "f must be entire");
  double rho = estimate_order(f, grid).rho;
  if (!(rho < 10.0)) throw Error(ErrorKind::precondition, "f must have finite order");
}

}  // namespace

PropResult prop51_check(const MeroExpr& f, cplx a, cplx eta, const std::vector<double>& r_grid) {
  if (eta == cplx{}) throw Error(ErrorKind::precondition, "eta must be nonzero");
  for (double r : top_decade(r_grid))
    if (!(std::abs(eta) < alpha1(f, r)))
      throw Error(ErrorKind::precondition, "|eta| must stay below alpha_1(r)");
  MeroExpr fp = expr::differentiate(f);
  double lhs = deficiency(fp, a, r_grid).delta;
  double ls = limsup_N_over_T(f, fp, r_grid);
  MeroExpr d = expr::shift(f, eta) - f;
  double dshift = deficiency(d, a * eta, r_grid).delta;
  return finish_deficiency(lhs, ls, dshift);
}

PropResult prop52_check(const MeroExpr& f, cplx a, const shifts::OmegaSpec& omega,
                        const std::vector<double>& r_grid) {
  if (!(omega.beta > 0.0 && omega.beta < 0.5))
    throw Error(ErrorKind::precondition, "beta must lie in (0, 1/2)");
  MeroExpr fp = expr::differentiate(f);
  double rho = estimate_order(f, r_grid).rho;
  double mu = estimate_order(fp, r_grid).rho;
  if (!(mu > rho - 0.5)) throw Error(ErrorKind::precondition, "needs mu(f') > rho(f) - 1/2");
  double lhs = deficiency(fp, a, r_grid).delta;
  double ls = limsup_N_over_T(f, fp, r_grid);
  auto at = [&](double r) {
    double w = omega.at(r);
    return std::pair{expr::shift(f, w) - f, Value{a * w}};
  };
  double dshift = deficiency_varying(at, r_grid).delta;
  return finish_deficiency(lhs, ls, dshift);
}

namespace {
PropResult finish_pairs(const MeroExpr& f, double sum, const std::vector<double>& grid) {
  PropResult out;
  out.lhs = sum;
  out.rhs = 1.0 - deficiency(expr::differentiate(f), Value{0.0}, grid).delta;
  out.margin = out.rhs - out.lhs;
  out.verdict = out.lhs <= out.rhs + kVerdictSlack ? harness::Verdict::pass : harness::Verdict::fail;
  return out;
}
}  // namespace

PropResult prop53_check(const MeroExpr& f, cplx eta, const std::vector<cplx>& a_list,
                        const std::vector<double>& r_grid) {
  require_entire_finite_order(f, r_grid);
  double sum = 0.0;
  for (cplx a : a_list) sum += pair_index(f, Value{a}, eta, r_grid).index;
  return finish_pairs(f, sum, r_grid);
}

PropResult prop54_check(const MeroExpr& f, const shifts::OmegaSpec& omega,
                        const std::vector<cplx>& a_list, const std::vector<double>& r_grid) {
  require_entire_finite_order(f, r_grid);
  double sum = 0.0;
  for (cplx a : a_list)
    sum += pair_index_varying(f, Value{a}, [&](double r) { return cplx{omega.at(r)}; }, r_grid).index;
  return finish_pairs(f, sum, r_grid);
}

SmtResult smt_analogue_check(const MeroExpr& F, const std::vector<LinearTarget>& a_list, cplx eta,
                             const std::vector<double>& r_grid, double s0, double s1) {
  for (std::size_t i = 0; i < a_list.size(); ++i)
    for (std::size_t j = i + 1; j < a_list.size(); ++j)
      if (a_list[i].p == a_list[j].p)
        throw Error(ErrorKind::precondition, "a_j' must be distinct");
  if (eta == cplx{}) throw Error(ErrorKind::precondition, "eta must be nonzero");
  MeroExpr f = expr::differentiate(F);
  MeroExpr d2 = expr::difference(F, eta, 2);
  bool vanishes = expr::is_constant_value(d2.root(), 0.0);
  if (!vanishes) {
    double worst = 0.0;
    for (int k = 0; k < 50; ++k) {
      auto v = expr::value_at(d2, std::polar(0.06 * (k + 1), 2.399963229728653 * k));
      worst = std::max(worst, v ? std::abs(*v) : HUGE_VAL);
    }
    vanishes = worst <= 1e-12;
  }
  if (vanishes) throw Error(ErrorKind::degenerate, "second difference of F vanishes identically");
  std::vector<MeroExpr> targets;
  for (const auto& t : a_list) targets.push_back(expr::minus_constant(f, t.p));

  SmtResult out;
  std::vector<std::pair<double, double>> series;
  std::vector<double> grid = r_grid;
  std::sort(grid.begin(), grid.end());
  for (double r0 : grid) {
    if (!(r0 > 1.0)) throw Error(ErrorKind::precondition, "grid needs r > 1");
    std::vector<expr::NodePtr> all{f.root(), d2.root()};
    for (const auto& t : targets) all.push_back(t.root());
    double r = safe_radius(all, r0);
    double lhs = 0.0;
    for (const auto& t : targets) lhs += nevanlinna::proximity(expr::reciprocal(t), r).value;
    auto sample = nevanlinna::characteristic(f, r);
    expr::ZeroPoleList list;
    try {
      list = expr::enumerate_zeros_poles(d2, r);
    } catch (const Error& e) {
      if (e.kind() == ErrorKind::identically_zero)
        throw Error(ErrorKind::degenerate, "second difference of F vanishes identically");
      throw;
    }
    double Np = nevanlinna::count_from_catalog(list, expr::PointKind::pole).N;
    double Nz = nevanlinna::count_from_catalog(list, expr::PointKind::zero).N;
    double slack = s0 * sample.T / std::log(r) + s1 * std::log(r);
    double rhs = sample.m + Np - Nz + slack;
    out.rows.push_back({r, lhs, rhs, rhs - lhs});
    series.push_back({r, lhs - rhs});
  }
  out.report = harness::detect_exceptional(series, 0.0);
  out.verdict = out.report.verdict;
  return out;
}

}  // namespace nev::consequences
