#include "nev/expr/catalog.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <optional>

#include "nev/expr/evaluate.hpp"
#include "nev/expr/polynomial.hpp"
#include "nev/expr/transform.hpp"
#include "nev/nevanlinna/argument_principle.hpp"

namespace nev::expr {

int ZeroPoleList::count(PointKind kind) const {
  int total = 0;
  for (const auto& e : entries)
    if (e.kind == kind) total += e.multiplicity;
  return total;
}

std::vector<ZeroPole> ZeroPoleList::of_kind(PointKind kind) const {
  std::vector<ZeroPole> out;
  for (const auto& e : entries)
    if (e.kind == kind) out.push_back(e);
  return out;
}

double boundary_guard(double r) { return 1e-9 * std::max(1.0, r); }

namespace {

constexpr double kPi = std::numbers::pi;
constexpr int kMultiplicityCap = 8;
constexpr long kLatticeCap = 200000;

// mult > 0 for zeros, < 0 for poles.
struct Point {
  cplx at;
  int mult;
};
using Divisor = std::vector<Point>;

bool coincide(cplx a, cplx b) {
  return std::abs(a - b) <= 1e-6 * std::max({1.0, std::abs(a), std::abs(b)});
}

void add_point(Divisor& d, cplx at, int mult) {
  if (mult == 0) return;
  for (auto& p : d)
    if (coincide(p.at, at)) {
      p.mult += mult;
      return;
    }
  d.push_back({at, mult});
}

void prune(Divisor& d) {
  std::erase_if(d, [](const Point& p) { return p.mult == 0; });
}

Divisor combine(Divisor a, const Divisor& b, int sign) {
  for (const auto& p : b) add_point(a, p.at, sign * p.mult);
  prune(a);
  return a;
}

struct Ctx {
  CatalogOptions opt;
  long cells = 0;
  bool used_fallback = false;
};

Divisor divisor(const NodePtr& n, double radius, Ctx& ctx);

Divisor rational_divisor(const Rational& q, double radius) {
  if (q.num.is_zero()) throw Error(ErrorKind::identically_zero, "expression is identically zero");
  Divisor d;
  for (const auto& c : polynomial_roots(q.num))
    if (std::abs(c.location) < radius) add_point(d, c.location, c.multiplicity);
  for (const auto& c : polynomial_roots(q.den))
    if (std::abs(c.location) < radius) add_point(d, c.location, -c.multiplicity);
  prune(d);
  return d;
}

// Solutions of p(z) = base + k*period inside the disk, each with `mult`.
void lattice(const Polynomial& p, cplx base, cplx period, int mult, double radius, Divisor& out) {
  if (p.degree() < 1) return;
  double bound = p.max_abs_bound(radius) + std::abs(base);
  double kmax = std::ceil(bound / std::abs(period)) + 1.0;
  if (kmax > static_cast<double>(kLatticeCap))
    throw Error(ErrorKind::budget_exceeded, "lattice catalog too large for this radius");
  long K = static_cast<long>(kmax);
  for (long k = -K; k <= K; ++k) {
    cplx target = base + static_cast<double>(k) * period;
    for (const auto& c : polynomial_roots(p - Polynomial::constant(target)))
      if (std::abs(c.location) < radius) out.push_back({c.location, mult * c.multiplicity});
  }
}

std::optional<Polynomial> as_polynomial(const NodePtr& n) {
  auto q = to_rational(n);
  if (!q || q->den.degree() != 0) return std::nullopt;
  return cplx{1.0} / q->den.coeffs()[0] * q->num;
}

bool is_trig(Op op) { return op == Op::exp || op == Op::sin || op == Op::cos || op == Op::tan; }

// Divisor of F(p(z)) - a for F in exp/sin/cos/tan and polynomial p.
Divisor trig_level_divisor(Op fn, const Polynomial& p, cplx a, double radius) {
  Divisor d;
  auto near_int = [](cplx x) { return std::abs(x) < 1e-12; };
  switch (fn) {
    case Op::exp:
      if (a == cplx{}) break;
      lattice(p, std::log(a), cplx{0.0, 2.0 * kPi}, 1, radius, d);
      break;
    case Op::sin:
    case Op::cos: {
      cplx w1 = fn == Op::sin ? std::asin(a) : std::acos(a);
      cplx w2 = fn == Op::sin ? kPi - w1 : -w1;
      cplx gap = (w2 - w1) / (2.0 * kPi);
      if (near_int(gap - std::round(gap.real()))) {
        lattice(p, w1, 2.0 * kPi, 2, radius, d);
      } else {
        lattice(p, w1, 2.0 * kPi, 1, radius, d);
        lattice(p, w2, 2.0 * kPi, 1, radius, d);
      }
      break;
    }
    case Op::tan:
      if (std::abs(a - cplx{0.0, 1.0}) > 1e-14 && std::abs(a + cplx{0.0, 1.0}) > 1e-14)
        lattice(p, std::atan(a), kPi, 1, radius, d);
      lattice(p, kPi / 2, kPi, -1, radius, d);
      break;
    default: break;
  }
  return d;
}

// F(u) - a or a - F(u) (or + with a negated) for polynomial u.
std::optional<Divisor> level_set_catalog(const NodePtr& n, double radius) {
  const NodePtr* fnode = nullptr;
  cplx a;
  if (is_trig(n->lhs->op) && is_constant(n->rhs)) {
    fnode = &n->lhs;
    a = n->op == Op::sub ? n->rhs->value : -n->rhs->value;
  } else if (is_trig(n->rhs->op) && is_constant(n->lhs)) {
    fnode = &n->rhs;
    a = n->op == Op::sub ? n->lhs->value : -n->lhs->value;
  } else {
    return std::nullopt;
  }
  auto p = as_polynomial((*fnode)->lhs);
  if (!p) return std::nullopt;
  return trig_level_divisor((*fnode)->op, *p, a, radius);
}

void require_entire(const NodePtr& u, double radius, Ctx& ctx) {
  if (as_polynomial(u)) return;
  for (const auto& p : divisor(u, radius, ctx))
    if (p.mult < 0)
      throw Error(ErrorKind::not_catalogable,
                  "essential singularity: exp/sin/cos/tan of an argument with poles");
}

Divisor poles_only(const Divisor& d, int scale = 1) {
  Divisor out;
  for (const auto& p : d)
    if (p.mult * scale < 0) out.push_back({p.at, -p.mult * scale});
  return out;
}

Divisor zeros_only(const Divisor& d, int scale = 1) {
  Divisor out;
  for (const auto& p : d)
    if (p.mult * scale > 0) out.push_back({p.at, p.mult * scale});
  return out;
}

// Union keeping the larger order at shared locations. Orders are positive.
void unite(Divisor& into, const Divisor& more) {
  for (const auto& p : more) {
    bool found = false;
    for (auto& q : into)
      if (coincide(q.at, p.at)) {
        q.mult = std::max(q.mult, p.mult);
        found = true;
        break;
      }
    if (!found) into.push_back(p);
  }
}

// Superset of the poles of n (orders are upper bounds). Only denominators
// need real catalogs; everything else recurses on pole candidates.
Divisor pole_candidates(const NodePtr& n, double radius, Ctx& ctx);

void require_entire_fast(const NodePtr& u, double radius, Ctx& ctx) {
  if (as_polynomial(u)) return;
  if (pole_candidates(u, radius, ctx).empty()) return;
  require_entire(u, radius, ctx);
}

Divisor pole_candidates(const NodePtr& n, double radius, Ctx& ctx) {
  switch (n->op) {
    case Op::constant:
    case Op::var: return {};
    case Op::add:
    case Op::sub:
    case Op::mul: {
      if (auto q = to_rational(n)) return poles_only(rational_divisor(*q, radius));
      Divisor out = pole_candidates(n->lhs, radius, ctx);
      unite(out, pole_candidates(n->rhs, radius, ctx));
      return out;
    }
    case Op::div: {
      if (auto q = to_rational(n)) return poles_only(rational_divisor(*q, radius));
      Divisor out = pole_candidates(n->lhs, radius, ctx);
      unite(out, zeros_only(divisor(n->rhs, radius, ctx)));
      return out;
    }
    case Op::neg: return pole_candidates(n->lhs, radius, ctx);
    case Op::pow: {
      if (n->exponent > 0) {
        Divisor d = pole_candidates(n->lhs, radius, ctx);
        for (auto& p : d) p.mult *= n->exponent;
        return d;
      }
      return zeros_only(divisor(n->lhs, radius, ctx), -n->exponent);
    }
    case Op::exp:
    case Op::sin:
    case Op::cos: require_entire_fast(n->lhs, radius, ctx); return {};
    case Op::tan: {
      require_entire_fast(n->lhs, radius, ctx);
      if (auto p = as_polynomial(n->lhs)) return poles_only(trig_level_divisor(Op::tan, *p, 0.0, radius));
      return zeros_only(divisor(simp::apply(Op::cos, n->lhs), radius, ctx));
    }
    case Op::affine: {
      double inner = std::abs(n->scale) * radius + std::abs(n->offset);
      Divisor out;
      for (const auto& p : pole_candidates(n->lhs, inner * (1.0 + 1e-9) + 1e-12, ctx)) {
        cplx z = (p.at - n->offset) / n->scale;
        if (std::abs(z) < radius) out.push_back({z, p.mult});
      }
      return out;
    }
  }
  return {};
}

std::optional<int> try_winding(const NodePtr& n, const std::vector<cplx>& poly) {
  try {
    return nevanlinna::winding_polygon(n, poly);
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::boundary_collision) return std::nullopt;
    throw;
  }
}

std::optional<int> try_circle(const NodePtr& n, cplx c, double rho) {
  try {
    return nevanlinna::winding_circle(n, c, rho);
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::boundary_collision) return std::nullopt;
    throw;
  }
}

struct Cell {
  cplx lo, hi;
  int winding;
};

std::vector<cplx> corners(cplx lo, cplx hi) {
  return {lo, {hi.real(), lo.imag()}, hi, {lo.real(), hi.imag()}};
}

// Newton iteration with multiplicity m; returns the limit and the last step.
std::optional<std::pair<cplx, double>> newton(const NodePtr& f, const NodePtr& df, cplx z0, int m,
                                              double reach) {
  cplx z = z0;
  double last = HUGE_VAL;
  for (int it = 0; it < 80; ++it) {
    LogPolar a = log_polar(f, z);
    if (a.zero) return std::pair{z, 0.0};
    if (a.pole) return std::nullopt;
    LogPolar b = log_polar(df, z);
    if (b.zero || b.pole) break;
    cplx step = static_cast<double>(m) * std::polar(std::exp(a.log_abs - b.log_abs), a.arg - b.arg);
    if (!std::isfinite(step.real()) || !std::isfinite(step.imag())) return std::nullopt;
    z -= step;
    last = std::abs(step);
    if (std::abs(z - z0) > reach) return std::nullopt;
    if (last <= 1e-14 * std::max(1.0, std::abs(z))) return std::pair{z, last};
  }
  return std::pair{z, last};
}

bool inside(cplx z, cplx lo, cplx hi) {
  return z.real() >= lo.real() && z.real() < hi.real() && z.imag() >= lo.imag() &&
         z.imag() < hi.imag();
}

// Argument-principle subdivision for zeros; poles come from the candidates
// with their exact order fixed by a small winding circle.
Divisor hybrid(const NodePtr& n, double radius, Ctx& ctx) {
  ctx.used_fallback = true;
  double half = radius * (1.0 + 1e-3) + 1e-6;
  Divisor cand = pole_candidates(n, half * std::sqrt(2.0) * 1.01, ctx);

  Divisor poles;
  for (std::size_t i = 0; i < cand.size(); ++i) {
    cplx c = cand[i].at;
    double sep = HUGE_VAL;
    for (std::size_t j = 0; j < cand.size(); ++j)
      if (j != i) sep = std::min(sep, std::abs(cand[j].at - c));
    double rho = std::min(1e-4 * std::max(1.0, std::abs(c)), 0.3 * sep);
    std::optional<int> w;
    for (int attempt = 0; attempt < 6 && !w; ++attempt, rho *= 0.71) w = try_circle(n, c, rho);
    if (!w) throw Error(ErrorKind::budget_exceeded, "pole order could not be resolved");
    if (*w < 0) poles.push_back({c, *w});
  }

  auto poles_in = [&](cplx lo, cplx hi) {
    int total = 0;
    for (const auto& p : poles)
      if (inside(p.at, lo, hi)) total -= p.mult;
    return total;
  };
  auto clear_of_poles = [&](double x, bool vertical, double scale) {
    for (const auto& p : poles) {
      double d = vertical ? std::abs(p.at.real() - x) : std::abs(p.at.imag() - x);
      if (d < 1e-6 * scale) return false;
    }
    return true;
  };

  std::optional<int> root_w;
  for (int attempt = 0; attempt < 6 && !root_w; ++attempt) {
    bool clear = clear_of_poles(-half, true, half) && clear_of_poles(half, true, half) &&
                 clear_of_poles(-half, false, half) && clear_of_poles(half, false, half);
    if (clear) root_w = try_winding(n, corners({-half, -half}, {half, half}));
    if (!root_w) half *= 1.0137;
  }
  if (!root_w) throw Error(ErrorKind::budget_exceeded, "outer contour meets zeros or poles");

  NodePtr dn = differentiate(n);
  double min_size = 1e-7 * std::max(1.0, radius);
  Divisor zeros;
  std::vector<Cell> stack{{cplx{-half, -half}, cplx{half, half}, *root_w}};
  while (!stack.empty()) {
    Cell cell = stack.back();
    stack.pop_back();
    if (++ctx.cells > ctx.opt.cell_budget)
      throw Error(ErrorKind::budget_exceeded, "subdivision cell budget exceeded");
    int count = cell.winding + poles_in(cell.lo, cell.hi);
    if (count == 0) continue;
    if (count < 0) throw Error(ErrorKind::budget_exceeded, "inconsistent zero count in cell");
    double size = cell.hi.real() - cell.lo.real();
    cplx center = 0.5 * (cell.lo + cell.hi);

    if (auto nw = newton(n, dn, center, count, 2.0 * size)) {
      auto [p, last] = *nw;
      if (inside(p, cell.lo, cell.hi)) {
        bool strict = last <= 1e-14 * std::max(1.0, std::abs(p));
        bool accept = count == 1 && strict;
        if (!accept) {
          double rho = std::max(1e-6 * std::max(1.0, std::abs(p)), 100.0 * last);
          if (rho < 0.25 * size) {
            auto w = try_circle(n, p, rho);
            int inner = 0;
            for (const auto& q : poles)
              if (std::abs(q.at - p) < rho) inner -= q.mult;
            accept = w && *w + inner == count;
          }
        }
        if (accept) {
          if (count > kMultiplicityCap)
            throw Error(ErrorKind::budget_exceeded, "zero multiplicity above cap");
          zeros.push_back({p, count});
          continue;
        }
      }
    }
    if (size < min_size) {
      if (count > kMultiplicityCap)
        throw Error(ErrorKind::budget_exceeded, "zero multiplicity above cap");
      zeros.push_back({center, count});
      continue;
    }

    bool split = false;
    for (double frac : {0.5, 0.4731, 0.5269, 0.4417, 0.5583, 0.4123}) {
      double mx = cell.lo.real() + frac * size;
      double my = cell.lo.imag() + frac * size;
      if (!clear_of_poles(mx, true, size) || !clear_of_poles(my, false, size)) continue;
      double x0 = cell.lo.real(), x1 = cell.hi.real(), y0 = cell.lo.imag(), y1 = cell.hi.imag();
      // Quadrants of unequal size are fine; square-ness is not required.
      std::vector<Cell> kids{{{x0, y0}, {mx, my}, 0},
                             {{mx, y0}, {x1, my}, 0},
                             {{x0, my}, {mx, y1}, 0},
                             {{mx, my}, {x1, y1}, 0}};
      bool ok = true;
      int sum = 0;
      for (auto& k : kids) {
        auto w = try_winding(n, corners(k.lo, k.hi));
        if (!w) {
          ok = false;
          break;
        }
        k.winding = *w;
        sum += *w;
      }
      if (!ok || sum != cell.winding) continue;
      for (auto it = kids.rbegin(); it != kids.rend(); ++it) stack.push_back(*it);
      split = true;
      break;
    }
    if (!split) throw Error(ErrorKind::budget_exceeded, "cell could not be split cleanly");
  }

  Divisor out;
  for (const auto& z : zeros)
    if (std::abs(z.at) < radius) add_point(out, z.at, z.mult);
  for (const auto& p : poles)
    if (std::abs(p.at) < radius) add_point(out, p.at, p.mult);
  prune(out);
  return out;
}

Divisor divisor(const NodePtr& n, double radius, Ctx& ctx) {
  bool exact = !ctx.opt.force_fallback;
  switch (n->op) {
    case Op::constant:
      if (n->value == cplx{})
        throw Error(ErrorKind::identically_zero, "expression is identically zero");
      return {};
    case Op::var:
      return {{cplx{}, 1}};
    case Op::add:
    case Op::sub: {
      if (exact) {
        if (auto q = to_rational(n)) return rational_divisor(*q, radius);
        if (auto d = level_set_catalog(n, radius)) return *d;
      }
      return hybrid(n, radius, ctx);
    }
    case Op::mul: return combine(divisor(n->lhs, radius, ctx), divisor(n->rhs, radius, ctx), 1);
    case Op::div: return combine(divisor(n->lhs, radius, ctx), divisor(n->rhs, radius, ctx), -1);
    case Op::neg: return divisor(n->lhs, radius, ctx);
    case Op::pow: {
      Divisor d = divisor(n->lhs, radius, ctx);
      for (auto& p : d) p.mult *= n->exponent;
      prune(d);
      return d;
    }
    case Op::exp: require_entire(n->lhs, radius, ctx); return {};
    case Op::sin:
    case Op::cos:
    case Op::tan: {
      if (exact)
        if (auto p = as_polynomial(n->lhs)) return trig_level_divisor(n->op, *p, 0.0, radius);
      require_entire(n->lhs, radius, ctx);
      return hybrid(n, radius, ctx);
    }
    case Op::affine: {
      double inner = std::abs(n->scale) * radius + std::abs(n->offset);
      Divisor out;
      for (const auto& p : divisor(n->lhs, inner * (1.0 + 1e-9) + 1e-12, ctx)) {
        cplx z = (p.at - n->offset) / n->scale;
        if (std::abs(z) < radius) out.push_back({z, p.mult});
      }
      return out;
    }
  }
  return {};
}

void check_not_zero(const NodePtr& n) {
  for (cplx probe : {cplx{0.31, 0.17}, cplx{-0.73, 0.41}, cplx{0.12, -0.93}, cplx{1.7, 2.3}}) {
    LogPolar v = log_polar(n, probe);
    if (!v.zero) return;
  }
  throw Error(ErrorKind::identically_zero, "expression is identically zero");
}

Divisor full_divisor(const NodePtr& n, double radius, Ctx& ctx) {
  check_not_zero(n);
  if (ctx.opt.force_fallback) return hybrid(n, radius, ctx);
  return divisor(n, radius, ctx);
}

std::vector<ZeroPole> to_entries(const Divisor& d) {
  std::vector<ZeroPole> out;
  for (const auto& p : d) {
    // Components that are pure rounding residue are snapped to zero.
    double tiny = 1e-15 * std::max(1.0, std::abs(p.at));
    cplx at{std::abs(p.at.real()) < tiny ? 0.0 : p.at.real(),
            std::abs(p.at.imag()) < tiny ? 0.0 : p.at.imag()};
    out.push_back({at, std::abs(p.mult), p.mult > 0 ? PointKind::zero : PointKind::pole});
  }
  std::sort(out.begin(), out.end(), [](const ZeroPole& a, const ZeroPole& b) {
    double ma = std::abs(a.location), mb = std::abs(b.location);
    if (ma != mb) return ma < mb;
    return std::arg(a.location) < std::arg(b.location);
  });
  return out;
}

}  // namespace

ZeroPoleList enumerate_zeros_poles(const NodePtr& n, double r, const CatalogOptions& opt) {
  if (!(r > 0.0) || !std::isfinite(r))
    throw Error(ErrorKind::precondition, "radius must be positive and finite");
  Ctx ctx{opt};
  double guard = boundary_guard(r);
  double outer = r * (1.0 + 1e-6) + 10.0 * guard;
  Divisor d = full_divisor(n, outer, ctx);
  ZeroPoleList list;
  list.radius = r;
  list.used_fallback = ctx.used_fallback;
  Divisor kept;
  for (const auto& p : d) {
    double m = std::abs(p.at);
    if (std::abs(m - r) <= guard)
      throw Error(ErrorKind::boundary_collision, "zero or pole within guard distance of |z| = r");
    if (m < r) kept.push_back(p);
  }
  list.entries = to_entries(kept);
  return list;
}

ZeroPoleList enumerate_zeros_poles(const MeroExpr& e, double r, const CatalogOptions& opt) {
  return enumerate_zeros_poles(e.root(), r, opt);
}

std::vector<ZeroPole> pole_candidates(const NodePtr& n, double r) {
  Ctx ctx{};
  Divisor d = pole_candidates(n, r, ctx);
  for (auto& p : d) p.mult = -p.mult;
  return to_entries(d);
}

std::vector<ZeroPole> zeros_poles_near(const NodePtr& n, double r) {
  Ctx ctx{};
  return to_entries(full_divisor(n, r, ctx));
}

}  // namespace nev::expr
