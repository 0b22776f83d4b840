#include "nev/expr/evaluate.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace nev::expr {

namespace {

constexpr double kLn2 = std::numbers::ln2;
// log2(kPoleThreshold)
const double kLog2PoleThreshold = std::log2(kPoleThreshold);

// m * 2^e with max(|re m|, |im m|) in [0.5, 1), or m == 0.
struct Scaled {
  cplx m{};
  double e = 0.0;

  static Scaled from(cplx c, double e = 0.0) {
    Scaled s;
    double a = std::max(std::abs(c.real()), std::abs(c.imag()));
    if (a == 0.0) return s;
    int k = 0;
    std::frexp(a, &k);
    s.m = cplx{std::ldexp(c.real(), -k), std::ldexp(c.imag(), -k)};
    s.e = e + k;
    return s;
  }

  bool zero() const { return m == cplx{}; }

  double log2_abs() const {
    if (zero()) return -std::numeric_limits<double>::infinity();
    return std::log2(std::abs(m)) + e;
  }

  double log_abs() const {
    if (zero()) return -std::numeric_limits<double>::infinity();
    return std::log(std::abs(m)) + e * kLn2;
  }

  cplx to_cplx() const {
    if (zero()) return {};
    if (e > 2000) {
      return {std::copysign(HUGE_VAL, m.real()), std::copysign(HUGE_VAL, m.imag())};
    }
    if (e < -2000) return {};
    int k = static_cast<int>(e);
    return {std::ldexp(m.real(), k), std::ldexp(m.imag(), k)};
  }
};

struct Value {
  Scaled v;
  bool pole = false;
};

struct Track {
  double condition = std::numeric_limits<double>::infinity();
  bool overflow = false;
};

Value pole_value() {
  Value p;
  p.pole = true;
  return p;
}

Value mul(const Value& a, const Value& b) {
  if (a.pole || b.pole) return pole_value();
  return {Scaled::from(a.v.m * b.v.m, a.v.e + b.v.e)};
}

Value add(const Value& a, const Value& b) {
  if (a.pole || b.pole) return pole_value();
  if (a.v.zero()) return b;
  if (b.v.zero()) return a;
  const Scaled& hi = a.v.e >= b.v.e ? a.v : b.v;
  const Scaled& lo = a.v.e >= b.v.e ? b.v : a.v;
  double d = lo.e - hi.e;
  if (d < -120) return {hi};
  int k = static_cast<int>(d);
  cplx sum = hi.m + cplx{std::ldexp(lo.m.real(), k), std::ldexp(lo.m.imag(), k)};
  return {Scaled::from(sum, hi.e)};
}

Value negate(const Value& a) {
  if (a.pole) return a;
  Value r = a;
  r.v.m = -r.v.m;
  return r;
}

Value divide(const Value& a, const Value& b, Track& t) {
  if (a.pole) return pole_value();
  if (b.pole) return {};
  double l2 = b.v.log2_abs();
  t.condition = std::min(t.condition, std::exp2(std::max(l2, -1074.0)));
  if (b.v.zero() || l2 < kLog2PoleThreshold) return pole_value();
  return {Scaled::from(a.v.m / b.v.m, a.v.e - b.v.e)};
}

Value power(const Value& base, int k, Track& t) {
  if (k == 0) return {Scaled::from(1.0)};
  if (base.pole) return k > 0 ? pole_value() : Value{};
  Value result{Scaled::from(1.0)};
  Value b = base;
  unsigned e = static_cast<unsigned>(k < 0 ? -static_cast<long>(k) : k);
  while (e) {
    if (e & 1u) result = mul(result, b);
    e >>= 1;
    if (e) b = mul(b, b);
  }
  if (k < 0) return divide(Value{Scaled::from(1.0)}, result, t);
  return result;
}

Value exp_of(cplx u, Track& t) {
  if (!std::isfinite(u.real()) || !std::isfinite(u.imag())) {
    t.overflow = true;
    return pole_value();
  }
  double q = u.real() / kLn2;
  double k = std::floor(q);
  double mag = std::exp2(q - k);
  return {Scaled::from(std::polar(mag, u.imag()), k)};
}

// Exact-arithmetic inputs to the trig functions are plain complex numbers;
// a scaled argument that does not fit a double is an overflow.
bool to_argument(const Value& a, cplx& u, Track& t) {
  u = a.v.to_cplx();
  if (!std::isfinite(u.real()) || !std::isfinite(u.imag())) {
    t.overflow = true;
    return false;
  }
  return true;
}

constexpr cplx kI{0.0, 1.0};

Value sin_of(cplx u, Track& t) {
  if (std::abs(u.imag()) < 350.0) return {Scaled::from(std::sin(u))};
  // (e^{iu} - e^{-iu}) / (2i); one term dominates completely here.
  Value d = add(exp_of(kI * u, t), negate(exp_of(-kI * u, t)));
  return mul(d, {Scaled::from(cplx{0.0, -0.5})});
}

Value cos_of(cplx u, Track& t) {
  if (std::abs(u.imag()) < 350.0) return {Scaled::from(std::cos(u))};
  Value s = add(exp_of(kI * u, t), exp_of(-kI * u, t));
  return mul(s, {Scaled::from(0.5)});
}

Value tan_of(cplx u, Track& t) {
  cplx w = u - std::numbers::pi / 2;
  double k = std::round(w.real() / std::numbers::pi);
  double dist = std::abs(w - k * std::numbers::pi);
  t.condition = std::min(t.condition, dist);
  if (dist < kPoleGuardRadius) return pole_value();
  double y = u.imag();
  if (std::abs(y) > 20.0) {
    // tan(x+iy) = (sin 2x + i sinh 2y) / (cos 2x + cosh 2y)
    double x2 = 2.0 * u.real();
    double decay = std::exp(-2.0 * std::abs(y));  // ~ 1/cosh(2y) / 2
    double re = 2.0 * std::sin(x2) * decay;
    double im = std::copysign(1.0 - 2.0 * std::cos(x2) * decay, y);
    return {Scaled::from(cplx{re, im})};
  }
  return {Scaled::from(std::tan(u))};
}

Value eval_node(const Node& n, cplx z, Track& t) {
  switch (n.op) {
    case Op::constant: return {Scaled::from(n.value)};
    case Op::var: return {Scaled::from(z)};
    case Op::add: return add(eval_node(*n.lhs, z, t), eval_node(*n.rhs, z, t));
    case Op::sub: return add(eval_node(*n.lhs, z, t), negate(eval_node(*n.rhs, z, t)));
    case Op::mul: return mul(eval_node(*n.lhs, z, t), eval_node(*n.rhs, z, t));
    case Op::div: {
      Value a = eval_node(*n.lhs, z, t);
      Value b = eval_node(*n.rhs, z, t);
      return divide(a, b, t);
    }
    case Op::neg: return negate(eval_node(*n.lhs, z, t));
    case Op::pow: return power(eval_node(*n.lhs, z, t), n.exponent, t);
    case Op::exp:
    case Op::sin:
    case Op::cos:
    case Op::tan: {
      Value a = eval_node(*n.lhs, z, t);
      if (a.pole) return a;
      cplx u;
      if (!to_argument(a, u, t)) return pole_value();
      if (n.op == Op::exp) return exp_of(u, t);
      if (n.op == Op::sin) return sin_of(u, t);
      if (n.op == Op::cos) return cos_of(u, t);
      return tan_of(u, t);
    }
    case Op::affine: return eval_node(*n.lhs, n.scale * z + n.offset, t);
  }
  return pole_value();
}

int estimate_pole_order(const NodePtr& n, cplx z) {
  // Log-slope of |f| between two small radii, averaged over three directions.
  double slope = 0.0;
  int used = 0;
  for (double phase : {0.3, 2.4, 4.5}) {
    cplx dir = std::polar(1.0, phase);
    double l1 = log_abs(n, z + 1e-4 * dir);
    double l2 = log_abs(n, z + 1e-5 * dir);
    if (!std::isfinite(l1) || !std::isfinite(l2)) continue;
    slope += (l2 - l1) / std::log(10.0);
    ++used;
  }
  if (used == 0) return 1;
  return std::max(1, static_cast<int>(std::lround(slope / used)));
}

}  // namespace

EvalOutcome evaluate(const MeroExpr& e, cplx z) {
  Track t;
  Value v = eval_node(e.node(), z, t);
  EvalOutcome out;
  out.condition = t.condition;
  if (t.overflow) {
    out.pole = true;
    out.pole_multiplicity = 0;
    out.condition = 0.0;
    return out;
  }
  if (v.pole) {
    out.pole = true;
    out.pole_multiplicity = estimate_pole_order(e.root(), z);
    return out;
  }
  cplx c = v.v.to_cplx();
  if (!std::isfinite(c.real()) || !std::isfinite(c.imag())) {
    out.pole = true;
    out.condition = 0.0;
    return out;
  }
  out.value = c;
  return out;
}

double log_abs(const NodePtr& n, cplx z) {
  Track t;
  Value v = eval_node(*n, z, t);
  if (v.pole || t.overflow) return std::numeric_limits<double>::infinity();
  return v.v.log_abs();
}

double log_abs(const MeroExpr& e, cplx z) { return log_abs(e.root(), z); }

LogPolar log_polar(const NodePtr& n, cplx z) {
  Track t;
  Value v = eval_node(*n, z, t);
  LogPolar out;
  if (v.pole || t.overflow) {
    out.pole = true;
    out.log_abs = std::numeric_limits<double>::infinity();
    return out;
  }
  if (v.v.zero()) {
    out.zero = true;
    out.log_abs = -std::numeric_limits<double>::infinity();
    return out;
  }
  out.log_abs = v.v.log_abs();
  out.arg = std::arg(v.v.m);
  return out;
}

std::optional<cplx> value_at(const NodePtr& n, cplx z) {
  Track t;
  Value v = eval_node(*n, z, t);
  if (v.pole || t.overflow) return std::nullopt;
  cplx c = v.v.to_cplx();
  if (!std::isfinite(c.real()) || !std::isfinite(c.imag())) return std::nullopt;
  return c;
}

}  // namespace nev::expr
