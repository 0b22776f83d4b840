#include "nev/expr/ast.hpp"

#include <algorithm>
#include <cmath>

namespace nev {

const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::syntax: return "syntax";
    case ErrorKind::non_integer_exponent: return "non_integer_exponent";
    case ErrorKind::unknown_identifier: return "unknown_identifier";
    case ErrorKind::domain: return "domain";
    case ErrorKind::coincidence: return "coincidence";
    case ErrorKind::budget_exceeded: return "budget_exceeded";
    case ErrorKind::boundary_collision: return "boundary_collision";
    case ErrorKind::not_catalogable: return "not_catalogable";
    case ErrorKind::identically_zero: return "identically_zero";
    case ErrorKind::non_finite: return "non_finite";
    case ErrorKind::precondition: return "precondition";
    case ErrorKind::zero_denominator: return "zero_denominator";
    case ErrorKind::extrapolation: return "extrapolation";
    case ErrorKind::insufficient_range: return "insufficient_range";
    case ErrorKind::degenerate: return "degenerate";
    case ErrorKind::periodic: return "periodic";
    case ErrorKind::config: return "config";
    case ErrorKind::io: return "io";
  }
  return "unknown";
}

}  // namespace nev

namespace nev::expr {

namespace {

bool finite(cplx v) { return std::isfinite(v.real()) && std::isfinite(v.imag()); }

NodePtr make_binary(Op op, NodePtr a, NodePtr b) {
  auto n = std::make_shared<Node>();
  n->op = op;
  n->lhs = std::move(a);
  n->rhs = std::move(b);
  return n;
}

NodePtr make_unary(Op op, NodePtr a) {
  auto n = std::make_shared<Node>();
  n->op = op;
  n->lhs = std::move(a);
  return n;
}

cplx ipow(cplx base, int k) {
  cplx result{1.0};
  cplx b = base;
  unsigned e = static_cast<unsigned>(k < 0 ? -static_cast<long>(k) : k);
  while (e) {
    if (e & 1u) result *= b;
    b *= b;
    e >>= 1;
  }
  return k < 0 ? cplx{1.0} / result : result;
}

std::optional<cplx> fold_fn(Op fn, cplx x) {
  cplx v;
  switch (fn) {
    case Op::exp: v = std::exp(x); break;
    case Op::sin: v = std::sin(x); break;
    case Op::cos: v = std::cos(x); break;
    case Op::tan: {
      cplx c = std::cos(x);
      if (std::abs(c) < 1e-9) return std::nullopt;
      v = std::tan(x);
      break;
    }
    default: return std::nullopt;
  }
  if (!finite(v)) return std::nullopt;
  return v;
}

}  // namespace

NodePtr make_constant(cplx value) {
  auto n = std::make_shared<Node>();
  n->op = Op::constant;
  n->value = value;
  return n;
}

NodePtr make_var() {
  auto n = std::make_shared<Node>();
  n->op = Op::var;
  return n;
}

bool is_constant(const NodePtr& n) { return n && n->op == Op::constant; }

bool is_constant_value(const NodePtr& n, cplx v) {
  return is_constant(n) && n->value == v;
}

bool is_z_free(const NodePtr& n) {
  if (!n) return true;
  if (n->op == Op::var) return false;
  return is_z_free(n->lhs) && is_z_free(n->rhs);
}

namespace fold {

NodePtr add(NodePtr a, NodePtr b) {
  if (is_constant(a) && is_constant(b)) return make_constant(a->value + b->value);
  return make_binary(Op::add, std::move(a), std::move(b));
}

NodePtr sub(NodePtr a, NodePtr b) {
  if (is_constant(a) && is_constant(b)) return make_constant(a->value - b->value);
  return make_binary(Op::sub, std::move(a), std::move(b));
}

NodePtr mul(NodePtr a, NodePtr b) {
  if (is_constant(a) && is_constant(b)) return make_constant(a->value * b->value);
  return make_binary(Op::mul, std::move(a), std::move(b));
}

NodePtr div(NodePtr a, NodePtr b) {
  if (is_constant(a) && is_constant(b) && b->value != cplx{}) {
    cplx v = a->value / b->value;
    if (finite(v)) return make_constant(v);
  }
  return make_binary(Op::div, std::move(a), std::move(b));
}

NodePtr neg(NodePtr a) {
  if (is_constant(a)) return make_constant(-a->value);
  return make_unary(Op::neg, std::move(a));
}

NodePtr pow(NodePtr a, int k) {
  if (is_constant(a) && (k >= 0 || a->value != cplx{})) {
    cplx v = ipow(a->value, k);
    if (finite(v)) return make_constant(v);
  }
  auto n = std::make_shared<Node>();
  n->op = Op::pow;
  n->exponent = k;
  n->lhs = std::move(a);
  return n;
}

NodePtr apply(Op fn, NodePtr a) {
  if (is_constant(a)) {
    if (auto v = fold_fn(fn, a->value)) return make_constant(*v);
  }
  return make_unary(fn, std::move(a));
}

}  // namespace fold

namespace simp {

NodePtr add(NodePtr a, NodePtr b) {
  if (is_constant_value(a, 0.0)) return b;
  if (is_constant_value(b, 0.0)) return a;
  return fold::add(std::move(a), std::move(b));
}

NodePtr sub(NodePtr a, NodePtr b) {
  if (is_constant_value(b, 0.0)) return a;
  if (is_constant_value(a, 0.0)) return neg(std::move(b));
  return fold::sub(std::move(a), std::move(b));
}

NodePtr mul(NodePtr a, NodePtr b) {
  if (is_constant_value(a, 0.0) || is_constant_value(b, 0.0)) return make_constant(0.0);
  if (is_constant_value(a, 1.0)) return b;
  if (is_constant_value(b, 1.0)) return a;
  return fold::mul(std::move(a), std::move(b));
}

NodePtr div(NodePtr a, NodePtr b) {
  if (is_constant_value(b, 1.0)) return a;
  if (is_constant_value(a, 0.0) && !is_constant_value(b, 0.0)) return make_constant(0.0);
  return fold::div(std::move(a), std::move(b));
}

NodePtr neg(NodePtr a) {
  if (a && a->op == Op::neg) return a->lhs;
  return fold::neg(std::move(a));
}

NodePtr pow(NodePtr a, int k) {
  if (k == 0) return make_constant(1.0);
  if (k == 1) return a;
  return fold::pow(std::move(a), k);
}

NodePtr apply(Op fn, NodePtr a) { return fold::apply(fn, std::move(a)); }

}  // namespace simp

NodePtr make_affine(cplx scale, cplx offset, NodePtr child) {
  if (scale == cplx{1.0} && offset == cplx{}) return child;
  if (is_z_free(child)) return child;
  if (child->op == Op::var) {
    // scale*z + offset written out keeps the catalog on the rational path.
    return simp::add(simp::mul(make_constant(scale), make_var()), make_constant(offset));
  }
  if (child->op == Op::affine) {
    // g(s2*(s1*z + o1) + o2) = g(s2*s1*z + (s2*o1 + o2))
    return make_affine(child->scale * scale, child->scale * offset + child->offset,
                       child->lhs);
  }
  auto n = std::make_shared<Node>();
  n->op = Op::affine;
  n->scale = scale;
  n->offset = offset;
  n->lhs = std::move(child);
  return n;
}

bool structurally_equal(const NodePtr& a, const NodePtr& b) {
  if (a == b) return true;
  if (!a || !b) return false;
  if (a->op != b->op) return false;
  switch (a->op) {
    case Op::constant: return a->value == b->value;
    case Op::var: return true;
    case Op::pow:
      return a->exponent == b->exponent && structurally_equal(a->lhs, b->lhs);
    case Op::affine:
      return a->scale == b->scale && a->offset == b->offset &&
             structurally_equal(a->lhs, b->lhs);
    default:
      return structurally_equal(a->lhs, b->lhs) && structurally_equal(a->rhs, b->rhs);
  }
}

int depth(const NodePtr& n) {
  if (!n) return 0;
  return 1 + std::max(depth(n->lhs), depth(n->rhs));
}

std::size_t node_count(const NodePtr& n) {
  if (!n) return 0;
  return 1 + node_count(n->lhs) + node_count(n->rhs);
}

}  // namespace nev::expr
