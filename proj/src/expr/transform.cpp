#include "nev/expr/transform.hpp"

#include <cmath>

#include "nev/expr/parse.hpp"

namespace nev::expr {

NodePtr differentiate(const NodePtr& n) {
  switch (n->op) {
    case Op::constant: return make_constant(0.0);
    case Op::var: return make_constant(1.0);
    case Op::add: return simp::add(differentiate(n->lhs), differentiate(n->rhs));
    case Op::sub: return simp::sub(differentiate(n->lhs), differentiate(n->rhs));
    case Op::neg: return simp::neg(differentiate(n->lhs));
    case Op::mul:
      return simp::add(simp::mul(differentiate(n->lhs), n->rhs),
                       simp::mul(n->lhs, differentiate(n->rhs)));
    case Op::div: {
      NodePtr num = simp::sub(simp::mul(differentiate(n->lhs), n->rhs),
                              simp::mul(n->lhs, differentiate(n->rhs)));
      return simp::div(num, simp::pow(n->rhs, 2));
    }
    case Op::pow: {
      int k = n->exponent;
      NodePtr outer = simp::mul(make_constant(static_cast<double>(k)), simp::pow(n->lhs, k - 1));
      return simp::mul(outer, differentiate(n->lhs));
    }
    case Op::exp: return simp::mul(n, differentiate(n->lhs));
    case Op::sin: return simp::mul(simp::apply(Op::cos, n->lhs), differentiate(n->lhs));
    case Op::cos:
      return simp::mul(simp::neg(simp::apply(Op::sin, n->lhs)), differentiate(n->lhs));
    case Op::tan:
      return simp::div(differentiate(n->lhs), simp::pow(simp::apply(Op::cos, n->lhs), 2));
    case Op::affine:
      return simp::mul(make_constant(n->scale),
                       make_affine(n->scale, n->offset, differentiate(n->lhs)));
  }
  return make_constant(0.0);
}

MeroExpr differentiate(const MeroExpr& e) {
  NodePtr d = differentiate(e.root());
  return MeroExpr(d, render(d));
}

MeroExpr shift(const MeroExpr& e, cplx eta) {
  NodePtr s = make_affine(1.0, eta, e.root());
  return MeroExpr(s, render(s));
}

MeroExpr angular_shift(const MeroExpr& e, double omega) {
  if (omega == 0.0) return e;
  NodePtr s = make_affine(std::polar(1.0, omega), 0.0, e.root());
  return MeroExpr(s, render(s));
}

namespace {
MeroExpr wrap(NodePtr n) {
  std::string text = render(n);
  return MeroExpr(std::move(n), std::move(text));
}
}  // namespace

MeroExpr operator+(const MeroExpr& a, const MeroExpr& b) { return wrap(simp::add(a.root(), b.root())); }
MeroExpr operator-(const MeroExpr& a, const MeroExpr& b) { return wrap(simp::sub(a.root(), b.root())); }
MeroExpr operator*(const MeroExpr& a, const MeroExpr& b) { return wrap(simp::mul(a.root(), b.root())); }
MeroExpr operator/(const MeroExpr& a, const MeroExpr& b) { return wrap(simp::div(a.root(), b.root())); }
MeroExpr constant(cplx c) { return wrap(make_constant(c)); }
MeroExpr identity() { return wrap(make_var()); }
MeroExpr reciprocal(const MeroExpr& e) { return constant(1.0) / e; }
MeroExpr minus_constant(const MeroExpr& e, cplx a) { return e - constant(a); }

MeroExpr difference(const MeroExpr& e, cplx eta, int order) {
  MeroExpr out = e;
  for (int k = 0; k < order; ++k) out = shift(out, eta) - out;
  return out;
}

}  // namespace nev::expr
