#pragma once

#include "nev/expr/ast.hpp"

namespace nev::expr {

// Symbolic derivative. Simplification is limited to constant folding and
// x*1 / x+0 style elision; no trigonometric identities are applied.
MeroExpr differentiate(const MeroExpr& e);
NodePtr differentiate(const NodePtr& n);

// e(z + eta)
MeroExpr shift(const MeroExpr& e, cplx eta);
// e(exp(i*omega) * z)
MeroExpr angular_shift(const MeroExpr& e, double omega);

// Convenience combinators used to assemble the quotients that the probes
// integrate. All go through the simplifying builders.
MeroExpr operator+(const MeroExpr& a, const MeroExpr& b);
MeroExpr operator-(const MeroExpr& a, const MeroExpr& b);
MeroExpr operator*(const MeroExpr& a, const MeroExpr& b);
MeroExpr operator/(const MeroExpr& a, const MeroExpr& b);
MeroExpr constant(cplx c);
MeroExpr identity();
MeroExpr reciprocal(const MeroExpr& e);
MeroExpr minus_constant(const MeroExpr& e, cplx a);

// Forward difference e(z + eta) - e(z), applied `order` times.
MeroExpr difference(const MeroExpr& e, cplx eta, int order = 1);

}  // namespace nev::expr
