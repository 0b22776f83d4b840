#pragma once

#include <string>
#include <string_view>

#include "nev/expr/ast.hpp"

namespace nev::expr {

// Grammar (whitespace between tokens is ignored):
//
//   expr    := term (('+' | '-') term)*
//   term    := unary (('*' | '/') unary)*
//   unary   := ('-' | '+') unary | power
//   power   := primary ['^' integer]
//   integer := ['-' | '+'] digits | '(' ['-' | '+'] digits ')'
//   primary := number | 'z' | 'i' | 'pi' | 'e'
//            | ('exp' | 'sin' | 'cos' | 'tan') '(' expr ')' | '(' expr ')'
//
// Identifiers are case sensitive and lowercase. Constant subexpressions are
// folded while parsing. Throws Error with the byte offset on failure.
MeroExpr parse(std::string_view text);

// Canonical text: binary '+'/'-' spaced, '*', '/', '^' unspaced, numbers in
// shortest round-trip form. Affine composition nodes are written out as a
// substituted argument "(a*z + b)".
std::string render(const MeroExpr& e);
std::string render(const NodePtr& n);

// Shortest decimal text that reads back to the same double.
std::string format_real(double x);

}  // namespace nev::expr
