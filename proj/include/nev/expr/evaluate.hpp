#pragma once

#include <limits>
#include <optional>

#include "nev/expr/ast.hpp"

namespace nev::expr {

// Divisors below this magnitude are treated as poles.
inline constexpr double kPoleThreshold = 1e-300;
// tan is flagged as a pole within this distance of pi/2 + k*pi.
inline constexpr double kPoleGuardRadius = 1e-9;

struct EvalOutcome {
  std::optional<cplx> value;   // set unless the point is a pole
  bool pole = false;
  int pole_multiplicity = 0;   // estimate, meaningful only when pole is set
  // Smallest divisor magnitude / tan-pole distance met during evaluation;
  // infinity when none was tracked, 0 on overflow.
  double condition = std::numeric_limits<double>::infinity();
};

EvalOutcome evaluate(const MeroExpr& e, cplx z);

// log|e(z)| computed in a scaled representation, so it stays finite where
// |e(z)| itself over- or underflows. Returns +inf at poles and -inf at exact
// zeros.
double log_abs(const MeroExpr& e, cplx z);
double log_abs(const NodePtr& n, cplx z);

// log|e(z)| and arg e(z) from the scaled representation. `pole` is set at
// poles and on overflow; `zero` at exact zeros (arg is then meaningless).
struct LogPolar {
  double log_abs = 0.0;
  double arg = 0.0;
  bool pole = false;
  bool zero = false;
};
LogPolar log_polar(const NodePtr& n, cplx z);

// Plain value; nullopt at a pole or on overflow.
std::optional<cplx> value_at(const NodePtr& n, cplx z);
inline std::optional<cplx> value_at(const MeroExpr& e, cplx z) { return value_at(e.root(), z); }

}  // namespace nev::expr
