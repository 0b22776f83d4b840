#pragma once

#include "nev/expr/ast.hpp"
#include "nev/expr/catalog.hpp"
#include "nev/nevanlinna/quadrature.hpp"

namespace nev::nevanlinna {

// m(r, f) = (1/2pi) * integral of log+ |f(r e^{it})|.
QuadratureResult proximity(const expr::MeroExpr& f, double r, const QuadratureOptions& opt = {});
QuadratureResult proximity(const expr::NodePtr& f, double r, const QuadratureOptions& opt = {});

enum class Target { poles, zeros };

struct CountResult {
  int n = 0;               // with multiplicity, |z| < r
  double N = 0.0;          // integrated counting function
  int n_distinct = 0;      // ignoring multiplicity
  double N_distinct = 0.0;
};

// N = sum m(x) log(r/|x|) over 0 < |x| < r, plus n(0) log r.
CountResult count_from_catalog(const expr::ZeroPoleList& list, expr::PointKind kind);
CountResult counting(const expr::MeroExpr& f, double r, Target target);

struct FunctionalSample {
  double r = 0.0;
  double m = 0.0;
  int n = 0;      // poles
  double N = 0.0; // poles
  double T = 0.0; // m + N
  int n_zeros = 0;
  double N_zeros = 0.0;
  QuadratureResult diagnostics;
};

FunctionalSample characteristic(const expr::MeroExpr& f, double r, const QuadratureOptions& opt = {});

struct AngularCountParams {
  double epsilon = 0.25;  // in (0, 1)
  cplx omega{1.0};        // nonzero
  double threshold() const;
};

// Points z0 of the requested kind, |z0| < r, counted with multiplicity when
// |sin(arg(z0/omega))| >= 1 - sqrt(epsilon). z0 = 0 is never counted.
int angular_counting(const expr::MeroExpr& f, double r, const AngularCountParams& p, Target target);
int angular_count_from_catalog(const expr::ZeroPoleList& list, expr::PointKind kind,
                               const AngularCountParams& p);
double pair_ratio(const expr::MeroExpr& f, double r, const AngularCountParams& p, Target target);

}  // namespace nev::nevanlinna
