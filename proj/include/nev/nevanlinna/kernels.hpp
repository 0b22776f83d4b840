#pragma once

#include "nev/expr/ast.hpp"
#include "nev/nevanlinna/quadrature.hpp"

namespace nev::nevanlinna {

// P(z, theta) = (1 - |z|^2) / |e^{i theta} - z|^2, |z| < 1.
double poisson_kernel(cplx z, double theta);

// G(z, a) = log |(1 - conj(a) z) / (z - a)| on the unit disk.
double green(cplx z, cplx a);

// Right-hand side of the Poisson-Jensen formula on |zeta| = s at z; compare
// with log|f(z)|. abs_err_est is the quadrature estimate.
QuadratureResult poisson_jensen_reconstruct(const expr::MeroExpr& f, double s, cplx z,
                                            const QuadratureOptions& opt = {});

}  // namespace nev::nevanlinna
