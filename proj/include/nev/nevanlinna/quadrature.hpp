#pragma once

#include <functional>
#include <utility>
#include <vector>

#include "nev/expr/ast.hpp"
#include "nev/expr/catalog.hpp"

namespace nev::nevanlinna {

struct SingularArc {
  double center = 0.0;      // angle
  double half_width = 0.0;  // radians
};

struct QuadratureResult {
  double value = 0.0;
  double abs_err_est = 0.0;
  long n_evals = 0;
  std::vector<SingularArc> singular_arcs;
};

struct QuadratureOptions {
  double abs_tol = 1e-8;
  double rel_tol = 1e-12;
  long eval_cap = 1L << 20;
};

// Zeros/poles within this relative distance of the circle get a singular arc.
inline constexpr double kSingularBand = 1e-6;
inline constexpr double kArcHalfWidth = 1e-7;

enum class LogKind {
  log_plus,  // log+ |f|
  log_abs,   // log |f|
};

// (1/2pi) * integral over [0, 2pi] of weight(theta) * L(f(r e^{i theta})),
// with L selected by `kind`. `singular` lists zeros/poles of f near the
// circle (a superset is fine); `extra_breaks` are angles where the weight is
// sharp. Zeros are only singular for log_abs.
QuadratureResult circle_log_integral(const expr::NodePtr& f, double r, LogKind kind,
                                     const std::vector<expr::ZeroPole>& singular,
                                     const std::function<double(double)>& weight = nullptr,
                                     const std::vector<double>& extra_breaks = {},
                                     const QuadratureOptions& opt = {});

// Adaptive Gauss-Kronrod (7/15) on [a, b] for a smooth scalar integrand.
QuadratureResult integrate(const std::function<double(double)>& g, double a, double b,
                           const QuadratureOptions& opt = {});

// Gauss-Legendre nodes and weights on [-1, 1].
std::vector<std::pair<double, double>> gauss_legendre(int n);

}  // namespace nev::nevanlinna
