#pragma once

#include <functional>
#include <vector>

#include "nev/expr/ast.hpp"
#include "nev/harness/exceptional.hpp"
#include "nev/nevanlinna/functionals.hpp"

namespace nev::shifts {

// (Delta_eta f - a eta) / (f' - a)
expr::MeroExpr shift_quotient(const expr::MeroExpr& f, cplx a, cplx eta);

// max over n_angles sampled theta of |quotient| - |eta| max_t |g'(z + t eta) / g'(z)|
// with g = f - a z, z = r e^{i theta}. Angles whose segment meets a zero or
// pole of g' are nudged and resampled.
double lagrange_bound_check(const expr::MeroExpr& f, cplx a, double r, cplx eta, int n_angles);

// m(r, (Delta_eta f - a eta) / (f' - a)).
double vanishing_shift_proximity(const expr::MeroExpr& f, cplx a, double r, cplx eta);

struct VanishingRow {
  double r;
  cplx eta;
  double m;
};

struct VanishingProbe {
  std::vector<VanishingRow> table;
  harness::Verdict verdict = harness::Verdict::pass;
};

// alpha(r) ceiling for |eta| in the second limit; default 1/log r.
using AlphaFn = std::function<double(double)>;
double default_alpha(double r);

// Each (r_k, eta_k) needs |eta_k| < alpha(r_k); |eta_k| strictly decreasing.
// PASS when the last m is below `threshold`.
VanishingProbe vanishing_limit_probe(const expr::MeroExpr& f, cplx a,
                                     const std::vector<std::pair<double, cplx>>& points,
                                     double threshold = 1e-3, const AlphaFn& alpha = default_alpha);
VanishingProbe vanishing_limit_probe(const expr::MeroExpr& f, cplx a, double r,
                                     const std::vector<cplx>& etas, double threshold = 1e-3,
                                     const AlphaFn& alpha = default_alpha);

// omega(r) = coef * r^beta with 0 < |coef| <= 1.
struct OmegaSpec {
  double coef = 1.0;
  double beta = 0.25;
  double at(double r) const;
};

struct BoundBreakdown {
  double lhs = 0.0;
  double term_T = 0.0;
  double term_Rzero = 0.0;
  double term_Rpole = 0.0;
  double term_log = 0.0;
  double ratio_lhs_over_T = 0.0;
  double T_fprime = 0.0;
  double omega = 0.0;
};

// Checks 0 < beta < min(1/2 - varsigma/2, 1 - 4 varsigma/3) and positivity of
// both r exponents before computing anything.
BoundBreakdown unbounded_shift_breakdown(const expr::MeroExpr& f, cplx a, const OmegaSpec& omega,
                                         double r, double epsilon, double varsigma);

// T(r + eps)^{-3 eps/(1 + 2 eps)} r^{-eps/(1 + eps)}; `T_eval` returns T(s, f).
double omega_ceiling(double r, double epsilon, const std::function<double(double)>& T_eval);

// m(r, (f(e^{i omega} z) - f(z)) / f'); 0 for omega = 0.
double angular_shift_proximity(const expr::MeroExpr& f, double r, double omega);

// v(r, f, theta): mean over tau of sup_{[tau, tau+theta]} log|f| - log|f(tau)|.
struct OscillationOptions {
  int base_samples = 4096;
  int max_singular_bases = 16;
};
double oscillation_v(const expr::MeroExpr& f, double r, double theta,
                     const OscillationOptions& opt = {});

// min{1, 1/log+(T/log r)}; domain error for r < e.
double lambda_r(double T_value, double r);

struct Op1Point {
  double r, T, lambda, theta, v;
  bool flagged;
};

struct Op1Result {
  std::vector<Op1Point> points;
  harness::ExceptionalReport report;
};

// Flags r where v(r, f, lambda(r)^20) > eps T(r, f).
Op1Result op1_probe(const expr::MeroExpr& f, double epsilon, const std::vector<double>& r_grid);

struct Ol1Result {
  double lhs = 0.0;
  double rhs_coeff_ratio = 0.0;  // lhs / ((log sigma)^2 T(sigma^3 r))
  double T_dilated = 0.0;
  double bound = 0.0;            // 508 (log sigma)^2 (T(sigma^3 r) + c0)
  bool holds = false;
};

Ol1Result ol1_check(const expr::MeroExpr& f, double r, double sigma, double c0 = 10.0);

}  // namespace nev::shifts
