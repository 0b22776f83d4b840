#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "nev/expr/ast.hpp"
#include "nev/harness/exceptional.hpp"
#include "nev/shifts/shifts.hpp"

namespace nev::consequences {

// nullopt stands for the value infinity.
using Value = std::optional<cplx>;

// Linear interpolation between order statistics, q in [0, 1].
double percentile(std::vector<double> values, double q);

struct DeficiencyEstimate {
  Value a;
  double delta = 0.0;
  double theta_bar = 0.0;
  double r_min = 0.0, r_max = 0.0;
  const char* method = "trimmed-liminf";
  std::vector<double> radii;          // top decade radii actually used
  std::vector<double> m_over_T;       // m(r, 1/(f-a)) / T(r, f)
  std::vector<double> nbar_over_T;    // Nbar(r, 1/(f-a)) / T(r, f)
};

// delta = 10th percentile of m(r,1/(f-a))/T(r,f) over the top decade;
// theta_bar = 1 - 90th percentile of Nbar/T. Grid must span >= 2 decades.
DeficiencyEstimate deficiency(const expr::MeroExpr& f, Value a, const std::vector<double>& r_grid);

// Same with the function and target allowed to vary with r (unbounded
// shifts). `at(r)` returns (f_r, a_r).
DeficiencyEstimate deficiency_varying(
    const std::function<std::pair<expr::MeroExpr, Value>(double)>& at,
    const std::vector<double>& r_grid);

struct PairRecord {
  cplx z0;
  cplx c;
  int equal_terms = 1;
  double residual = 0.0;
};

inline constexpr int kEqualTermsCap = 10;

// Throws ErrorKind::periodic when max |f(z+c) - f(z)| <= 1e-6 over 50
// probe points.
void check_not_periodic(const expr::MeroExpr& f, cplx c);

// c-separated a-pairs with |z0| <= r, sorted by modulus of z0.
std::vector<PairRecord> pair_scan(const expr::MeroExpr& f, Value a, cplx c, double r);

// N_c(r) from pair records: sum w log(r/|z0|) plus n_c(0) log r.
double integrated_pair_count(const std::vector<PairRecord>& pairs, double r);

struct PairIndex {
  double index = 0.0;
  std::vector<double> radii;
  std::vector<double> ratios;  // N_c / T
};

PairIndex pair_index(const expr::MeroExpr& f, Value a, cplx c, const std::vector<double>& r_grid);
// c depending on r (omega-separated pairs).
PairIndex pair_index_varying(const expr::MeroExpr& f, Value a,
                             const std::function<cplx(double)>& c_of_r,
                             const std::vector<double>& r_grid);

struct PropResult {
  double lhs = 0.0;
  double rhs = 0.0;
  double margin = 0.0;
  harness::Verdict verdict = harness::Verdict::pass;
  double limsup_N_over_T = 0.0;  // prop51/52 only
};

inline constexpr double kVerdictSlack = 0.05;

// alpha_1(r) = min{r, (log r)^{-1/2}, h/2, 1/sum 1/|b|} from the pole catalog.
double alpha1(const expr::MeroExpr& f, double r);

PropResult prop51_check(const expr::MeroExpr& f, cplx a, cplx eta, const std::vector<double>& r_grid);
PropResult prop52_check(const expr::MeroExpr& f, cplx a, const shifts::OmegaSpec& omega,
                        const std::vector<double>& r_grid);
PropResult prop53_check(const expr::MeroExpr& f, cplx eta, const std::vector<cplx>& a_list,
                        const std::vector<double>& r_grid);
PropResult prop54_check(const expr::MeroExpr& f, const shifts::OmegaSpec& omega,
                        const std::vector<cplx>& a_list, const std::vector<double>& r_grid);

struct LinearTarget {
  cplx p;  // a_j(z) = p z + q; only a_j' = p enters
  cplx q;
};

struct SmtRow {
  double r, lhs, rhs, margin;
};

struct SmtResult {
  std::vector<SmtRow> rows;
  harness::ExceptionalReport report;
  harness::Verdict verdict = harness::Verdict::pass;
};

SmtResult smt_analogue_check(const expr::MeroExpr& F, const std::vector<LinearTarget>& a_list,
                             cplx eta, const std::vector<double>& r_grid, double s0 = 0.1,
                             double s1 = 10.0);

}  // namespace nev::consequences
