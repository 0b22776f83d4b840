#include "nev/harness/run.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <random>

#include "nev/consequences/consequences.hpp"
#include "nev/expr/evaluate.hpp"
#include "nev/expr/parse.hpp"
#include "nev/expr/transform.hpp"
#include "nev/harness/pool.hpp"
#include "nev/nevanlinna/functionals.hpp"
#include "nev/nevanlinna/grid.hpp"
#include "nev/nevanlinna/kernels.hpp"
#include "nev/shifts/shifts.hpp"

namespace nev::harness {

namespace {

using expr::MeroExpr;
using json = nlohmann::ordered_json;
using Series = std::vector<std::pair<double, double>>;

double mode_threshold(const SweepConfig& cfg, double fallback) {
  return cfg.threshold > 0.0 ? cfg.threshold : fallback;
}

json report_json(const ExceptionalReport& rep) {
  json j;
  j["flagged"] = json::array();
  for (const auto& [lo, hi] : rep.flagged) j["flagged"].push_back({lo, hi});
  j["log_measure"] = rep.log_measure;
  j["final_density"] = rep.log_density_series.empty() ? 0.0 : rep.log_density_series.back().second;
  j["density_slope"] = rep.density_slope;
  j["density_slope_stderr"] = rep.density_slope_stderr;
  j["verdict"] = to_string(rep.verdict);
  return j;
}

Series column_series(const Table& t, std::size_t x, std::size_t y) {
  Series s;
  for (const auto& row : t.rows) s.push_back({row[x], row[y]});
  return s;
}

ModeResult functionals_mode(const SweepConfig& cfg, const MeroExpr& f) {
  nevanlinna::QuadratureOptions opt;
  opt.abs_tol = cfg.abs_tol;
  opt.rel_tol = cfg.rel_tol;
  auto grid = cfg.grid();
  auto rows = parallel_map<std::vector<double>>(grid.size(), cfg.threads, [&](std::size_t i) {
    double r = nevanlinna::avoid_singular_radius(f.root(), grid[i]);
    auto s = nevanlinna::characteristic(f, r, opt);
    return std::vector<double>{r,         s.m, double(s.n), s.N, double(s.n_zeros), s.N_zeros,
                               s.T,       s.diagnostics.abs_err_est};
  });
  ModeResult out;
  out.table.header = {"r", "m", "n_poles", "N_poles", "n_zeros", "N_zeros", "T", "abs_err_est"};
  out.table.rows = std::move(rows);
  out.plot.title = "Nevanlinna functionals of " + f.source_text();
  out.plot.y_label = "value";
  out.plot.series = {{"T(r,f)", column_series(out.table, 0, 6)},
                     {"m(r,f)", column_series(out.table, 0, 1)},
                     {"N(r,f)", column_series(out.table, 0, 3)}};
  if (cfg.pj_points > 0) {
    // Poisson-Jensen spot checks inside the largest grid disk.
    double s = out.table.rows.back()[0];
    std::mt19937_64 rng(cfg.seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    json checks = json::array();
    double worst = 0.0;
    for (int k = 0; k < cfg.pj_points; ++k) {
      cplx z = std::polar(0.9 * s * std::sqrt(unit(rng)), 2.0 * M_PI * unit(rng));
      double direct = expr::log_abs(f, z);
      if (!std::isfinite(direct)) continue;
      auto q = nevanlinna::poisson_jensen_reconstruct(f, s, z, opt);
      double err = std::abs(q.value - direct);
      worst = std::max(worst, err / std::max(q.abs_err_est, 1e-300));
      checks.push_back({{"re", z.real()}, {"im", z.imag()}, {"error", err}, {"abs_err_est", q.abs_err_est}});
    }
    out.details["poisson_jensen"] = checks;
    out.details["poisson_jensen_worst_ratio"] = worst;
  }
  return out;
}

ModeResult t11_mode(const SweepConfig& cfg, const MeroExpr& f) {
  auto grid = cfg.grid();
  double thr = mode_threshold(cfg, 1e-3);
  MeroExpr g = expr::minus_constant(expr::differentiate(f), cfg.a);
  auto probes = parallel_map<shifts::VanishingProbe>(grid.size(), cfg.threads, [&](std::size_t i) {
    double r = nevanlinna::avoid_singular_radius(f.root(), grid[i]);
    r = nevanlinna::avoid_singular_radius(g.root(), r);
    return shifts::vanishing_limit_probe(f, cfg.a, r, cfg.etas, thr);
  });
  ModeResult out;
  out.table.header = {"r", "eta_re", "eta_im", "m"};
  Series last;
  std::size_t failed = 0;
  for (const auto& p : probes) {
    for (const auto& row : p.table) out.table.rows.push_back({row.r, row.eta.real(), row.eta.imag(), row.m});
    last.push_back({p.table.back().r, p.table.back().m});
    if (p.verdict != Verdict::pass) ++failed;
  }
  out.verdict = failed ? Verdict::fail : Verdict::pass;
  out.details["threshold"] = thr;
  out.details["failed_radii"] = failed;
  out.plot.title = "vanishing shift proximity, smallest eta";
  out.plot.y_label = "m(r, quotient)";
  out.plot.series = {{"m at smallest |eta|", last}};
  return out;
}

ModeResult t12_mode(const SweepConfig& cfg, const MeroExpr& f) {
  auto grid = cfg.grid();
  shifts::OmegaSpec omega{cfg.omega_coef, cfg.beta};
  MeroExpr fp = expr::differentiate(f);
  auto rows = parallel_map<std::vector<double>>(grid.size(), cfg.threads, [&](std::size_t i) {
    double r = nevanlinna::avoid_singular_radius(f.root(), grid[i]);
    r = nevanlinna::avoid_singular_radius(fp.root(), r);
    auto b = shifts::unbounded_shift_breakdown(f, cfg.a, omega, r, cfg.epsilon, cfg.varsigma);
    return std::vector<double>{r, b.omega, b.lhs, b.T_fprime, b.ratio_lhs_over_T,
                               b.term_T, b.term_Rzero, b.term_Rpole, b.term_log};
  });
  ModeResult out;
  out.table.header = {"r", "omega", "lhs", "T_fprime", "ratio", "term_T", "term_Rzero", "term_Rpole", "term_log"};
  out.table.rows = std::move(rows);
  Series ratio = column_series(out.table, 0, 4);
  double thr = mode_threshold(cfg, 0.1);
  auto trend = sliding_median_trend(ratio, cfg.window, thr);
  out.verdict = trend.verdict;
  json med = json::array();
  for (const auto& [r, m] : trend.medians) med.push_back({r, m});
  out.details["threshold"] = thr;
  out.details["window"] = cfg.window;
  out.details["medians"] = med;
  out.details["below"] = trend.below;
  out.details["non_increasing"] = trend.non_increasing;
  out.plot.title = "unbounded shift: lhs / T(r, f')";
  out.plot.y_label = "ratio";
  out.plot.series = {{"lhs/T(r,f')", ratio}, {"window median", trend.medians}};
  return out;
}

ModeResult t13_mode(const SweepConfig& cfg, const MeroExpr& f) {
  auto grid = cfg.grid();
  auto T_eval = [&](double s) {
    return nevanlinna::characteristic(f, nevanlinna::avoid_singular_radius(f.root(), s)).T;
  };
  MeroExpr fp = expr::differentiate(f);
  auto rows = parallel_map<std::vector<double>>(grid.size(), cfg.threads, [&](std::size_t i) {
    double r = nevanlinna::avoid_singular_radius(f.root(), grid[i]);
    r = nevanlinna::avoid_singular_radius(fp.root(), r);
    double w = shifts::omega_ceiling(r, cfg.epsilon, T_eval);
    double m = shifts::angular_shift_proximity(f, r, w);
    double T = nevanlinna::characteristic(f, r).T;
    return std::vector<double>{r, w, m, T, m / T};
  });
  ModeResult out;
  out.table.header = {"r", "omega", "m", "T", "ratio"};
  out.table.rows = std::move(rows);
  Series ratio = column_series(out.table, 0, 4);
  double thr = mode_threshold(cfg, 0.05);
  ExceptionalOptions eo;
  eo.log_measure_cap = cfg.log_measure_cap;
  auto rep = detect_exceptional(ratio, thr, eo);
  out.verdict = capped_trend_verdict(rep, ratio, cfg.log_measure_cap);
  out.details["threshold"] = thr;
  out.details["report"] = report_json(rep);
  out.plot.flagged = rep.flagged;
  out.report = std::move(rep);
  out.plot.title = "angular shift: m / T(r, f)";
  out.plot.y_label = "ratio";
  out.plot.series = {{"m/T", ratio}};
  return out;
}

ModeResult op1_mode(const SweepConfig& cfg, const MeroExpr& f) {
  auto res = shifts::op1_probe(f, cfg.epsilon, cfg.grid());
  ModeResult out;
  out.table.header = {"r", "T", "lambda", "theta", "v", "v_over_T", "flagged"};
  Series ratio, dens;
  for (const auto& p : res.points) {
    out.table.rows.push_back({p.r, p.T, p.lambda, p.theta, p.v, p.v / p.T, p.flagged ? 1.0 : 0.0});
    ratio.push_back({p.r, p.v / p.T});
  }
  out.verdict = res.report.verdict;
  out.details["report"] = report_json(res.report);
  out.plot.flagged = res.report.flagged;
  out.plot.title = "oscillation v / T(r, f)";
  out.plot.y_label = "ratio";
  out.plot.series = {{"v/T", ratio}, {"log density", res.report.log_density_series}};
  out.report = std::move(res.report);
  return out;
}

ModeResult ol1_mode(const SweepConfig& cfg, const MeroExpr& f) {
  auto grid = cfg.grid();
  std::size_t ns = cfg.sigmas.size();
  auto rows = parallel_map<std::vector<double>>(grid.size() * ns, cfg.threads, [&](std::size_t i) {
    double r = nevanlinna::avoid_singular_radius(f.root(), grid[i / ns]);
    double sigma = cfg.sigmas[i % ns];
    auto c = shifts::ol1_check(f, r, sigma);
    return std::vector<double>{r, sigma, c.lhs, c.T_dilated, c.bound, c.rhs_coeff_ratio, c.holds ? 1.0 : 0.0};
  });
  ModeResult out;
  out.table.header = {"r", "sigma", "lhs", "T_dilated", "bound", "coeff_ratio", "holds"};
  out.table.rows = std::move(rows);
  std::size_t broken = 0;
  std::vector<Series> by_sigma(ns);
  for (std::size_t i = 0; i < out.table.rows.size(); ++i) {
    const auto& row = out.table.rows[i];
    if (row[6] == 0.0) ++broken;
    by_sigma[i % ns].push_back({row[0], row[5]});
  }
  out.verdict = broken ? Verdict::fail : Verdict::pass;
  out.details["violations"] = broken;
  out.plot.title = "lhs / ((log sigma)^2 T(sigma^3 r))";
  out.plot.y_label = "ratio";
  for (std::size_t k = 0; k < ns; ++k)
    out.plot.series.push_back({"sigma = " + expr::format_real(cfg.sigmas[k]), by_sigma[k]});
  return out;
}

ModeResult prop_mode(const consequences::PropResult& p) {
  ModeResult out;
  out.table.header = {"lhs", "rhs", "margin", "limsup_N_over_T"};
  out.table.rows = {{p.lhs, p.rhs, p.margin, p.limsup_N_over_T}};
  out.verdict = p.verdict;
  out.details["lhs"] = p.lhs;
  out.details["rhs"] = p.rhs;
  out.details["margin"] = p.margin;
  return out;
}

ModeResult smt_mode(const SweepConfig& cfg, const MeroExpr& F) {
  std::vector<consequences::LinearTarget> targets;
  for (cplx p : cfg.a_list) targets.push_back({p, 0.0});
  auto res = consequences::smt_analogue_check(F, targets, cfg.eta, cfg.grid(), cfg.s0, cfg.s1);
  ModeResult out;
  out.table.header = {"r", "lhs", "rhs", "margin"};
  Series lhs, rhs;
  for (const auto& row : res.rows) {
    out.table.rows.push_back({row.r, row.lhs, row.rhs, row.margin});
    lhs.push_back({row.r, row.lhs});
    rhs.push_back({row.r, row.rhs});
  }
  out.verdict = res.verdict;
  out.details["report"] = report_json(res.report);
  out.plot.flagged = res.report.flagged;
  out.plot.title = "second main theorem analogue";
  out.plot.y_label = "value";
  out.plot.series = {{"sum of proximities", lhs}, {"bound", rhs}};
  out.report = std::move(res.report);
  return out;
}

}  // namespace

int exit_code_for(Verdict v) {
  switch (v) {
    case Verdict::pass: return 0;
    case Verdict::fail: return 2;
    case Verdict::inconclusive: return 3;
  }
  return kErrorExitCode;
}

std::string error_reason(const Error& e) {
  std::string msg = e.what();
  std::replace(msg.begin(), msg.end(), '\n', ' ');
  std::replace(msg.begin(), msg.end(), '\r', ' ');
  return std::string("error ") + to_string(e.kind()) + ": " + msg;
}

ModeResult evaluate_mode(const SweepConfig& cfg) {
  cfg.validate();
  MeroExpr f = expr::parse(cfg.function_text);
  auto grid = cfg.grid();
  shifts::OmegaSpec omega{cfg.omega_coef, cfg.beta};
  switch (cfg.theorem) {
    case Theorem::functionals: return functionals_mode(cfg, f);
    case Theorem::t11: return t11_mode(cfg, f);
    case Theorem::t12: return t12_mode(cfg, f);
    case Theorem::t13: return t13_mode(cfg, f);
    case Theorem::op1: return op1_mode(cfg, f);
    case Theorem::ol1: return ol1_mode(cfg, f);
    case Theorem::prop51: return prop_mode(consequences::prop51_check(f, cfg.a, cfg.eta, grid));
    case Theorem::prop52: return prop_mode(consequences::prop52_check(f, cfg.a, omega, grid));
    case Theorem::prop53: return prop_mode(consequences::prop53_check(f, cfg.eta, cfg.a_list, grid));
    case Theorem::prop54: return prop_mode(consequences::prop54_check(f, omega, cfg.a_list, grid));
    case Theorem::smt: return smt_mode(cfg, f);
  }
  throw Error(ErrorKind::config, "unhandled theorem mode");
}

RunOutcome run(const SweepConfig& cfg) {
  RunOutcome out;
  out.result = evaluate_mode(cfg);
  out.verdict = out.result.verdict;
  out.exit_code = exit_code_for(out.verdict);

  namespace fs = std::filesystem;
  std::error_code ec;
  fs::create_directories(cfg.out_dir, ec);
  if (ec) throw Error(ErrorKind::io, "cannot create '" + cfg.out_dir + "': " + ec.message());
  auto path = [&](const std::string& name) { return (fs::path(cfg.out_dir) / name).string(); };

  if (!cfg.csv.empty()) {
    emit_csv(out.result.table, path(cfg.csv));
    out.files.push_back(path(cfg.csv));
  }
  if (!cfg.svg.empty() && !out.result.plot.series.empty()) {
    try {
      emit_svg(out.result.plot, path(cfg.svg));
      out.files.push_back(path(cfg.svg));
    } catch (const Error& e) {
      // A series with no positive value cannot go on a log-log plot.
      if (e.kind() != ErrorKind::precondition) throw;
      out.result.details["svg_skipped"] = e.what();
    }
  }
  if (!cfg.summary.empty()) {
    json j;
    j["function"] = cfg.function_text;
    j["theorem"] = to_string(cfg.theorem);
    j["verdict"] = to_string(out.verdict);
    j["exit_code"] = out.exit_code;
    j["points"] = out.result.table.rows.size();
    j["seed"] = cfg.seed;
    j["details"] = out.result.details;
    write_text(j.dump(2) + "\n", path(cfg.summary));
    out.files.push_back(path(cfg.summary));
  }
  return out;
}

}  // namespace nev::harness
