// Acceptance criteria, one PASS/FAIL line each. Exit status is nonzero when
// any criterion fails.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "nev/consequences/consequences.hpp"
#include "nev/expr/catalog.hpp"
#include "nev/expr/evaluate.hpp"
#include "nev/expr/parse.hpp"
#include "nev/harness/config.hpp"
#include "nev/harness/run.hpp"
#include "nev/nevanlinna/functionals.hpp"
#include "nev/nevanlinna/grid.hpp"
#include "nev/nevanlinna/kernels.hpp"
#include "nev/shifts/shifts.hpp"

using namespace nev;
using expr::parse;

namespace {

constexpr double kPi = std::numbers::pi;

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, x);
  return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

harness::SweepConfig config(const std::string& text) { return harness::parse_config(text); }

Outcome closed_form_characteristic() {
  auto t0 = std::chrono::steady_clock::now();
  auto cfg = config("[function]\nf = exp(z)\n[grid]\nr_min = 1\nr_max = 50\npoints = 64\n");
  auto res = harness::evaluate_mode(cfg);
  double secs = seconds_since(t0);
  double worst = 0.0;
  for (const auto& row : res.table.rows) worst = std::max(worst, std::abs(row[6] / (row[0] / kPi) - 1.0));
  bool ok = res.table.rows.size() == 64 && worst < 1e-4 && secs < 10.0;
  return {ok, "max rel err " + fmt("%.2e", worst) + ", " + fmt("%.2f", secs) + " s"};
}

Outcome jensen_identity() {
  const char* corpus[] = {"z", "z^2+1", "(z-1)/(z+1)", "tan(z)", "exp(z)/(z^2+1)", "sin(z)"};
  double worst = 0.0;
  for (const char* s : corpus) {
    auto f = parse(s);
    auto inv = parse(std::string("1/(") + s + ")");
    double lo = HUGE_VAL, hi = -HUGE_VAL;
    for (double r0 : nevanlinna::geometric_grid(2.0, 50.0, 32)) {
      double r = nevanlinna::avoid_singular_radius(f.root(), r0);
      auto a = nevanlinna::characteristic(f, r);
      double v = a.m - nevanlinna::proximity(inv, r).value + a.N - a.N_zeros;
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
    worst = std::max(worst, hi - lo);
  }
  return {worst < 1e-3, "max spread " + fmt("%.2e", worst)};
}

Outcome poisson_jensen_oracle() {
  auto t0 = std::chrono::steady_clock::now();
  const char* corpus[] = {"z^2+1", "tan(z)", "exp(z)/(z^2+1)", "sin(z)"};
  std::mt19937_64 rng(20240611);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  int bad = 0, total = 0;
  double worst_ratio = 0.0;
  for (const char* s : corpus) {
    auto f = parse(s);
    double radius = nevanlinna::avoid_singular_radius(f.root(), 5.0);
    for (int k = 0; k < 20; ++k) {
      cplx z = std::polar(0.95 * radius * std::sqrt(unit(rng)), 2 * kPi * unit(rng));
      auto q = nevanlinna::poisson_jensen_reconstruct(f, radius, z);
      double err = std::abs(q.value - expr::log_abs(f, z));
      ++total;
      if (!(err <= 10.0 * q.abs_err_est)) ++bad;
      if (q.abs_err_est > 0) worst_ratio = std::max(worst_ratio, err / q.abs_err_est);
    }
  }
  double secs = seconds_since(t0);
  return {bad == 0 && secs < 30.0, std::to_string(total - bad) + "/" + std::to_string(total) +
                                       " within 10x estimate (worst " + fmt("%.2g", worst_ratio) + "x), " +
                                       fmt("%.2f", secs) + " s"};
}

Outcome lagrange_bound() {
  struct Case {
    const char* f;
    cplx a;
    double r;
    cplx eta;
  };
  int failures = 0;
  double worst = -HUGE_VAL;
  for (auto c : {Case{"exp(z)", 0.0, 5.0, 0.3}, Case{"tan(z)", 0.0, 2.0, {0.1, 0.05}},
                 Case{"(z^2+1)/(z-1)", 1.0, 3.0, 0.2}, Case{"sin(z)", 2.0, 4.0, {0, 0.4}},
                 Case{"exp(z)/(z^2+1)", 0.5, 6.0, {-0.2, 0.1}}}) {
    double v = shifts::lagrange_bound_check(parse(c.f), c.a, c.r, c.eta, 256);
    worst = std::max(worst, v);
    if (!(v <= 1e-9)) ++failures;
  }
  return {failures == 0, "5 configurations x 256 angles, largest excess " + fmt("%.2e", worst)};
}

Outcome vanishing_shift() {
  struct Case {
    const char* f;
    cplx a;
  };
  double worst = 0.0;
  for (auto c : {Case{"exp(z)", 0.0}, Case{"tan(z)", 0.0}, Case{"(z^2+1)/(z-1)", 1.0}})
    worst = std::max(worst, shifts::vanishing_shift_proximity(parse(c.f), c.a, 10.0, 1e-6));
  bool exact = true;
  for (cplx eta : {cplx{0.49}, cplx{0.3}, cplx{1e-3}, cplx{1e-6}, cplx{-0.45}, cplx{0, 0.3}, cplx{0.2, -0.2}})
    exact = exact && shifts::vanishing_shift_proximity(parse("exp(z)"), 0.0, 10.0, eta) == 0.0;
  return {worst < 1e-3 && exact,
          "max m at eta=1e-6 " + fmt("%.2e", worst) + (exact ? ", exp exactly 0" : ", exp not exactly 0")};
}

Outcome angular_shift() {
  auto cfg = config(
      "[function]\nf = exp(z)\n[theorem]\nmode = t13\n[grid]\nr_min = 5\nr_max = 200\npoints = 32\n"
      "[shift]\nepsilon = 1\n[verdict]\nthreshold = 0.05\nlog_measure_cap = 1\n");
  auto res = harness::evaluate_mode(cfg);
  double worst = 0.0;
  for (const auto& row : res.table.rows) worst = std::max(worst, row[4]);
  return {res.verdict == harness::Verdict::pass,
          std::string("verdict ") + harness::to_string(res.verdict) + ", flagged log-measure " +
              fmt("%.3g", res.report->log_measure) + ", max m/T " + fmt("%.2e", worst)};
}

Outcome unbounded_shift_trend() {
  auto cfg = config(
      "[function]\nf = exp(z)\na = 0\n[theorem]\nmode = t12\n[grid]\nr_min = 5\nr_max = 500\npoints = 32\n"
      "[shift]\nbeta = 0.25\nomega_coef = 1\nepsilon = 0.1\n[verdict]\nthreshold = 0.1\nwindow = 5\n");
  auto res = harness::evaluate_mode(cfg);
  bool rpole_zero = true;
  for (const auto& row : res.table.rows) rpole_zero = rpole_zero && row[7] == 0.0;
  const auto& med = res.details["medians"];
  double last = med.back()[1].get<double>();
  bool ok = res.verdict == harness::Verdict::pass && rpole_zero;
  return {ok, "final median " + fmt("%.4f", last) +
                  (res.details["non_increasing"].get<bool>() ? ", non-increasing" : ", increasing") +
                  (rpole_zero ? ", term_Rpole = 0" : ", term_Rpole nonzero")};
}

Outcome oscillation_density() {
  auto grid = nevanlinna::geometric_grid(std::exp(2.0), std::exp(6.0), 24);
  std::string detail;
  bool ok = true;
  for (const char* f : {"exp(z)", "tan(z)"}) {
    auto res = shifts::op1_probe(parse(f), 0.5, grid);
    const auto& rep = res.report;
    double final_density = rep.log_density_series.empty() ? 0.0 : rep.log_density_series.back().second;
    ok = ok && rep.verdict == harness::Verdict::pass;
    if (!detail.empty()) detail += "; ";
    detail += std::string(f) + " " + harness::to_string(rep.verdict) + " (final density " +
              fmt("%.3f", final_density) + ", slope " + fmt("%.3g", rep.density_slope) + ")";
  }
  return {ok, detail};
}

Outcome dilation_inequality() {
  int cases = 0, held = 0;
  double worst = 0.0;
  for (const char* f : {"z", "exp(z)", "tan(z)"})
    for (double sigma : {1.2, 1.5, 2.5})
      for (double r0 : {5.0, 20.0}) {
        auto fe = parse(f);
        double r = nevanlinna::avoid_singular_radius(fe.root(), r0);
        auto c = shifts::ol1_check(fe, r, sigma);
        ++cases;
        if (c.holds) ++held;
        worst = std::max(worst, c.lhs / c.bound);
      }
  return {held == cases, std::to_string(held) + "/" + std::to_string(cases) + " hold, max lhs/bound " +
                             fmt("%.3g", worst)};
}

Outcome deficiency_relations() {
  auto grid = nevanlinna::geometric_grid(5.0, 500.0, 16);
  auto p51 = consequences::prop51_check(parse("exp(z)"), 0.0, 0.3, grid);
  bool ok51 = p51.margin >= -0.05 && std::abs(p51.margin) <= 0.02;
  bool ok53 = true;
  for (const char* f : {"exp(z)", "z^2"})
    ok53 = ok53 && consequences::prop53_check(parse(f), 1.0, {0.0, 1.0, -1.0}, grid).verdict ==
                       harness::Verdict::pass;
  double idx = consequences::pair_index(parse("sin(z)"), consequences::Value{0.0}, kPi,
                                        nevanlinna::geometric_grid(5.0, 200.0, 16))
                   .index;
  bool ok_idx = std::abs(idx - 2.0) <= 0.1;
  bool ok_smt = true;
  ok_smt = ok_smt && consequences::smt_analogue_check(parse("exp(z)"), {{1.0, 0.0}, {2.0, 0.0}}, 0.5, grid)
                             .verdict == harness::Verdict::pass;
  ok_smt = ok_smt && consequences::smt_analogue_check(parse("z^3/3"), {{1.0, 0.0}, {-1.0, 0.0}}, 0.5, grid)
                             .verdict == harness::Verdict::pass;
  std::string detail = "prop51 margin " + fmt("%.3g", p51.margin) + (ok51 ? " ok" : " bad") + "; prop53 " +
                       (ok53 ? "PASS" : "FAIL") + "; pair_index(sin z, 0, pi) = " + fmt("%.4f", idx) +
                       " (expected 2.0 +- 0.1)" + "; smt " + (ok_smt ? "PASS" : "FAIL");
  return {ok51 && ok53 && ok_idx && ok_smt, detail};
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Outcome determinism() {
  namespace fs = std::filesystem;
  fs::path configs = fs::path(NEV_SOURCE_DIR) / "configs";
  fs::path base = fs::temp_directory_path() / "nev_acceptance_determinism";
  fs::remove_all(base);
  std::vector<fs::path> files;
  for (const auto& e : fs::directory_iterator(configs))
    if (e.path().extension() == ".ini") files.push_back(e.path());
  std::sort(files.begin(), files.end());
  int same = 0;
  std::string mismatch;
  for (const auto& cfg : files) {
    std::string name = cfg.stem().string();
    for (int threads : {1, 8}) {
      fs::path out = base / (name + "_t" + std::to_string(threads));
      std::string cmd = std::string("\"") + NEV_CLI + "\" run \"" + cfg.string() + "\" --threads " +
                        std::to_string(threads) + " --out-dir \"" + out.string() + "\" > /dev/null 2>&1";
      int rc = std::system(cmd.c_str());
      (void)rc;
    }
    std::string a = slurp(base / (name + "_t1") / "results.csv");
    std::string b = slurp(base / (name + "_t8") / "results.csv");
    if (!a.empty() && a == b)
      ++same;
    else
      mismatch += " " + name;
  }
  bool ok = same == static_cast<int>(files.size()) && !files.empty();
  return {ok, std::to_string(same) + "/" + std::to_string(files.size()) + " configs byte-identical" +
                  (mismatch.empty() ? "" : ", differing:" + mismatch)};
}

Outcome fallback_cross_check() {
  std::mt19937_64 rng(777);
  std::uniform_real_distribution<double> coord(-4.0, 4.0);
  std::uniform_int_distribution<int> degree(0, 5), coin(0, 3);
  int agree = 0, total = 0;
  std::string first_bad;
  for (int k = 0; k < 10; ++k) {
    int dn = degree(rng), dd = degree(rng);
    if (dn + dd == 0) dn = 2;
    auto factors = [&](int d) {
      std::string s = "1";
      cplx prev{};
      for (int j = 0; j < d; ++j) {
        // Occasionally repeat the previous root to get a multiple one.
        cplx root = (j > 0 && coin(rng) == 0) ? prev : cplx{coord(rng), coord(rng)};
        prev = root;
        s += "*(z - (" + expr::format_real(root.real()) + " + " + expr::format_real(root.imag()) + "*i))";
      }
      return s;
    };
    std::string text = "(" + expr::format_real(0.5 + k) + "*" + factors(dn) + ")/(" + factors(dd) + ")";
    auto f = parse(text);
    for (double r0 : {0.7, 1.5, 2.5, 4.0, 6.0}) {
      double r = nevanlinna::avoid_singular_radius(f.root(), r0);
      auto exact = expr::enumerate_zeros_poles(f, r);
      expr::CatalogOptions opt;
      opt.force_fallback = true;
      auto sub = expr::enumerate_zeros_poles(f, r, opt);
      auto signed_count = [](const expr::ZeroPoleList& l) {
        int n = 0;
        for (const auto& e : l.entries) n += e.kind == expr::PointKind::zero ? e.multiplicity : -e.multiplicity;
        return n;
      };
      bool same = signed_count(exact) == signed_count(sub) &&
                  exact.count(expr::PointKind::zero) == sub.count(expr::PointKind::zero) &&
                  exact.count(expr::PointKind::pole) == sub.count(expr::PointKind::pole);
      ++total;
      if (same)
        ++agree;
      else if (first_bad.empty())
        first_bad = text + " at r=" + fmt("%.3g", r);
    }
  }
  return {agree == total, std::to_string(agree) + "/" + std::to_string(total) + " (function, radius) cases agree" +
                              (first_bad.empty() ? "" : ", first mismatch " + first_bad)};
}

}  // namespace

int main() {
  struct Criterion {
    const char* name;
    std::function<Outcome()> check;
  };
  const std::vector<Criterion> criteria = {
      {"closed-form characteristic T(r, exp) = r/pi", closed_form_characteristic},
      {"Jensen identity on six functions", jensen_identity},
      {"Poisson-Jensen reconstruction", poisson_jensen_oracle},
      {"mean-value pointwise bound", lagrange_bound},
      {"vanishing shift limit", vanishing_shift},
      {"angular shift outside a finite log-measure set", angular_shift},
      {"unbounded shift ratio trend", unbounded_shift_trend},
      {"oscillation outside log-density zero", oscillation_density},
      {"dilation inequality 508 (log sigma)^2", dilation_inequality},
      {"deficiency relations and pair indices", deficiency_relations},
      {"thread-count determinism", determinism},
      {"subdivision counts equal exact catalogs", fallback_cross_check},
  };
  int failed = 0;
  for (std::size_t k = 0; k < criteria.size(); ++k) {
    Outcome o;
    try {
      o = criteria[k].check();
    } catch (const std::exception& e) {
      o = {false, std::string("error: ") + e.what()};
    }
    if (!o.pass) ++failed;
    std::printf("%s criterion %zu: %s: %s\n", o.pass ? "PASS" : "FAIL", k + 1, criteria[k].name, o.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%zu/%zu criteria passed\n", criteria.size() - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
