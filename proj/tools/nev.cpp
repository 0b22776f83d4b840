// Command-line front end: run a sweep config, verify one theorem, or inspect
// a single function.
#include <cstdio>
#include <cstdlib>
#include <iostream>

#include <CLI11.hpp>

#include "nev/consequences/consequences.hpp"
#include "nev/expr/evaluate.hpp"
#include "nev/expr/parse.hpp"
#include "nev/harness/run.hpp"
#include "nev/nevanlinna/functionals.hpp"
#include "nev/nevanlinna/grid.hpp"

namespace {

using namespace nev;

struct Common {
  std::string out_dir;
  double tol = 0.0;
  int threads = 0;
  long long seed = -1;
};

void apply(const Common& c, harness::SweepConfig& cfg) {
  if (!c.out_dir.empty()) {
    cfg.out_dir = c.out_dir;
  } else if (const char* env = std::getenv("NEV_OUT_DIR"); env && *env) {
    cfg.out_dir = env;
  }
  if (c.tol > 0.0) cfg.abs_tol = c.tol;
  if (c.threads > 0) cfg.threads = c.threads;
  if (c.seed >= 0) cfg.seed = static_cast<std::uint64_t>(c.seed);
}

int run_config(harness::SweepConfig cfg, const Common& c) {
  apply(c, cfg);
  auto out = harness::run(cfg);
  std::printf("%s %s %s\n", harness::to_string(cfg.theorem), harness::to_string(out.verdict),
              cfg.function_text.c_str());
  for (const auto& f : out.files) std::printf("wrote %s\n", f.c_str());
  return out.exit_code;
}

cplx parse_constant(const std::string& text) {
  auto e = expr::parse(text);
  if (!expr::is_z_free(e.root())) throw Error(ErrorKind::precondition, "expected a constant: " + text);
  auto v = expr::value_at(e, cplx{});
  if (!v) throw Error(ErrorKind::non_finite, "constant is not finite: " + text);
  return *v;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Nevanlinna-theory numerical probes"};
  app.require_subcommand(1);
  Common common;
  app.add_option("--out-dir", common.out_dir, "output directory (overrides NEV_OUT_DIR and the config)");
  app.add_option("--tol", common.tol, "absolute quadrature tolerance")->check(CLI::PositiveNumber);
  app.add_option("--threads", common.threads, "worker threads")->check(CLI::Range(1, 256));
  app.add_option("--seed", common.seed, "seed for random probe points")->check(CLI::NonNegativeNumber);

  std::string config_path;
  auto* run = app.add_subcommand("run", "run the sweep described by a config file");
  run->add_option("config", config_path, "config file")->required();

  std::string theorem;
  std::string verify_path;
  auto* verify = app.add_subcommand("verify", "run one theorem probe with a config file");
  verify->add_option("theorem", theorem, "t11|t12|t13|op1|ol1|prop51|prop52|prop53|prop54|smt")->required();
  verify->add_option("config", verify_path, "config file")->required();

  std::string f_text;
  double r = 0.0;
  auto* eval = app.add_subcommand("eval", "print m, n, N, T at one radius");
  eval->add_option("--f", f_text, "function of z")->required();
  eval->add_option("--r", r, "radius")->required()->check(CLI::PositiveNumber);

  std::string a_text = "0", c_text;
  auto* pairs = app.add_subcommand("pairs", "list c-separated a-pairs in |z| <= r");
  pairs->add_option("--f", f_text, "function of z")->required();
  pairs->add_option("--a", a_text, "value a, or inf");
  pairs->add_option("--c", c_text, "separation c")->required();
  pairs->add_option("--r", r, "radius")->required()->check(CLI::PositiveNumber);

  // Global flags are accepted after the subcommand too.
  for (auto* sub : {run, verify, eval, pairs}) sub->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : nev::harness::kErrorExitCode;
  }

  try {
    if (*run) return run_config(harness::load_config(config_path), common);
    if (*verify) {
      auto cfg = harness::load_config(verify_path);
      cfg.theorem = harness::theorem_from_string(theorem);
      if (cfg.theorem == harness::Theorem::functionals)
        throw Error(ErrorKind::config, "verify needs a theorem, not functionals");
      cfg.validate();
      return run_config(cfg, common);
    }
    if (*eval) {
      auto f = expr::parse(f_text);
      double rr = nevanlinna::avoid_singular_radius(f.root(), r);
      nevanlinna::QuadratureOptions opt;
      if (common.tol > 0.0) opt.abs_tol = common.tol;
      auto s = nevanlinna::characteristic(f, rr, opt);
      std::printf("r %.17g\nm %.17g\nn %d\nN %.17g\nT %.17g\nn_zeros %d\nN_zeros %.17g\nabs_err_est %.3g\n",
                  rr, s.m, s.n, s.N, s.T, s.n_zeros, s.N_zeros, s.diagnostics.abs_err_est);
      return 0;
    }
    if (*pairs) {
      auto f = expr::parse(f_text);
      consequences::Value a;
      if (a_text != "inf" && a_text != "infinity") a = parse_constant(a_text);
      cplx c = parse_constant(c_text);
      auto list = consequences::pair_scan(f, a, c, r);
      std::printf("z0_re,z0_im,equal_terms,residual\n");
      for (const auto& p : list)
        std::printf("%.17g,%.17g,%d,%.3g\n", p.z0.real(), p.z0.imag(), p.equal_terms, p.residual);
      std::printf("N_c %.17g\n", consequences::integrated_pair_count(list, r));
      return 0;
    }
  } catch (const Error& e) {
    std::cerr << harness::error_reason(e) << "\n";
    return harness::kErrorExitCode;
  } catch (const std::exception& e) {
    std::cerr << "error internal: " << e.what() << "\n";
    return harness::kErrorExitCode;
  }
  return harness::kErrorExitCode;
}
