#include <doctest.h>

#include <cmath>
#include <numbers>

#include "nev/expr/catalog.hpp"
#include "nev/expr/evaluate.hpp"
#include "nev/expr/parse.hpp"
#include "nev/nevanlinna/functionals.hpp"
#include "nev/nevanlinna/grid.hpp"
#include "nev/nevanlinna/growth.hpp"
#include "nev/nevanlinna/kernels.hpp"
#include "nev/nevanlinna/quadrature.hpp"

using namespace nev;
using namespace nev::nevanlinna;
using expr::parse;

namespace {
constexpr double kPi = std::numbers::pi;
}

TEST_CASE("Gauss-Legendre rules") {
  for (int n : {1, 2, 5, 16, 32}) {
    auto rule = gauss_legendre(n);
    REQUIRE(rule.size() == static_cast<std::size_t>(n));
    double w = 0.0, moment = 0.0;
    for (auto [x, wt] : rule) {
      w += wt;
      moment += wt * std::pow(x, 2 * n - 2);
    }
    CHECK(w == doctest::Approx(2.0).epsilon(1e-14));
    CHECK(moment == doctest::Approx(2.0 / (2 * n - 1)).epsilon(1e-12));
  }
}

TEST_CASE("adaptive integration") {
  auto q = integrate([](double t) { return std::sin(t); }, 0.0, kPi);
  CHECK(q.value == doctest::Approx(2.0).epsilon(1e-13));
  CHECK(q.abs_err_est < 1e-10);
  auto peak = integrate([](double t) { return 1.0 / (1e-4 + t * t); }, -1.0, 1.0);
  CHECK(peak.value == doctest::Approx(2.0 / 1e-2 * std::atan(1.0 / 1e-2)).epsilon(1e-10));
}

TEST_CASE("circle integrals of log|z - x|") {
  // Mean of log|r e^{it} - x| is log max(r, |x|).
  for (cplx x : {cplx{0.3, 0.1}, cplx{3.0, -1.0}, cplx{0.0, 2.0 * (1 - 1e-8)}, cplx{2.0 * (1 + 3e-7), 0.0}}) {
    CAPTURE(x);
    auto f = expr::MeroExpr(expr::fold::sub(expr::make_var(), expr::make_constant(x)));
    auto near = expr::zeros_poles_near(f.root(), 2.5);
    auto q = circle_log_integral(f.root(), 2.0, LogKind::log_abs, near);
    CHECK(q.value == doctest::Approx(std::log(std::max(2.0, std::abs(x)))).epsilon(1e-8));
    CHECK(std::abs(q.value - std::log(std::max(2.0, std::abs(x)))) <= 10 * q.abs_err_est + 1e-12);
  }
}

TEST_CASE("proximity and characteristic closed forms") {
  CHECK(proximity(parse("z"), 2.0).value == doctest::Approx(std::log(2.0)).epsilon(1e-12));
  CHECK(proximity(parse("z"), 0.5).value == doctest::Approx(0.0));
  CHECK(proximity(parse("1/z"), 0.5).value == doctest::Approx(std::log(2.0)).epsilon(1e-12));
  for (double r : {1.0, 10.0, 100.0, 1e4}) {
    auto s = characteristic(parse("exp(z)"), r);
    CHECK(s.T == doctest::Approx(r / kPi).epsilon(1e-10));
    CHECK(s.N == 0.0);
  }
  auto mob = characteristic(parse("(z-1)/(z+1)"), 10.0);
  CHECK(mob.T >= std::log(10.0));
  CHECK(mob.T <= std::log(10.0) + 0.7);
  CHECK(mob.n == 1);
}

TEST_CASE("counting functions") {
  auto t = counting(parse("tan(z)"), 2.0, Target::poles);
  CHECK(t.n == 2);
  CHECK(t.N == doctest::Approx(2 * std::log(4.0 / kPi)).epsilon(1e-12));
  auto z = counting(parse("z^2*(z-1)"), 2.0, Target::zeros);
  CHECK(z.n == 3);
  CHECK(z.n_distinct == 2);
  CHECK(z.N == doctest::Approx(2 * std::log(2.0) + std::log(2.0)).epsilon(1e-12));
  CHECK(z.N_distinct == doctest::Approx(2 * std::log(2.0)).epsilon(1e-12));
}

TEST_CASE("Jensen identity on the corpus") {
  const char* corpus[] = {"z", "z^2+1", "(z-1)/(z+1)", "tan(z)", "exp(z)/(z^2+1)", "sin(z)"};
  for (const char* s : corpus) {
    auto f = parse(s);
    auto inv = parse(std::string("1/(") + s + ")");
    double lo = HUGE_VAL, hi = -HUGE_VAL;
    for (double r0 : geometric_grid(2.0, 50.0, 12)) {
      double r = avoid_singular_radius(f.root(), r0);
      auto a = characteristic(f, r);
      double v = a.m - proximity(inv, r).value + a.N - a.N_zeros;
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
    CAPTURE(s);
    CHECK(hi - lo < 1e-6);
  }
}

TEST_CASE("angular counting") {
  AngularCountParams p;
  p.epsilon = 0.25;
  p.omega = 1.0;
  CHECK(p.threshold() == doctest::Approx(0.5));
  // Real zeros have arg 0 relative to omega = 1 and are never counted.
  CHECK(angular_counting(parse("sin(z)"), 10.0, p, Target::zeros) == 0);
  p.omega = cplx{0, 1};
  CHECK(angular_counting(parse("sin(z)"), 10.0, p, Target::zeros) == 6);
  CHECK(pair_ratio(parse("sin(z)"), 10.0, p, Target::zeros) == doctest::Approx(6.0 / 7.0));
  CHECK_THROWS_AS(pair_ratio(parse("exp(z)"), 10.0, p, Target::poles), Error);
}

TEST_CASE("Poisson kernel and Green function") {
  auto q = integrate([](double t) { return poisson_kernel(cplx{0.4, -0.3}, t); }, 0.0, 2 * kPi);
  CHECK(q.value / (2 * kPi) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(green(0.0, cplx{0.5, 0}) == doctest::Approx(std::log(2.0)));
  CHECK(green(cplx{0.1, 0.2}, cplx{-0.3, 0.4}) == doctest::Approx(green(cplx{-0.3, 0.4}, cplx{0.1, 0.2})));
  CHECK(green(cplx{0.999999, 0}, cplx{0.2, 0}) >= 0.0);
  CHECK_THROWS_AS(poisson_kernel(1.0, 0.0), Error);
  CHECK_THROWS_AS(green(0.3, 0.3), Error);
}

TEST_CASE("Poisson-Jensen reconstruction") {
  struct Case {
    const char* f;
    double s;
    cplx z;
  };
  for (auto c : {Case{"z", 1.0, 0.5}, Case{"tan(z)", 3.0, {0.4, 1.0}}, Case{"exp(z)/(z^2+1)", 4.0, {-1.5, 2.0}},
                 Case{"sin(z)", 5.0, {2.0, -2.5}}}) {
    auto f = parse(c.f);
    auto q = poisson_jensen_reconstruct(f, c.s, c.z);
    double direct = expr::log_abs(f, c.z);
    CAPTURE(c.f);
    CHECK(std::abs(q.value - direct) <= 10 * q.abs_err_est + 1e-12);
    CHECK(std::abs(q.value - direct) < 1e-7);
  }
  CHECK_THROWS_AS(poisson_jensen_reconstruct(parse("z"), 1.0, 2.0), Error);
}

TEST_CASE("grid and radius nudging") {
  auto g = geometric_grid(1.0, 100.0, 3);
  REQUIRE(g.size() == 3);
  CHECK(g[1] == doctest::Approx(10.0));
  CHECK(g.back() == 100.0);
  double r = avoid_singular_radius(parse("sin(z)").root(), kPi);
  CHECK(r > kPi);
  CHECK(r < kPi * 1.001);
  CHECK(avoid_singular_radius(parse("sin(z)").root(), 3.0) == 3.0);
}

TEST_CASE("order estimates") {
  auto sample = [](const char* s, double a, double b, int n) {
    std::vector<FunctionalSample> out;
    auto f = parse(s);
    for (double r : geometric_grid(a, b, n)) out.push_back(characteristic(f, avoid_singular_radius(f.root(), r)));
    return out;
  };
  auto e = order_estimate(sample("exp(z)", 1.0, 1e4, 16));
  CHECK(e.rho == doctest::Approx(1.0).epsilon(0.02));
  CHECK(e.varsigma < 0.05);
  auto q = order_estimate(sample("exp(z^2)", 1.0, 1e3, 16));
  CHECK(q.rho == doctest::Approx(2.0).epsilon(0.05));
  auto rat = order_estimate(sample("(z^2+1)/(z-3)", 1e2, 1e15, 16));
  CHECK(rat.rho < 0.1);
  CHECK_THROWS_AS(order_estimate(sample("exp(z)", 1.0, 10.0, 16)), Error);

  auto s = sample("exp(z)", 1.0, 1e3, 16);
  CHECK(interpolate_T(s, 100.0) == doctest::Approx(100.0 / kPi).epsilon(0.02));
  CHECK_THROWS_AS(interpolate_T(s, 2e3), Error);
  auto inc = increment_probe(s, 0.0, 0.5);
  for (auto [r, v] : inc) CHECK(v == 0.0);
  CHECK_THROWS_AS(increment_probe(s, 1e4, 0.5), Error);

  auto line = least_squares({0, 1, 2, 3}, {1, 3, 5, 7});
  CHECK(line.slope == doctest::Approx(2.0));
  CHECK(line.intercept == doctest::Approx(1.0));
  CHECK(line.stderr_ == doctest::Approx(0.0));
}
