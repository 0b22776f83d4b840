#include <doctest.h>

#include <cmath>
#include <numbers>

#include "nev/expr/parse.hpp"
#include "nev/nevanlinna/grid.hpp"
#include "nev/shifts/shifts.hpp"

using namespace nev;
using namespace nev::shifts;
using expr::parse;

TEST_CASE("mean-value bound holds pointwise") {
  struct Case {
    const char* f;
    cplx a;
    double r;
    cplx eta;
  };
  for (auto c : {Case{"exp(z)", 0.0, 5.0, 0.3}, Case{"tan(z)", 0.0, 2.0, {0.1, 0.05}},
                 Case{"(z^2+1)/(z-1)", 1.0, 3.0, 0.2}, Case{"sin(z)", 2.0, 4.0, {0, 0.4}},
                 Case{"z^3", 0.0, 2.0, 1e-3}}) {
    CAPTURE(c.f);
    CHECK(lagrange_bound_check(parse(c.f), c.a, c.r, c.eta, 256) <= 1e-9);
  }
}

TEST_CASE("vanishing shifts") {
  // (e^eta - 1) e^z / e^z is the constant e^eta - 1.
  CHECK(vanishing_shift_proximity(parse("exp(z)"), 0.0, 10.0, 0.3) == 0.0);
  CHECK(vanishing_shift_proximity(parse("exp(z)"), 0.0, 10.0, 1.0) ==
        doctest::Approx(std::log(std::exp(1.0) - 1.0)).epsilon(1e-12));
  CHECK(vanishing_shift_proximity(parse("tan(z)"), 0.0, 10.0, 1e-6) < 1e-3);
  CHECK(vanishing_shift_proximity(parse("(z^2+1)/(z-1)"), 1.0, 10.0, 1e-6) < 1e-3);

  auto probe = vanishing_limit_probe(parse("tan(z)"), 0.0, 10.0, {1e-2, 1e-4, 1e-6});
  CHECK(probe.verdict == harness::Verdict::pass);
  CHECK(probe.table.size() == 3);
  CHECK_THROWS_AS(vanishing_limit_probe(parse("exp(z)"), 0.0, 10.0, {1e-4, 1e-2}), Error);
  CHECK_THROWS_AS(vanishing_limit_probe(parse("exp(z)"), 0.0, 10.0, {0.5}), Error);
  CHECK_THROWS_AS(shift_quotient(parse("z"), 1.0, 0.1), Error);
  CHECK(std::isinf(default_alpha(1.0)));
  CHECK(default_alpha(std::exp(2.0)) == doctest::Approx(0.5));
}

TEST_CASE("unbounded shift breakdown") {
  auto b = unbounded_shift_breakdown(parse("exp(z)"), 0.0, OmegaSpec{1.0, 0.25}, 500.0, 0.1, 0.0);
  CHECK(b.term_Rpole == 0.0);
  CHECK(b.ratio_lhs_over_T < 0.1);
  CHECK(b.omega == doctest::Approx(std::pow(500.0, 0.25)));
  CHECK_THROWS_AS(unbounded_shift_breakdown(parse("exp(z)"), 0.0, OmegaSpec{1.0, 0.6}, 50.0, 0.1, 0.0), Error);
  CHECK_THROWS_AS(unbounded_shift_breakdown(parse("exp(z)"), 0.0, OmegaSpec{2.0, 0.25}, 50.0, 0.1, 0.0), Error);
  CHECK_THROWS_AS(unbounded_shift_breakdown(parse("exp(z)"), 0.0, OmegaSpec{1.0, 0.25}, 50.0, 0.5, 0.0), Error);
}

TEST_CASE("angular shifts") {
  auto T = [](double s) { return s; };
  double expect = std::pow(9.5, -0.75) * std::pow(9.0, -1.0 / 3.0);
  CHECK(omega_ceiling(9.0, 0.5, T) == doctest::Approx(expect).epsilon(1e-14));
  CHECK_THROWS_AS(omega_ceiling(9.0, 0.5, [](double) { return 0.5; }), Error);
  CHECK(angular_shift_proximity(parse("exp(z)"), 10.0, 0.0) == 0.0);
  CHECK_THROWS_AS(angular_shift_proximity(parse("exp(z)"), 10.0, -0.1), Error);
  CHECK(angular_shift_proximity(parse("exp(z)"), 50.0, 1e-3) == doctest::Approx(0.0).epsilon(1e-9));
}

TEST_CASE("oscillation") {
  // log|e^z| = 5 cos t on |z| = 5; over a full turn the sup is 5.
  CHECK(oscillation_v(parse("exp(z)"), 5.0, 2 * std::numbers::pi) == doctest::Approx(5.0).epsilon(1e-9));
  CHECK(oscillation_v(parse("z^3"), 2.0, 0.5) == doctest::Approx(0.0).epsilon(1e-12));
  double prev = 0.0;
  for (double theta : {0.01, 0.1, 0.5, 1.0}) {
    double v = oscillation_v(parse("tan(z)"), 10.0, theta);
    CHECK(v >= prev - 1e-12);
    prev = v;
  }
  double e = std::exp(1.0);
  CHECK(lambda_r(std::exp(e), e) == doctest::Approx(1.0 / e));
  CHECK(lambda_r(0.5, 10.0) == 1.0);
  CHECK_THROWS_AS(lambda_r(5.0, 2.0), Error);
}

TEST_CASE("oscillation probe") {
  auto grid = nevanlinna::geometric_grid(std::exp(2.0), std::exp(6.0), 12);
  auto e = op1_probe(parse("exp(z)"), 0.5, grid);
  CHECK(e.points.size() == grid.size());
  CHECK(e.report.verdict == harness::Verdict::pass);
  auto t = op1_probe(parse("tan(z)"), 0.5, grid);
  CHECK(t.report.verdict == harness::Verdict::pass);
  CHECK(t.report.log_measure == 0.0);
}

TEST_CASE("dilation inequality") {
  for (const char* f : {"z", "exp(z)"}) {
    auto c = ol1_check(parse(f), 5.0, 1.5);
    CAPTURE(f);
    CHECK(c.holds);
    CHECK(c.lhs <= c.bound);
    CHECK(c.bound == doctest::Approx(508 * std::pow(std::log(1.5), 2) * (c.T_dilated + 10)));
  }
}
