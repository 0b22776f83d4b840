#include <doctest.h>

#include <cmath>
#include <numbers>

#include "nev/expr/catalog.hpp"
#include "nev/expr/evaluate.hpp"
#include "nev/expr/parse.hpp"
#include "nev/expr/polynomial.hpp"
#include "nev/nevanlinna/argument_principle.hpp"

using namespace nev;
using namespace nev::expr;

namespace {

constexpr double kPi = std::numbers::pi;

ErrorKind kind_of(const char* f, double r, CatalogOptions opt = {}) {
  try {
    enumerate_zeros_poles(parse(f), r, opt);
  } catch (const Error& e) {
    return e.kind();
  }
  return ErrorKind::io;
}

bool has(const ZeroPoleList& l, cplx at, int mult, PointKind kind) {
  for (const auto& e : l.entries)
    if (std::abs(e.location - at) < 1e-8 && e.multiplicity == mult && e.kind == kind) return true;
  return false;
}

// Multiplicity from the slope of log|f| toward the point.
double log_slope(const MeroExpr& f, cplx at) {
  double a = log_abs(f, at + std::polar(1e-3, 0.7));
  double b = log_abs(f, at + std::polar(1e-4, 0.7));
  return (a - b) / std::log(10.0);
}

}  // namespace

TEST_CASE("polynomial roots") {
  auto roots = polynomial_roots(Polynomial({-1.0, 0.0, 0.0, 1.0}));
  REQUIRE(roots.size() == 3);
  for (const auto& r : roots) {
    CHECK(std::abs(std::pow(r.location, 3) - 1.0) < 1e-12);
    CHECK(r.multiplicity == 1);
  }
  auto triple = polynomial_roots(Polynomial({-1.0, 3.0, -3.0, 1.0}));
  REQUIRE(triple.size() == 1);
  CHECK(triple[0].multiplicity == 3);
  CHECK(std::abs(triple[0].location - 1.0) < 1e-4);
}

TEST_CASE("exact catalogs") {
  auto rat = enumerate_zeros_poles(parse("(z-1)^2/(z+2)"), 3.0);
  CHECK(rat.entries.size() == 2);
  CHECK(has(rat, 1.0, 2, PointKind::zero));
  CHECK(has(rat, -2.0, 1, PointKind::pole));
  CHECK_FALSE(rat.used_fallback);

  auto s = enumerate_zeros_poles(parse("sin(z)"), 4.0);
  CHECK(s.entries.size() == 3);
  CHECK(has(s, 0.0, 1, PointKind::zero));
  CHECK(has(s, kPi, 1, PointKind::zero));
  CHECK(has(s, -kPi, 1, PointKind::zero));
  CHECK(s.entries[0].location == cplx{});

  auto t = enumerate_zeros_poles(parse("tan(z)"), 2.0);
  CHECK(t.count(PointKind::zero) == 1);
  CHECK(t.count(PointKind::pole) == 2);
  CHECK(has(t, kPi / 2, 1, PointKind::pole));

  auto e = enumerate_zeros_poles(parse("exp(z) - 1"), 7.0);
  CHECK(e.count(PointKind::zero) == 3);
  CHECK(has(e, cplx{0, 2 * kPi}, 1, PointKind::zero));
  CHECK(enumerate_zeros_poles(parse("exp(z)"), 100.0).entries.empty());

  auto c = enumerate_zeros_poles(parse("cos(z^2) - 1"), 3.0);
  CHECK(has(c, 0.0, 4, PointKind::zero));
  CHECK(c.count(PointKind::zero) == 4 + 4 * 2);
}

TEST_CASE("forced subdivision agrees with the exact catalogs") {
  const char* corpus[] = {"(z-1)^3*(z+0.5)/(z^2+4)", "sin(z)", "tan(z)", "exp(z)/(z^2+1)",
                          "(z-0.3)/(z+0.2)^2", "exp(z) - 2"};
  for (const char* f : corpus) {
    CAPTURE(f);
    auto exact = enumerate_zeros_poles(parse(f), 5.0);
    CatalogOptions opt;
    opt.force_fallback = true;
    auto sub = enumerate_zeros_poles(parse(f), 5.0, opt);
    REQUIRE(sub.entries.size() == exact.entries.size());
    for (std::size_t k = 0; k < exact.entries.size(); ++k) {
      CHECK(sub.entries[k].kind == exact.entries[k].kind);
      CHECK(sub.entries[k].multiplicity == exact.entries[k].multiplicity);
      CHECK(std::abs(sub.entries[k].location - exact.entries[k].location) < 1e-6);
    }
  }
}

TEST_CASE("catalog multiplicities match the local growth of log|f|") {
  const char* corpus[] = {"(z-1)^3*sin(z)", "z^2*(z+2)/(z-1.5)^2", "sin(z)^2*tan(z)", "exp(z)*(z-0.5)^4"};
  for (const char* s : corpus) {
    MeroExpr f = parse(s);
    for (const auto& e : enumerate_zeros_poles(f, 3.0).entries) {
      CAPTURE(s);
      CAPTURE(e.location);
      int sign = e.kind == PointKind::zero ? 1 : -1;
      CHECK(log_slope(f, e.location) == doctest::Approx(sign * e.multiplicity).epsilon(0.01));
    }
  }
}

TEST_CASE("catalog errors") {
  CHECK(kind_of("z - z", 2.0) == ErrorKind::identically_zero);
  CHECK(kind_of("sin(1/z)", 2.0) == ErrorKind::not_catalogable);
  CHECK(kind_of("1/(z-2)", 2.0) == ErrorKind::boundary_collision);
  CHECK(kind_of("sin(z)", kPi) == ErrorKind::boundary_collision);
  CatalogOptions tiny;
  tiny.force_fallback = true;
  tiny.cell_budget = 4;
  CHECK(kind_of("sin(z)", 30.0, tiny) == ErrorKind::budget_exceeded);
}

TEST_CASE("winding numbers") {
  CHECK(nevanlinna::winding_count(parse("z^3"), 1.0) == 3);
  CHECK(nevanlinna::winding_count(parse("(z-0.5)/(z+0.2)^2"), 1.0) == -1);
  CHECK(nevanlinna::winding_count(parse("exp(z)"), 50.0) == 0);
  CHECK(nevanlinna::winding_count(parse("sin(z)"), 10.0) == 7);
  CHECK(nevanlinna::winding_polygon(parse("z - 0.1").root(), {{-1, -1}, {1, -1}, {1, 1}, {-1, 1}}) == 1);
  CHECK_THROWS_AS(nevanlinna::winding_count(parse("z - 1"), 1.0), Error);
}
