#include <doctest.h>

#include <cmath>
#include <random>

#include "nev/expr/evaluate.hpp"
#include "nev/expr/parse.hpp"
#include "nev/expr/transform.hpp"

using namespace nev;
using namespace nev::expr;

namespace {

NodePtr random_tree(std::mt19937_64& rng, int depth) {
  std::uniform_int_distribution<int> pick(0, 11);
  int choice = depth <= 0 ? pick(rng) % 3 : pick(rng);
  auto constant = [&] {
    std::uniform_int_distribution<int> num(-300, 300);
    int v = num(rng);
    if (v == 0) v = 7;
    if (pick(rng) % 4 == 0) return make_constant(cplx{0.0, v / 100.0});
    return make_constant(v / 100.0);
  };
  switch (choice) {
    case 0:
    case 1: return make_var();
    case 2: return constant();
    case 3: return fold::add(random_tree(rng, depth - 1), random_tree(rng, depth - 1));
    case 4: return fold::sub(random_tree(rng, depth - 1), random_tree(rng, depth - 1));
    case 5: return fold::mul(random_tree(rng, depth - 1), random_tree(rng, depth - 1));
    case 6: return fold::div(random_tree(rng, depth - 1), fold::add(random_tree(rng, depth - 1), make_constant(2.5)));
    case 7: return fold::neg(random_tree(rng, depth - 1));
    case 8: {
      std::uniform_int_distribution<int> k(-3, 4);
      return fold::pow(random_tree(rng, depth - 1), k(rng));
    }
    case 9: return fold::apply(Op::exp, random_tree(rng, depth - 1));
    case 10: return fold::apply(Op::sin, random_tree(rng, depth - 1));
    default: return fold::apply(pick(rng) % 2 ? Op::cos : Op::tan, random_tree(rng, depth - 1));
  }
}

cplx central_difference(const MeroExpr& f, cplx z) {
  const double h = 1e-5;
  cplx a = *value_at(f, z + h), b = *value_at(f, z - h);
  cplx c = *value_at(f, z + cplx{0, h}), d = *value_at(f, z - cplx{0, h});
  // Average of the real and imaginary direction quotients.
  return 0.5 * ((a - b) / (2 * h) + (c - d) / cplx{0, 2 * h});
}

}  // namespace

TEST_CASE("render and parse round-trip on 200 random expressions") {
  std::mt19937_64 rng(20240611);
  for (int k = 0; k < 200; ++k) {
    NodePtr n = random_tree(rng, 4);
    std::string text = render(n);
    CAPTURE(text);
    MeroExpr back = parse(text);
    CHECK(structurally_equal(back.root(), n));
    CHECK(render(back) == text);
  }
}

TEST_CASE("canonical rendering") {
  CHECK(render(parse("z^2+1")) == "z^2 + 1");
  CHECK(render(parse("exp( z )*sin(2*z)")) == "exp(z)*sin(2*z)");
  CHECK(render(parse("1/(z-1)")) == "1/(z - 1)");
  CHECK(render(parse("2+3")) == "5");
  CHECK(format_real(0.1) == "0.1");
}

TEST_CASE("parse errors carry kind and offset") {
  auto kind_of = [](const char* s) {
    try {
      parse(s);
    } catch (const Error& e) {
      return e.kind();
    }
    return ErrorKind::io;
  };
  CHECK(kind_of("sin(z") == ErrorKind::syntax);
  CHECK(kind_of("z +") == ErrorKind::syntax);
  CHECK(kind_of("log(z)") == ErrorKind::unknown_identifier);
  CHECK(kind_of("z^1.5") == ErrorKind::non_integer_exponent);
  CHECK(kind_of("") == ErrorKind::syntax);
  try {
    parse("z + * 2");
    FAIL("expected a syntax error");
  } catch (const Error& e) {
    REQUIRE(e.offset().has_value());
    CHECK(*e.offset() == 4);
  }
}

TEST_CASE("evaluation") {
  CHECK(std::abs(*value_at(parse("exp(z)"), 1.0) - std::exp(1.0)) < 1e-15);
  CHECK(std::abs(*value_at(parse("(z-1)/(z+1)"), cplx{0, 1}) - cplx{0, 1}) < 1e-15);
  CHECK_FALSE(value_at(parse("1/z"), 0.0).has_value());
  auto pole = evaluate(parse("1/z^2"), 0.0);
  CHECK(pole.pole);
  CHECK(pole.pole_multiplicity == 2);
  CHECK(evaluate(parse("tan(z)"), std::numbers::pi / 2).pole);
  // Scaled arithmetic keeps log|f| finite far beyond double range.
  CHECK(log_abs(parse("exp(z)"), 1000.0) == doctest::Approx(1000.0).epsilon(1e-14));
  CHECK(log_abs(parse("exp(z)*exp(z)"), 800.0) == doctest::Approx(1600.0).epsilon(1e-14));
  CHECK(log_abs(parse("exp(-z)"), 2000.0) == doctest::Approx(-2000.0).epsilon(1e-14));
  CHECK(log_abs(parse("sin(z)"), cplx{0, 900}) == doctest::Approx(900 - std::log(2.0)).epsilon(1e-12));
  auto lp = log_polar(parse("exp(z)").root(), cplx{2000.0, 1.0});
  CHECK(lp.log_abs == doctest::Approx(2000.0));
  CHECK(lp.arg == doctest::Approx(1.0));
}

TEST_CASE("derivatives agree with finite differences") {
  const char* corpus[] = {"z", "z^2+1", "(z-1)/(z+1)", "tan(z)", "exp(z)/(z^2+1)", "sin(z)",
                          "exp(z^2)*cos(3*z)", "1/(z-2)^3", "tan(exp(z)/3)"};
  cplx pts[] = {{0.3, 0.2}, {-0.7, 0.4}, {1.1, -0.6}};
  for (const char* s : corpus) {
    MeroExpr f = parse(s);
    MeroExpr d = differentiate(f);
    for (cplx z : pts) {
      CAPTURE(s);
      CAPTURE(z);
      cplx exact = *value_at(d, z);
      cplx approx = central_difference(f, z);
      CHECK(std::abs(exact - approx) <= 1e-6 * std::max(1.0, std::abs(exact)));
    }
  }
}

TEST_CASE("shifts and differences") {
  MeroExpr f = parse("z^2");
  CHECK(std::abs(*value_at(shift(f, 1.0), 2.0) - 9.0) < 1e-14);
  CHECK(std::abs(*value_at(difference(f, 1.0, 1), 2.0) - 5.0) < 1e-14);
  CHECK(std::abs(*value_at(difference(f, 1.0, 2), 2.0) - 2.0) < 1e-14);
  MeroExpr g = angular_shift(parse("z"), std::numbers::pi / 2);
  CHECK(std::abs(*value_at(g, 1.0) - cplx{0, 1}) < 1e-15);
  // Affine composition renders as a substituted argument that parses back
  // to the same function.
  MeroExpr h = shift(parse("sin(z)/z"), cplx{0.5, -1});
  MeroExpr back = parse(render(h));
  CHECK(std::abs(*value_at(back, 0.7) - *value_at(h, 0.7)) < 1e-14);
}
