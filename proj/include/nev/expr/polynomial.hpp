#pragma once

#include <optional>
#include <vector>

#include "nev/expr/ast.hpp"

namespace nev::expr {

// Dense polynomial with complex coefficients, lowest degree first.
class Polynomial {
 public:
  Polynomial() = default;
  explicit Polynomial(std::vector<cplx> coeffs);
  static Polynomial constant(cplx c) { return Polynomial({c}); }
  static Polynomial identity() { return Polynomial({0.0, 1.0}); }

  int degree() const { return static_cast<int>(c_.size()) - 1; }
  bool is_zero() const { return c_.size() == 1 && c_[0] == cplx{}; }
  const std::vector<cplx>& coeffs() const { return c_; }
  cplx operator()(cplx z) const;
  Polynomial derivative() const;
  // Upper bound for |p| on the closed disk |z| <= radius.
  double max_abs_bound(double radius) const;
  // p(scale*z + offset)
  Polynomial compose_affine(cplx scale, cplx offset) const;

  friend Polynomial operator+(const Polynomial& a, const Polynomial& b);
  friend Polynomial operator-(const Polynomial& a, const Polynomial& b);
  friend Polynomial operator*(const Polynomial& a, const Polynomial& b);
  friend Polynomial operator*(cplx s, const Polynomial& p);

 private:
  void trim();
  std::vector<cplx> c_{cplx{}};
};

struct RootCluster {
  cplx location;
  int multiplicity;
};

// All roots with multiplicity. Companion-matrix eigenvalues, Newton polish,
// then clustering of numerically coincident roots.
std::vector<RootCluster> polynomial_roots(const Polynomial& p);

struct Rational {
  Polynomial num;
  Polynomial den;
};

// Rational form of a subtree built only from z, constants, + - * /, integer
// powers and affine composition; nullopt otherwise or when the degree
// exceeds `max_degree`.
std::optional<Rational> to_rational(const NodePtr& n, int max_degree = 64);

}  // namespace nev::expr
