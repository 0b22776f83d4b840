#include "nev/expr/polynomial.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <numeric>

namespace nev::expr {

Polynomial::Polynomial(std::vector<cplx> coeffs) : c_(std::move(coeffs)) {
  if (c_.empty()) c_.push_back(cplx{});
  trim();
}

void Polynomial::trim() {
  double scale = 0.0;
  for (const auto& c : c_) scale = std::max(scale, std::abs(c));
  // Leading coefficients that are pure cancellation noise are dropped.
  while (c_.size() > 1 && std::abs(c_.back()) <= 1e-14 * scale) c_.pop_back();
}

cplx Polynomial::operator()(cplx z) const {
  cplx acc{};
  for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * z + *it;
  return acc;
}

Polynomial Polynomial::derivative() const {
  if (c_.size() <= 1) return Polynomial::constant(0.0);
  std::vector<cplx> d(c_.size() - 1);
  for (std::size_t k = 1; k < c_.size(); ++k) d[k - 1] = static_cast<double>(k) * c_[k];
  return Polynomial(std::move(d));
}

double Polynomial::max_abs_bound(double radius) const {
  double acc = 0.0;
  for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * radius + std::abs(*it);
  return acc;
}

Polynomial Polynomial::compose_affine(cplx scale, cplx offset) const {
  Polynomial inner({offset, scale});
  Polynomial acc = Polynomial::constant(0.0);
  for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * inner + Polynomial::constant(*it);
  return acc;
}

Polynomial operator+(const Polynomial& a, const Polynomial& b) {
  std::vector<cplx> out(std::max(a.c_.size(), b.c_.size()));
  for (std::size_t k = 0; k < a.c_.size(); ++k) out[k] += a.c_[k];
  for (std::size_t k = 0; k < b.c_.size(); ++k) out[k] += b.c_[k];
  return Polynomial(std::move(out));
}

Polynomial operator-(const Polynomial& a, const Polynomial& b) { return a + cplx{-1.0} * b; }

Polynomial operator*(const Polynomial& a, const Polynomial& b) {
  std::vector<cplx> out(a.c_.size() + b.c_.size() - 1);
  for (std::size_t i = 0; i < a.c_.size(); ++i)
    for (std::size_t j = 0; j < b.c_.size(); ++j) out[i + j] += a.c_[i] * b.c_[j];
  return Polynomial(std::move(out));
}

Polynomial operator*(cplx s, const Polynomial& p) {
  std::vector<cplx> out = p.c_;
  for (auto& c : out) c *= s;
  return Polynomial(std::move(out));
}

namespace {

std::vector<cplx> raw_roots(const Polynomial& p) {
  const auto& c = p.coeffs();
  int n = p.degree();
  if (n <= 0) return {};
  // Roots at the origin are split off exactly.
  int zeros_at_origin = 0;
  while (zeros_at_origin < n && c[zeros_at_origin] == cplx{}) ++zeros_at_origin;
  std::vector<cplx> roots(zeros_at_origin, cplx{});
  std::vector<cplx> rest(c.begin() + zeros_at_origin, c.end());
  int m = static_cast<int>(rest.size()) - 1;
  if (m == 1) {
    roots.push_back(-rest[0] / rest[1]);
  } else if (m == 2) {
    cplx a = rest[2], b = rest[1], cc = rest[0];
    cplx disc = std::sqrt(b * b - 4.0 * a * cc);
    // Cancellation-free pairing.
    cplx q = -0.5 * (b + (std::real(std::conj(b) * disc) >= 0 ? disc : -disc));
    if (q == cplx{}) {
      roots.push_back(0.0);
      roots.push_back(0.0);
    } else {
      roots.push_back(q / a);
      roots.push_back(cc / q);
    }
  } else if (m > 2) {
    Eigen::MatrixXcd companion = Eigen::MatrixXcd::Zero(m, m);
    for (int k = 1; k < m; ++k) companion(k, k - 1) = 1.0;
    for (int k = 0; k < m; ++k) companion(k, m - 1) = -rest[k] / rest[m];
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> solver(companion, false);
    for (int k = 0; k < m; ++k) roots.push_back(solver.eigenvalues()(k));
  }
  return roots;
}

}  // namespace

std::vector<RootCluster> polynomial_roots(const Polynomial& p) {
  std::vector<cplx> roots = raw_roots(p);
  Polynomial dp = p.derivative();
  for (auto& r : roots) {
    for (int it = 0; it < 4; ++it) {
      cplx f = p(r);
      cplx d = dp(r);
      if (f == cplx{} || std::abs(d) < 1e-12 * (1.0 + std::abs(f))) break;
      cplx next = r - f / d;
      if (std::abs(p(next)) >= std::abs(f)) break;
      r = next;
    }
  }
  // Single-linkage clustering of numerically coincident roots.
  std::size_t n = roots.size();
  std::vector<std::size_t> parent(n);
  std::iota(parent.begin(), parent.end(), std::size_t{0});
  auto find = [&](std::size_t i) {
    while (parent[i] != i) i = parent[i] = parent[parent[i]];
    return i;
  };
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      double scale = std::max({1.0, std::abs(roots[i]), std::abs(roots[j])});
      if (std::abs(roots[i] - roots[j]) < 1e-5 * scale) parent[find(i)] = find(j);
    }
  std::vector<RootCluster> out;
  std::vector<long> slot(n, -1);
  for (std::size_t i = 0; i < n; ++i) {
    std::size_t root = find(i);
    if (slot[root] < 0) {
      slot[root] = static_cast<long>(out.size());
      out.push_back({cplx{}, 0});
    }
    auto& cl = out[static_cast<std::size_t>(slot[root])];
    cl.location += roots[i];
    cl.multiplicity += 1;
  }
  for (auto& cl : out) cl.location /= static_cast<double>(cl.multiplicity);
  return out;
}

std::optional<Rational> to_rational(const NodePtr& n, int max_degree) {
  auto too_big = [&](const Rational& r) {
    return r.num.degree() > max_degree || r.den.degree() > max_degree;
  };
  auto checked = [&](Rational r) -> std::optional<Rational> {
    if (too_big(r)) return std::nullopt;
    return r;
  };
  switch (n->op) {
    case Op::constant: return Rational{Polynomial::constant(n->value), Polynomial::constant(1.0)};
    case Op::var: return Rational{Polynomial::identity(), Polynomial::constant(1.0)};
    case Op::add:
    case Op::sub: {
      auto a = to_rational(n->lhs, max_degree);
      if (!a) return std::nullopt;
      auto b = to_rational(n->rhs, max_degree);
      if (!b) return std::nullopt;
      Polynomial left = a->num * b->den;
      Polynomial right = b->num * a->den;
      Polynomial num = n->op == Op::add ? left + right : left - right;
      return checked({num, a->den * b->den});
    }
    case Op::mul: {
      auto a = to_rational(n->lhs, max_degree);
      if (!a) return std::nullopt;
      auto b = to_rational(n->rhs, max_degree);
      if (!b) return std::nullopt;
      return checked({a->num * b->num, a->den * b->den});
    }
    case Op::div: {
      auto a = to_rational(n->lhs, max_degree);
      if (!a) return std::nullopt;
      auto b = to_rational(n->rhs, max_degree);
      if (!b) return std::nullopt;
      return checked({a->num * b->den, a->den * b->num});
    }
    case Op::neg: {
      auto a = to_rational(n->lhs, max_degree);
      if (!a) return std::nullopt;
      return Rational{cplx{-1.0} * a->num, a->den};
    }
    case Op::pow: {
      auto a = to_rational(n->lhs, max_degree);
      if (!a) return std::nullopt;
      int k = n->exponent;
      int mag = k < 0 ? -k : k;
      if (mag * std::max(a->num.degree(), a->den.degree()) > max_degree) return std::nullopt;
      Polynomial num = Polynomial::constant(1.0), den = Polynomial::constant(1.0);
      for (int j = 0; j < mag; ++j) {
        num = num * a->num;
        den = den * a->den;
      }
      if (k < 0) std::swap(num, den);
      return Rational{num, den};
    }
    case Op::affine: {
      auto a = to_rational(n->lhs, max_degree);
      if (!a) return std::nullopt;
      return Rational{a->num.compose_affine(n->scale, n->offset),
                      a->den.compose_affine(n->scale, n->offset)};
    }
    default: return std::nullopt;
  }
}

}  // namespace nev::expr
