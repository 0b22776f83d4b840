#pragma once

#include <vector>

#include "nev/expr/ast.hpp"

namespace nev::expr {

enum class PointKind { zero, pole };

struct ZeroPole {
  cplx location;
  int multiplicity = 1;
  PointKind kind = PointKind::zero;
};

// Zeros and poles inside |z| < radius, sorted by modulus (ties by argument).
struct ZeroPoleList {
  double radius = 0.0;
  std::vector<ZeroPole> entries;
  bool used_fallback = false;  // some factor needed argument-principle subdivision

  int count(PointKind kind) const;
  std::vector<ZeroPole> of_kind(PointKind kind) const;
};

struct CatalogOptions {
  // Skip the exact rational and lattice catalogs and subdivide instead.
  bool force_fallback = false;
  long cell_budget = 1L << 14;
};

// Zeros/poles closer than this to |z| = r raise boundary_collision.
double boundary_guard(double r);

ZeroPoleList enumerate_zeros_poles(const MeroExpr& e, double r, const CatalogOptions& opt = {});
ZeroPoleList enumerate_zeros_poles(const NodePtr& n, double r, const CatalogOptions& opt = {});

// All zeros and poles within |z| < r without the boundary check; entries near
// the circle are kept. Used for singular-arc placement in quadrature.
std::vector<ZeroPole> zeros_poles_near(const NodePtr& n, double r);

// Superset of the poles of n in |z| < r; orders are upper bounds. Cheaper
// than a full catalog when only log+ |f| singularities matter.
std::vector<ZeroPole> pole_candidates(const NodePtr& n, double r);

}  // namespace nev::expr
