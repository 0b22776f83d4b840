#pragma once

#include <memory>
#include <string>

#include "nev/error.hpp"

namespace nev::expr {

enum class Op {
  constant,
  var,
  add,
  sub,
  mul,
  div,
  neg,
  pow,  // integer exponent
  exp,
  sin,
  cos,
  tan,
  affine,  // child evaluated at scale*z + offset
};

struct Node;
using NodePtr = std::shared_ptr<const Node>;

struct Node {
  Op op = Op::constant;
  cplx value{};       // constant
  int exponent = 0;   // pow
  cplx scale{1.0};    // affine
  cplx offset{};      // affine
  NodePtr lhs;        // unary operand / left operand
  NodePtr rhs;        // right operand
};

// Immutable expression handle. Copies share the tree.
class MeroExpr {
 public:
  MeroExpr() = default;
  explicit MeroExpr(NodePtr root, std::string source_text = {})
      : root_(std::move(root)), source_(std::move(source_text)) {}

  const NodePtr& root() const noexcept { return root_; }
  const Node& node() const noexcept { return *root_; }
  const std::string& source_text() const noexcept { return source_; }
  bool valid() const noexcept { return root_ != nullptr; }

 private:
  NodePtr root_;
  std::string source_;
};

// Leaf constructors.
NodePtr make_constant(cplx value);
NodePtr make_var();

// Builders with constant folding only: two constant operands are combined,
// nothing else is rewritten. The parser uses these, so parse(render(e))
// reproduces trees built through them.
namespace fold {
NodePtr add(NodePtr a, NodePtr b);
NodePtr sub(NodePtr a, NodePtr b);
NodePtr mul(NodePtr a, NodePtr b);
NodePtr div(NodePtr a, NodePtr b);
NodePtr neg(NodePtr a);
NodePtr pow(NodePtr a, int k);
NodePtr apply(Op fn, NodePtr a);  // exp, sin, cos, tan
}  // namespace fold

// Builders with constant folding plus x*1, x*0, x+0, x-0, x/1, x^1, x^0
// elision. Used by differentiate and the transform helpers.
namespace simp {
NodePtr add(NodePtr a, NodePtr b);
NodePtr sub(NodePtr a, NodePtr b);
NodePtr mul(NodePtr a, NodePtr b);
NodePtr div(NodePtr a, NodePtr b);
NodePtr neg(NodePtr a);
NodePtr pow(NodePtr a, int k);
NodePtr apply(Op fn, NodePtr a);
}  // namespace simp

// Composition child(scale*z + offset); nested affine nodes are merged.
NodePtr make_affine(cplx scale, cplx offset, NodePtr child);

bool is_constant(const NodePtr& n);
bool is_constant_value(const NodePtr& n, cplx v);
// True when the subtree does not mention z.
bool is_z_free(const NodePtr& n);

bool structurally_equal(const NodePtr& a, const NodePtr& b);
inline bool structurally_equal(const MeroExpr& a, const MeroExpr& b) {
  return structurally_equal(a.root(), b.root());
}

int depth(const NodePtr& n);
std::size_t node_count(const NodePtr& n);

}  // namespace nev::expr
