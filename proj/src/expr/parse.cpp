#include "nev/expr/parse.hpp"

#include <charconv>
#include <cmath>
#include <numbers>

namespace nev::expr {

namespace {

class Parser {
 public:
  explicit Parser(std::string_view text) : text_(text) {}

  NodePtr parse_all() {
    skip_ws();
    if (pos_ >= text_.size()) fail(ErrorKind::syntax, "empty expression");
    NodePtr n = parse_expr();
    skip_ws();
    if (pos_ != text_.size()) fail(ErrorKind::syntax, "unexpected character");
    return n;
  }

 private:
  [[noreturn]] void fail(ErrorKind kind, const std::string& what) const {
    throw Error(kind, "parse error at byte " + std::to_string(pos_) + ": " + what, pos_);
  }

  void skip_ws() {
    while (pos_ < text_.size() &&
           (text_[pos_] == ' ' || text_[pos_] == '\t' || text_[pos_] == '\n' ||
            text_[pos_] == '\r'))
      ++pos_;
  }

  bool accept(char c) {
    skip_ws();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  void expect(char c) {
    if (!accept(c)) fail(ErrorKind::syntax, std::string("expected '") + c + "'");
  }

  NodePtr parse_expr() {
    NodePtr lhs = parse_term();
    for (;;) {
      if (accept('+')) {
        lhs = fold::add(lhs, parse_term());
      } else if (accept('-')) {
        lhs = fold::sub(lhs, parse_term());
      } else {
        return lhs;
      }
    }
  }

  NodePtr parse_term() {
    NodePtr lhs = parse_unary();
    for (;;) {
      if (accept('*')) {
        lhs = fold::mul(lhs, parse_unary());
      } else if (accept('/')) {
        lhs = fold::div(lhs, parse_unary());
      } else {
        return lhs;
      }
    }
  }

  NodePtr parse_unary() {
    if (accept('-')) return fold::neg(parse_unary());
    if (accept('+')) return parse_unary();
    return parse_power();
  }

  NodePtr parse_power() {
    NodePtr base = parse_primary();
    if (accept('^')) return fold::pow(base, parse_integer_exponent());
    return base;
  }

  int parse_integer_exponent() {
    skip_ws();
    bool paren = accept('(');
    bool negative = false;
    if (accept('-')) {
      negative = true;
    } else {
      accept('+');
    }
    skip_ws();
    std::size_t start = pos_;
    while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    if (start == pos_) {
      fail(ErrorKind::non_integer_exponent, "exponent must be an integer literal");
    }
    if (pos_ < text_.size() && (text_[pos_] == '.' || text_[pos_] == 'e' || text_[pos_] == 'E')) {
      fail(ErrorKind::non_integer_exponent, "exponent must be an integer literal");
    }
    int value = 0;
    auto [ptr, ec] = std::from_chars(text_.data() + start, text_.data() + pos_, value);
    if (ec != std::errc{}) {
      pos_ = start;
      fail(ErrorKind::non_integer_exponent, "exponent out of range");
    }
    if (paren) expect(')');
    return negative ? -value : value;
  }

  NodePtr parse_primary() {
    skip_ws();
    if (pos_ >= text_.size()) fail(ErrorKind::syntax, "unexpected end of input");
    char c = text_[pos_];
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return parse_number();
    if (c == '(') {
      ++pos_;
      NodePtr inner = parse_expr();
      expect(')');
      return inner;
    }
    if (std::isalpha(static_cast<unsigned char>(c))) {
      std::size_t start = pos_;
      while (pos_ < text_.size() && std::isalnum(static_cast<unsigned char>(text_[pos_]))) ++pos_;
      std::string_view ident = text_.substr(start, pos_ - start);
      if (ident == "z") return make_var();
      if (ident == "i") return make_constant(cplx{0.0, 1.0});
      if (ident == "pi") return make_constant(std::numbers::pi);
      if (ident == "e") return make_constant(std::numbers::e);
      Op fn;
      if (ident == "exp") {
        fn = Op::exp;
      } else if (ident == "sin") {
        fn = Op::sin;
      } else if (ident == "cos") {
        fn = Op::cos;
      } else if (ident == "tan") {
        fn = Op::tan;
      } else {
        pos_ = start;
        fail(ErrorKind::unknown_identifier, "unknown identifier '" + std::string(ident) + "'");
      }
      expect('(');
      NodePtr arg = parse_expr();
      expect(')');
      return fold::apply(fn, arg);
    }
    fail(ErrorKind::syntax, std::string("unexpected character '") + c + "'");
  }

  NodePtr parse_number() {
    std::size_t start = pos_;
    auto digits = [&] {
      while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    };
    digits();
    if (pos_ < text_.size() && text_[pos_] == '.') {
      ++pos_;
      digits();
    }
    // Exponent only when followed by digits, so "2e" is not swallowed.
    if (pos_ < text_.size() && (text_[pos_] == 'e' || text_[pos_] == 'E')) {
      std::size_t save = pos_;
      ++pos_;
      if (pos_ < text_.size() && (text_[pos_] == '+' || text_[pos_] == '-')) ++pos_;
      if (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
        digits();
      } else {
        pos_ = save;
      }
    }
    double value = 0.0;
    auto [ptr, ec] = std::from_chars(text_.data() + start, text_.data() + pos_, value);
    if (ec != std::errc{} || ptr != text_.data() + pos_) {
      pos_ = start;
      fail(ErrorKind::syntax, "malformed number");
    }
    return make_constant(value);
  }

  std::string_view text_;
  std::size_t pos_ = 0;
};

enum Prec { kSum = 1, kProduct = 2, kUnary = 3, kPower = 4, kAtom = 5 };

int precedence(const Node& n) {
  switch (n.op) {
    case Op::add:
    case Op::sub: return kSum;
    case Op::mul:
    case Op::div: return kProduct;
    case Op::neg: return kUnary;
    case Op::pow: return kPower;
    case Op::affine: return precedence(*n.lhs);  // rendered by substitution
    default: return kAtom;
  }
}

std::string render_constant(cplx v) {
  double re = v.real();
  double im = v.imag();
  if (im == 0.0) {
    if (std::signbit(re)) return "(-" + format_real(-re) + ")";
    return format_real(re);
  }
  if (re == 0.0 && im == 1.0) return "i";
  std::string out = "(";
  if (re != 0.0) {
    if (std::signbit(re)) out += "-";
    out += format_real(std::abs(re));
    out += im < 0 ? "-" : "+";
  } else if (im < 0) {
    out += "-";
  }
  out += format_real(std::abs(im));
  out += "*i)";
  return out;
}

std::string render_node(const NodePtr& n, const std::string& var_text);

std::string wrap(const NodePtr& child, int min_prec, const std::string& var_text) {
  std::string s = render_node(child, var_text);
  if (precedence(*child) < min_prec) return "(" + s + ")";
  return s;
}

std::string render_node(const NodePtr& n, const std::string& var_text) {
  switch (n->op) {
    case Op::constant: return render_constant(n->value);
    case Op::var: return var_text;
    case Op::add:
      return wrap(n->lhs, kSum, var_text) + " + " + wrap(n->rhs, kProduct, var_text);
    case Op::sub:
      return wrap(n->lhs, kSum, var_text) + " - " + wrap(n->rhs, kProduct, var_text);
    case Op::mul:
      return wrap(n->lhs, kProduct, var_text) + "*" + wrap(n->rhs, kPower, var_text);
    case Op::div:
      return wrap(n->lhs, kProduct, var_text) + "/" + wrap(n->rhs, kPower, var_text);
    case Op::neg: return "-" + wrap(n->lhs, kPower, var_text);
    case Op::pow: {
      std::string base = wrap(n->lhs, kAtom, var_text);
      if (n->exponent < 0) return base + "^(" + std::to_string(n->exponent) + ")";
      return base + "^" + std::to_string(n->exponent);
    }
    case Op::exp: return "exp(" + render_node(n->lhs, var_text) + ")";
    case Op::sin: return "sin(" + render_node(n->lhs, var_text) + ")";
    case Op::cos: return "cos(" + render_node(n->lhs, var_text) + ")";
    case Op::tan: return "tan(" + render_node(n->lhs, var_text) + ")";
    case Op::affine: {
      std::string inner;
      if (n->scale == cplx{1.0}) {
        inner = var_text;
      } else {
        inner = render_constant(n->scale) + "*" + var_text;
      }
      if (n->offset != cplx{}) inner += " + " + render_constant(n->offset);
      return render_node(n->lhs, "(" + inner + ")");
    }
  }
  return {};
}

}  // namespace

std::string format_real(double x) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, ptr);
}

MeroExpr parse(std::string_view text) {
  for (std::size_t k = 0; k < text.size(); ++k) {
    if (static_cast<unsigned char>(text[k]) > 127) {
      throw Error(ErrorKind::syntax, "parse error at byte " + std::to_string(k) + ": non-ASCII input",
                  k);
    }
  }
  Parser p(text);
  return MeroExpr(p.parse_all(), std::string(text));
}

std::string render(const NodePtr& n) { return render_node(n, "z"); }

std::string render(const MeroExpr& e) { return render(e.root()); }

}  // namespace nev::expr
