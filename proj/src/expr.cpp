#include "parest/expr.hpp"

#include <cctype>
#include <cmath>
#include <cstdlib>

namespace parest::expr {

class Parser {
 public:
  explicit Parser(const std::string& src) : src_(src) {}

  Expression run() {
    Expression e;
    e.src_ = src_;
    out_ = &e;
    pos_ = 0;
    e.root_ = parse_expr();
    skip_ws();
    if (pos_ != src_.size())
      throw parse_error("expression: trailing input at position " + std::to_string(pos_) +
                        " in '" + src_ + "'");
    return e;
  }

 private:
  using Op = Expression::Op;

  int add_node(Op op, double value = 0, int lhs = -1, int rhs = -1) {
    out_->nodes_.push_back({op, value, lhs, rhs});
    return static_cast<int>(out_->nodes_.size()) - 1;
  }

  void skip_ws() {
    while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) ++pos_;
  }

  bool eat(char c) {
    skip_ws();
    if (pos_ < src_.size() && src_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  char peek() {
    skip_ws();
    return pos_ < src_.size() ? src_[pos_] : '\0';
  }

  [[noreturn]] void fail(const std::string& what) {
    throw parse_error("expression: " + what + " at position " + std::to_string(pos_) +
                      " in '" + src_ + "'");
  }

  int parse_expr() {
    int lhs = parse_term();
    for (;;) {
      if (eat('+'))
        lhs = add_node(Op::add, 0, lhs, parse_term());
      else if (eat('-'))
        lhs = add_node(Op::sub, 0, lhs, parse_term());
      else
        return lhs;
    }
  }

  int parse_term() {
    int lhs = parse_unary();
    for (;;) {
      if (eat('*'))
        lhs = add_node(Op::mul, 0, lhs, parse_unary());
      else if (eat('/'))
        lhs = add_node(Op::div, 0, lhs, parse_unary());
      else
        return lhs;
    }
  }

  // unary minus binds looser than '^': -x^2 reads -(x^2)
  int parse_unary() {
    if (eat('-')) return add_node(Op::neg, 0, parse_unary());
    if (eat('+')) return parse_unary();
    return parse_power();
  }

  int parse_power() {
    const int base = parse_primary();
    if (eat('^')) return add_node(Op::pow, 0, base, parse_unary());  // right associative
    return base;
  }

  int parse_primary() {
    skip_ws();
    if (pos_ >= src_.size()) fail("unexpected end of input");
    const char c = src_[pos_];
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      char* end = nullptr;
      const double v = std::strtod(src_.c_str() + pos_, &end);
      if (end == src_.c_str() + pos_) fail("malformed number");
      pos_ = end - src_.c_str();
      return add_node(Op::num, v);
    }
    if (std::isalpha(static_cast<unsigned char>(c))) {
      size_t end = pos_;
      while (end < src_.size() && std::isalpha(static_cast<unsigned char>(src_[end]))) ++end;
      const std::string word = src_.substr(pos_, end - pos_);
      pos_ = end;
      if (word == "x") return add_node(Op::var_x);
      if (word == "y") return add_node(Op::var_y);
      if (word == "t") return add_node(Op::var_t);
      if (word == "pi") return add_node(Op::num, 3.14159265358979323846);
      if (word == "e") return add_node(Op::num, 2.71828182845904523536);
      Op fn;
      if (word == "sin")
        fn = Op::fsin;
      else if (word == "cos")
        fn = Op::fcos;
      else if (word == "exp")
        fn = Op::fexp;
      else if (word == "abs")
        fn = Op::fabs;
      else
        fail("unknown identifier '" + word + "'");
      if (!eat('(')) fail("expected '(' after function name");
      const int arg = parse_expr();
      if (!eat(')')) fail("expected ')'");
      return add_node(fn, 0, arg);
    }
    if (eat('(')) {
      const int inner = parse_expr();
      if (!eat(')')) fail("expected ')'");
      return inner;
    }
    fail(std::string("unexpected character '") + c + "'");
  }

  const std::string& src_;
  size_t pos_ = 0;
  Expression* out_ = nullptr;
};

Expression Expression::parse(const std::string& src) { return Parser(src).run(); }

double Expression::eval_node(int id, double x, double y, double t) const {
  const Node& n = nodes_[id];
  switch (n.op) {
    case Op::num: return n.value;
    case Op::var_x: return x;
    case Op::var_y: return y;
    case Op::var_t: return t;
    case Op::add: return eval_node(n.lhs, x, y, t) + eval_node(n.rhs, x, y, t);
    case Op::sub: return eval_node(n.lhs, x, y, t) - eval_node(n.rhs, x, y, t);
    case Op::mul: return eval_node(n.lhs, x, y, t) * eval_node(n.rhs, x, y, t);
    case Op::div: return eval_node(n.lhs, x, y, t) / eval_node(n.rhs, x, y, t);
    case Op::pow: return std::pow(eval_node(n.lhs, x, y, t), eval_node(n.rhs, x, y, t));
    case Op::neg: return -eval_node(n.lhs, x, y, t);
    case Op::fsin: return std::sin(eval_node(n.lhs, x, y, t));
    case Op::fcos: return std::cos(eval_node(n.lhs, x, y, t));
    case Op::fexp: return std::exp(eval_node(n.lhs, x, y, t));
    case Op::fabs: return std::abs(eval_node(n.lhs, x, y, t));
  }
  return 0;
}

double Expression::eval(double x, double y, double t) const {
  if (root_ < 0) throw parse_error("expression: evaluating an empty expression");
  return eval_node(root_, x, y, t);
}

bool Expression::constant() const {
  for (const Node& n : nodes_)
    if (n.op == Op::var_x || n.op == Op::var_y || n.op == Op::var_t) return false;
  return true;
}

bool Expression::time_dependent() const {
  for (const Node& n : nodes_)
    if (n.op == Op::var_t) return true;
  return false;
}

}  // namespace parest::expr
