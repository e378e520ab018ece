#pragma once

// Small arithmetic expression grammar over x, y, t used by config files:
//   expr   := term (('+'|'-') term)*
//   term   := factor (('*'|'/') factor)*
//   factor := unary ('^' factor)?
//   unary  := ('+'|'-') unary | primary
//   primary:= number | 'x' | 'y' | 't' | 'pi' | 'e' | func '(' expr ')' | '(' expr ')'
// with func one of sin, cos, exp, abs.  Parsed by recursive descent.

#include <memory>
#include <string>
#include <vector>

#include "parest/errors.hpp"

namespace parest::expr {

class Expression {
 public:
  Expression() = default;
  static Expression parse(const std::string& src);  // throws parse_error

  double eval(double x, double y, double t) const;
  bool constant() const;              // no variable references
  bool time_dependent() const;        // references t
  const std::string& source() const { return src_; }

 private:
  enum class Op : unsigned char {
    num, var_x, var_y, var_t, add, sub, mul, div, pow, neg, fsin, fcos, fexp, fabs
  };
  struct Node {
    Op op;
    double value = 0;
    int lhs = -1, rhs = -1;
  };
  double eval_node(int id, double x, double y, double t) const;

  std::string src_;
  std::vector<Node> nodes_;
  int root_ = -1;

  friend class Parser;
};

}  // namespace parest::expr
