#pragma once

// Arithmetic expressions over x1..xn for boundary data and sources.
//
//   expr    = term { ("+" | "-") term } ;
//   term    = unary { ("*" | "/") unary } ;
//   unary   = ("+" | "-") unary | power ;
//   power   = primary [ "^" unary ] ;
//   primary = number | "pi" | variable | call | "(" expr ")" ;
//   call    = ("abs" | "min" | "max") "(" expr { "," expr } ")" ;
//   variable = "x" digit { digit } ;

#include <cctype>
#include <cmath>
#include <functional>
#include <memory>
#include <numbers>
#include <string>
#include <vector>

#include "npt/catalog.hpp"

namespace npt {

namespace detail {

struct ExprNode {
  enum class Kind { Number, Variable, Neg, Add, Sub, Mul, Div, Pow, Abs, Min, Max } kind;
  double number = 0.0;
  int var = 0;
  std::vector<std::shared_ptr<const ExprNode>> args;

  double eval(const Vec& x) const {
    switch (kind) {
      case Kind::Number: return number;
      case Kind::Variable: return x(var);
      case Kind::Neg: return -args[0]->eval(x);
      case Kind::Add: return args[0]->eval(x) + args[1]->eval(x);
      case Kind::Sub: return args[0]->eval(x) - args[1]->eval(x);
      case Kind::Mul: return args[0]->eval(x) * args[1]->eval(x);
      case Kind::Div: return args[0]->eval(x) / args[1]->eval(x);
      case Kind::Pow: return std::pow(args[0]->eval(x), args[1]->eval(x));
      case Kind::Abs: return std::abs(args[0]->eval(x));
      case Kind::Min:
      case Kind::Max: {
        double v = args[0]->eval(x);
        for (std::size_t i = 1; i < args.size(); ++i) {
          const double w = args[i]->eval(x);
          v = kind == Kind::Min ? std::min(v, w) : std::max(v, w);
        }
        return v;
      }
    }
    return 0.0;
  }
};

using NodePtr = std::shared_ptr<const ExprNode>;

class ExprParser {
 public:
  ExprParser(std::string_view src, int dim) : s_(src), dim_(dim) {}

  NodePtr parse() {
    NodePtr e = expr();
    skip();
    if (pos_ != s_.size()) error("unexpected '" + std::string(1, s_[pos_]) + "'");
    return e;
  }

 private:
  static NodePtr make(ExprNode::Kind k, std::vector<NodePtr> args = {}, double num = 0.0, int var = 0) {
    auto n = std::make_shared<ExprNode>();
    n->kind = k;
    n->args = std::move(args);
    n->number = num;
    n->var = var;
    return n;
  }

  [[noreturn]] void error(const std::string& what) const {
    fail(ErrorCode::ParseError, "expression '" + std::string(s_) + "' at " + std::to_string(pos_) + ": " + what);
  }

  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }
  bool accept(char c) {
    skip();
    if (pos_ < s_.size() && s_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }
  void expect(char c) {
    if (!accept(c)) error(std::string("expected '") + c + "'");
  }

  NodePtr expr() {
    NodePtr lhs = term();
    for (;;) {
      if (accept('+')) lhs = make(ExprNode::Kind::Add, {lhs, term()});
      else if (accept('-')) lhs = make(ExprNode::Kind::Sub, {lhs, term()});
      else return lhs;
    }
  }

  NodePtr term() {
    NodePtr lhs = unary();
    for (;;) {
      if (accept('*')) lhs = make(ExprNode::Kind::Mul, {lhs, unary()});
      else if (accept('/')) lhs = make(ExprNode::Kind::Div, {lhs, unary()});
      else return lhs;
    }
  }

  NodePtr unary() {
    if (accept('-')) return make(ExprNode::Kind::Neg, {unary()});
    if (accept('+')) return unary();
    return power();
  }

  NodePtr power() {
    NodePtr base = primary();
    if (accept('^')) return make(ExprNode::Kind::Pow, {base, unary()});
    return base;
  }

  NodePtr primary() {
    skip();
    if (pos_ >= s_.size()) error("unexpected end of input");
    const char c = s_[pos_];
    if (accept('(')) {
      NodePtr e = expr();
      expect(')');
      return e;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
    if (std::isalpha(static_cast<unsigned char>(c))) {
      const std::size_t start = pos_;
      while (pos_ < s_.size() && std::isalnum(static_cast<unsigned char>(s_[pos_]))) ++pos_;
      const std::string word(s_.substr(start, pos_ - start));
      if (word == "pi") return make(ExprNode::Kind::Number, {}, std::numbers::pi);
      if (word.size() > 1 && word[0] == 'x' && word.find_first_not_of("0123456789", 1) == std::string::npos) {
        const int i = std::stoi(word.substr(1));
        if (i < 1 || i > dim_) error("variable " + word + " outside x1..x" + std::to_string(dim_));
        return make(ExprNode::Kind::Variable, {}, 0.0, i - 1);
      }
      ExprNode::Kind k;
      if (word == "abs") k = ExprNode::Kind::Abs;
      else if (word == "min") k = ExprNode::Kind::Min;
      else if (word == "max") k = ExprNode::Kind::Max;
      else error("unknown name '" + word + "'");
      expect('(');
      std::vector<NodePtr> args{expr()};
      while (accept(',')) args.push_back(expr());
      expect(')');
      if (k == ExprNode::Kind::Abs && args.size() != 1) error("abs takes one argument");
      if (k != ExprNode::Kind::Abs && args.size() < 2) error(word + " takes at least two arguments");
      return make(k, std::move(args));
    }
    error("unexpected '" + std::string(1, c) + "'");
  }

  NodePtr number() {
    const std::string rest(s_.substr(pos_));
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(rest, &used);
    } catch (const std::exception&) {
      error("bad number");
    }
    pos_ += used;
    return make(ExprNode::Kind::Number, {}, v);
  }

  std::string_view s_;
  std::size_t pos_ = 0;
  int dim_;
};

}  // namespace detail

/// Compiled expression; callable on points of R^dim.
class Expression {
 public:
  Expression(std::string text, int dim) : text_(std::move(text)), dim_(dim), root_(detail::ExprParser(text_, dim).parse()) {}

  double operator()(const Vec& x) const {
    if (x.size() < dim_) fail(ErrorCode::DimensionMismatch, "expression in " + std::to_string(dim_) + " variables got a point in R^" + std::to_string(x.size()));
    return root_->eval(x);
  }
  const std::string& text() const { return text_; }
  int dim() const { return dim_; }
  ScalarField field() const {
    return [e = *this](const Vec& x) { return e(x); };
  }

 private:
  std::string text_;
  int dim_;
  detail::NodePtr root_;
};

}  // namespace npt
