#include "e1lab/cli/expr.hpp"

#include <cctype>
#include <cmath>
#include <cstdlib>
#include <sstream>
#include <vector>

#include "e1lab/errors.hpp"

namespace e1lab::cli {

Jet2 operator+(const Jet2& a, const Jet2& b) {
  return {a.v + b.v, a.x + b.x, a.y + b.y, a.xx + b.xx, a.xy + b.xy, a.yy + b.yy};
}

Jet2 operator-(const Jet2& a, const Jet2& b) {
  return {a.v - b.v, a.x - b.x, a.y - b.y, a.xx - b.xx, a.xy - b.xy, a.yy - b.yy};
}

Jet2 operator*(const Jet2& a, const Jet2& b) {
  return {a.v * b.v,
          a.x * b.v + a.v * b.x,
          a.y * b.v + a.v * b.y,
          a.xx * b.v + 2.0 * a.x * b.x + a.v * b.xx,
          a.xy * b.v + a.x * b.y + a.y * b.x + a.v * b.xy,
          a.yy * b.v + 2.0 * a.y * b.y + a.v * b.yy};
}

Jet2 compose(const Jet2& f, double p0, double p1, double p2) {
  return {p0,
          p1 * f.x,
          p1 * f.y,
          p2 * f.x * f.x + p1 * f.xx,
          p2 * f.x * f.y + p1 * f.xy,
          p2 * f.y * f.y + p1 * f.yy};
}

Jet2 operator/(const Jet2& a, const Jet2& b) {
  const double t = b.v;
  return a * compose(b, 1.0 / t, -1.0 / (t * t), 2.0 / (t * t * t));
}

namespace {

enum class Op { Num, X, Y, Add, Sub, Mul, Div, Neg, Pow, Sqrt, Sin, Cos, Tan, Exp, Log };

}  // namespace

struct ExprNode {
  Op op;
  double value = 0.0;
  std::unique_ptr<ExprNode> lhs;
  std::unique_ptr<ExprNode> rhs;

  bool constant() const {
    if (op == Op::X || op == Op::Y) return false;
    return (!lhs || lhs->constant()) && (!rhs || rhs->constant());
  }

  Jet2 eval(double x, double y) const {
    switch (op) {
      case Op::Num: return {value, 0, 0, 0, 0, 0};
      case Op::X: return {x, 1, 0, 0, 0, 0};
      case Op::Y: return {y, 0, 1, 0, 0, 0};
      case Op::Add: return lhs->eval(x, y) + rhs->eval(x, y);
      case Op::Sub: return lhs->eval(x, y) - rhs->eval(x, y);
      case Op::Mul: return lhs->eval(x, y) * rhs->eval(x, y);
      case Op::Div: return lhs->eval(x, y) / rhs->eval(x, y);
      case Op::Neg: return Jet2{} - lhs->eval(x, y);
      case Op::Pow: return power(lhs->eval(x, y), rhs->eval(x, y).v);
      default: break;
    }
    const Jet2 f = lhs->eval(x, y);
    const double t = f.v;
    switch (op) {
      case Op::Sqrt: {
        const double s = std::sqrt(t);
        return compose(f, s, 0.5 / s, -0.25 / (s * t));
      }
      case Op::Sin: return compose(f, std::sin(t), std::cos(t), -std::sin(t));
      case Op::Cos: return compose(f, std::cos(t), -std::sin(t), -std::cos(t));
      case Op::Tan: {
        const double tn = std::tan(t), sec2 = 1.0 + tn * tn;
        return compose(f, tn, sec2, 2.0 * tn * sec2);
      }
      case Op::Exp: {
        const double e = std::exp(t);
        return compose(f, e, e, e);
      }
      case Op::Log: return compose(f, std::log(t), 1.0 / t, -1.0 / (t * t));
      default: break;
    }
    return {};
  }

  static Jet2 power(const Jet2& f, double p) {
    const double n = std::round(p);
    if (n == p && std::abs(n) <= 64.0) {
      // Repeated multiplication keeps x^2 etc. exact at x = 0.
      Jet2 acc{1, 0, 0, 0, 0, 0};
      for (int i = 0; i < std::abs(int(n)); ++i) acc = acc * f;
      return n < 0 ? Jet2{1, 0, 0, 0, 0, 0} / acc : acc;
    }
    const double t = f.v;
    return compose(f, std::pow(t, p), p * std::pow(t, p - 1.0), p * (p - 1.0) * std::pow(t, p - 2.0));
  }
};

namespace {

class Parser {
 public:
  explicit Parser(const std::string& s) : s_(s) {}

  std::unique_ptr<ExprNode> parse() {
    auto e = sum();
    skip();
    if (pos_ != s_.size()) fail("unexpected character");
    return e;
  }

 private:
  const std::string& s_;
  std::size_t pos_ = 0;

  [[noreturn]] void fail(const std::string& what) const {
    std::ostringstream msg;
    msg << what << " at position " << pos_ << " in '" << s_ << "'";
    throw Error(ErrorKind::InvalidArgument, msg.str());
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

  static std::unique_ptr<ExprNode> node(Op op, std::unique_ptr<ExprNode> l = nullptr,
                                        std::unique_ptr<ExprNode> r = nullptr) {
    auto n = std::make_unique<ExprNode>();
    n->op = op;
    n->lhs = std::move(l);
    n->rhs = std::move(r);
    return n;
  }

  std::unique_ptr<ExprNode> sum() {
    auto lhs = product();
    for (;;) {
      if (accept('+')) {
        lhs = node(Op::Add, std::move(lhs), product());
      } else if (accept('-')) {
        lhs = node(Op::Sub, std::move(lhs), product());
      } else {
        return lhs;
      }
    }
  }

  std::unique_ptr<ExprNode> product() {
    auto lhs = unary();
    for (;;) {
      if (accept('*')) {
        lhs = node(Op::Mul, std::move(lhs), unary());
      } else if (accept('/')) {
        lhs = node(Op::Div, std::move(lhs), unary());
      } else {
        return lhs;
      }
    }
  }

  std::unique_ptr<ExprNode> unary() {
    if (accept('-')) return node(Op::Neg, unary());
    if (accept('+')) return unary();
    return power();
  }

  // Right associative; binds tighter than unary minus on its left, so -x^2
  // is -(x^2).
  std::unique_ptr<ExprNode> power() {
    auto base = primary();
    if (accept('^')) {
      auto exponent = unary();
      if (!exponent->constant()) fail("exponent must not depend on x or y");
      return node(Op::Pow, std::move(base), std::move(exponent));
    }
    return base;
  }

  std::unique_ptr<ExprNode> primary() {
    skip();
    if (pos_ >= s_.size()) fail("unexpected end of expression");
    const char c = s_[pos_];
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      const char* begin = s_.c_str() + pos_;
      char* end = nullptr;
      const double v = std::strtod(begin, &end);
      if (end == begin) fail("bad number");
      pos_ += static_cast<std::size_t>(end - begin);
      auto n = node(Op::Num);
      n->value = v;
      return n;
    }
    if (accept('(')) {
      auto e = sum();
      if (!accept(')')) fail("expected ')'");
      return e;
    }
    if (std::isalpha(static_cast<unsigned char>(c))) {
      std::size_t end = pos_;
      while (end < s_.size() && std::isalnum(static_cast<unsigned char>(s_[end]))) ++end;
      const std::string name = s_.substr(pos_, end - pos_);
      if (name == "x" || name == "y") {
        pos_ = end;
        return node(name == "x" ? Op::X : Op::Y);
      }
      if (name == "pi") {
        pos_ = end;
        auto n = node(Op::Num);
        n->value = 3.14159265358979323846;
        return n;
      }
      static const std::vector<std::pair<std::string, Op>> funcs = {
          {"sqrt", Op::Sqrt}, {"sin", Op::Sin}, {"cos", Op::Cos},
          {"tan", Op::Tan},   {"exp", Op::Exp}, {"log", Op::Log}};
      for (const auto& [fname, op] : funcs) {
        if (name == fname) {
          pos_ = end;
          if (!accept('(')) fail("expected '(' after " + fname);
          auto arg = sum();
          if (!accept(')')) fail("expected ')'");
          return node(op, std::move(arg));
        }
      }
      fail("unknown identifier '" + name + "'");
    }
    fail("unexpected character");
  }
};

}  // namespace

Expression::Expression(const std::string& text) : text_(text), root_(Parser(text_).parse()) {}
Expression::~Expression() = default;
Expression::Expression(Expression&&) noexcept = default;
Expression& Expression::operator=(Expression&&) noexcept = default;

Jet2 Expression::evaluate(double x, double y) const { return root_->eval(x, y); }

}  // namespace e1lab::cli
