#pragma once

// Arithmetic expressions in x and y evaluated together with their first and
// second partial derivatives.

#include <memory>
#include <string>

namespace e1lab::cli {

// f with fx, fy, fxx, fxy, fyy at one point.
struct Jet2 {
  double v = 0.0;
  double x = 0.0;
  double y = 0.0;
  double xx = 0.0;
  double xy = 0.0;
  double yy = 0.0;
};

Jet2 operator+(const Jet2& a, const Jet2& b);
Jet2 operator-(const Jet2& a, const Jet2& b);
Jet2 operator*(const Jet2& a, const Jet2& b);
Jet2 operator/(const Jet2& a, const Jet2& b);

// phi(f) given phi(f), phi'(f), phi''(f).
Jet2 compose(const Jet2& f, double p0, double p1, double p2);

struct ExprNode;

// Grammar: sums and products of numbers, x, y, parentheses, unary minus,
// '^' with a constant exponent and the functions sqrt sin cos tan exp log.
// Throws InvalidArgument with the offending position on a syntax error.
class Expression {
 public:
  explicit Expression(const std::string& text);
  ~Expression();
  Expression(Expression&&) noexcept;
  Expression& operator=(Expression&&) noexcept;

  Jet2 evaluate(double x, double y) const;
  const std::string& text() const { return text_; }

 private:
  std::string text_;
  std::unique_ptr<ExprNode> root_;
};

}  // namespace e1lab::cli
