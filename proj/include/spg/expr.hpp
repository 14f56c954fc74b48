#pragma once

#include <cstdint>
#include <memory>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace spg {

class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& msg, std::size_t pos)
      : std::runtime_error(msg + " at position " + std::to_string(pos)), pos_(pos) {}
  std::size_t position() const { return pos_; }

 private:
  std::size_t pos_;
};

// Raised when evaluation leaves the domain (x/0, sqrt or ln of a non-positive value).
class DomainError : public std::runtime_error {
 public:
  DomainError(const std::string& msg, std::string subterm)
      : std::runtime_error(msg + ": " + subterm), subterm_(std::move(subterm)) {}
  const std::string& subterm() const { return subterm_; }

 private:
  std::string subterm_;
};

// Immutable expression tree. Constructors fold constants and drop neutral
// elements (0+a, 1*a, a^1) but do no further simplification.
class Expr {
 public:
  enum class Op { Const, Var, Add, Sub, Mul, Div, Pow, Neg, Exp, Ln, Sin, Cos, Sqrt };

  Expr();  // the constant 0
  Expr(double c);
  static Expr var(int index);

  Op op() const;
  bool is_const() const;
  bool is_zero() const;  // literally the constant 0
  bool is_one() const;
  double const_value() const;
  int var_index() const;
  int exponent() const;
  Expr lhs() const;
  Expr rhs() const;

  // names only affect the subterm text of a DomainError.
  double eval(std::span<const double> x, const std::vector<std::string>* names = nullptr) const;
  // Evaluates and reports the largest |value| among all subterms.
  double eval_scaled(std::span<const double> x, double& scale,
                     const std::vector<std::string>* names = nullptr) const;

  Expr diff(int index) const;
  // Largest variable index referenced, or -1.
  int max_var() const;
  std::size_t node_count() const;
  // Replace every variable i by subs[i].
  Expr substitute(const std::vector<Expr>& subs) const;

  std::string str(const std::vector<std::string>& names = {}) const;

  friend Expr operator+(const Expr& a, const Expr& b);
  friend Expr operator-(const Expr& a, const Expr& b);
  friend Expr operator*(const Expr& a, const Expr& b);
  friend Expr operator/(const Expr& a, const Expr& b);
  friend Expr operator-(const Expr& a);
  friend Expr pow(const Expr& a, int k);
  friend Expr exp(const Expr& a);
  friend Expr ln(const Expr& a);
  friend Expr sin(const Expr& a);
  friend Expr cos(const Expr& a);
  friend Expr sqrt(const Expr& a);

  Expr& operator+=(const Expr& o) { return *this = *this + o; }
  Expr& operator-=(const Expr& o) { return *this = *this - o; }
  Expr& operator*=(const Expr& o) { return *this = *this * o; }

  struct Node;

 private:
  explicit Expr(std::shared_ptr<const Node> n) : n_(std::move(n)) {}
  static Expr make(Op op, Expr a, Expr b = Expr(), int k = 0);
  std::shared_ptr<const Node> n_;
};

Expr operator+(const Expr& a, const Expr& b);
Expr operator-(const Expr& a, const Expr& b);
Expr operator*(const Expr& a, const Expr& b);
Expr operator/(const Expr& a, const Expr& b);
Expr operator-(const Expr& a);
Expr pow(const Expr& a, int k);
Expr exp(const Expr& a);
Expr ln(const Expr& a);
Expr sin(const Expr& a);
Expr cos(const Expr& a);
Expr sqrt(const Expr& a);

// Parse per the grammar in README.md; identifiers bind to names[i] -> variable i.
Expr parse_expr(const std::string& text, const std::vector<std::string>& names);

// A function of `arity` chart coordinates.
class ScalarField {
 public:
  ScalarField() = default;
  ScalarField(Expr e, int arity, std::vector<std::string> names = {});

  const Expr& expr() const { return e_; }
  int arity() const { return arity_; }

  double operator()(std::span<const double> x) const;
  double eval_scaled(std::span<const double> x, double& scale) const;
  ScalarField diff(int i) const;
  std::string str(const std::vector<std::string>& names = {}) const;
  const std::vector<std::string>* names() const { return names_.get(); }

 private:
  Expr e_;
  int arity_ = 0;
  std::shared_ptr<const std::vector<std::string>> names_;
};

ScalarField parse(const std::string& text, const std::vector<std::string>& names);
ScalarField parse(const std::string& text, int arity);  // names x1..xn
double evaluate(const ScalarField& f, std::span<const double> x);
ScalarField differentiate(const ScalarField& f, int i);

// |f(x)| <= tol*(1+scale) at every sample, scale = max subterm magnitude at x.
bool is_zero_field(const ScalarField& f, const std::vector<std::vector<double>>& samples,
                   double tol = 1e-9);
// Largest |f(x)|/(1+scale) over the samples.
double zero_residual(const Expr& f, const std::vector<std::vector<double>>& samples,
                     const std::vector<std::string>* names = nullptr);

std::vector<std::string> default_names(int n);

}  // namespace spg
