#include "spg/expr.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <limits>

namespace spg {

struct Expr::Node {
  Op op;
  double c = 0.0;
  int k = 0;  // variable index or exponent
  std::shared_ptr<const Node> a, b;
  int max_var = -1;
  std::size_t count = 1;
};

namespace {

const std::shared_ptr<const Expr::Node>& zero_node() {
  static const auto z = [] {
    auto n = std::make_shared<Expr::Node>();
    n->op = Expr::Op::Const;
    return std::shared_ptr<const Expr::Node>(std::move(n));
  }();
  return z;
}

std::string fmt_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

Expr::Expr() : n_(zero_node()) {}

Expr::Expr(double c) {
  if (c == 0.0 && !std::signbit(c)) {
    n_ = zero_node();
  } else {
    auto n = std::make_shared<Node>();
    n->op = Op::Const;
    n->c = c;
    n_ = std::move(n);
  }
}

Expr Expr::var(int index) {
  if (index < 0) throw std::invalid_argument("negative variable index");
  auto n = std::make_shared<Node>();
  n->op = Op::Var;
  n->k = index;
  n->max_var = index;
  return Expr(std::shared_ptr<const Node>(std::move(n)));
}

Expr Expr::make(Op op, Expr a, Expr b, int k) {
  auto n = std::make_shared<Node>();
  n->op = op;
  n->k = k;
  n->max_var = std::max(a.max_var(), b.max_var());
  std::size_t cnt = 1 + a.node_count() + b.node_count();
  n->count = std::min<std::size_t>(cnt, std::numeric_limits<std::size_t>::max() / 4);
  n->a = std::move(a.n_);
  n->b = std::move(b.n_);
  return Expr(std::shared_ptr<const Node>(std::move(n)));
}

Expr::Op Expr::op() const { return n_->op; }
bool Expr::is_const() const { return n_->op == Op::Const; }
bool Expr::is_zero() const { return is_const() && n_->c == 0.0; }
bool Expr::is_one() const { return is_const() && n_->c == 1.0; }
double Expr::const_value() const { return n_->c; }
int Expr::var_index() const { return n_->op == Op::Var ? n_->k : -1; }
int Expr::exponent() const { return n_->k; }
Expr Expr::lhs() const { return n_->a ? Expr(n_->a) : Expr(); }
Expr Expr::rhs() const { return n_->b ? Expr(n_->b) : Expr(); }
int Expr::max_var() const { return n_->max_var; }
std::size_t Expr::node_count() const {
  if (n_->op == Op::Const || n_->op == Op::Var) return 1;
  return n_->count;
}

Expr operator+(const Expr& a, const Expr& b) {
  if (a.is_const() && b.is_const()) return Expr(a.const_value() + b.const_value());
  if (a.is_zero()) return b;
  if (b.is_zero()) return a;
  return Expr::make(Expr::Op::Add, a, b);
}

Expr operator-(const Expr& a, const Expr& b) {
  if (a.is_const() && b.is_const()) return Expr(a.const_value() - b.const_value());
  if (b.is_zero()) return a;
  if (a.is_zero()) return -b;
  return Expr::make(Expr::Op::Sub, a, b);
}

Expr operator*(const Expr& a, const Expr& b) {
  if (a.is_const() && b.is_const()) return Expr(a.const_value() * b.const_value());
  if (a.is_zero() || b.is_zero()) return Expr();
  if (a.is_one()) return b;
  if (b.is_one()) return a;
  if (a.is_const() && a.const_value() == -1.0) return -b;
  if (b.is_const() && b.const_value() == -1.0) return -a;
  return Expr::make(Expr::Op::Mul, a, b);
}

Expr operator/(const Expr& a, const Expr& b) {
  if (b.is_zero()) return Expr::make(Expr::Op::Div, a, b);  // reported at evaluation
  if (a.is_const() && b.is_const()) return Expr(a.const_value() / b.const_value());
  if (a.is_zero()) return Expr();
  if (b.is_one()) return a;
  return Expr::make(Expr::Op::Div, a, b);
}

Expr operator-(const Expr& a) {
  if (a.is_const()) return Expr(-a.const_value());
  if (a.op() == Expr::Op::Neg) return a.lhs();
  return Expr::make(Expr::Op::Neg, a);
}

Expr pow(const Expr& a, int k) {
  if (k == 0) return Expr(1.0);
  if (k == 1) return a;
  if (a.is_const() && (k > 0 || a.const_value() != 0.0)) return Expr(std::pow(a.const_value(), k));
  return Expr::make(Expr::Op::Pow, a, Expr(), k);
}

Expr exp(const Expr& a) {
  if (a.is_const()) return Expr(std::exp(a.const_value()));
  return Expr::make(Expr::Op::Exp, a);
}

Expr ln(const Expr& a) {
  if (a.is_const() && a.const_value() > 0) return Expr(std::log(a.const_value()));
  return Expr::make(Expr::Op::Ln, a);
}

Expr sin(const Expr& a) {
  if (a.is_const()) return Expr(std::sin(a.const_value()));
  return Expr::make(Expr::Op::Sin, a);
}

Expr cos(const Expr& a) {
  if (a.is_const()) return Expr(std::cos(a.const_value()));
  return Expr::make(Expr::Op::Cos, a);
}

Expr sqrt(const Expr& a) {
  if (a.is_const() && a.const_value() > 0) return Expr(std::sqrt(a.const_value()));
  return Expr::make(Expr::Op::Sqrt, a);
}

namespace {

double eval_rec(const Expr& e, std::span<const double> x, double* scale,
                const std::vector<std::string>* names) {
  using Op = Expr::Op;
  double v = 0.0;
  switch (e.op()) {
    case Op::Const:
      v = e.const_value();
      break;
    case Op::Var: {
      auto i = static_cast<std::size_t>(e.var_index());
      if (i >= x.size()) throw std::out_of_range("variable index out of range in evaluation");
      v = x[i];
      break;
    }
    case Op::Add:
      v = eval_rec(e.lhs(), x, scale, names) + eval_rec(e.rhs(), x, scale, names);
      break;
    case Op::Sub:
      v = eval_rec(e.lhs(), x, scale, names) - eval_rec(e.rhs(), x, scale, names);
      break;
    case Op::Mul:
      v = eval_rec(e.lhs(), x, scale, names) * eval_rec(e.rhs(), x, scale, names);
      break;
    case Op::Div: {
      double num = eval_rec(e.lhs(), x, scale, names);
      double den = eval_rec(e.rhs(), x, scale, names);
      if (den == 0.0) throw DomainError("division by zero", e.str(names ? *names : std::vector<std::string>{}));
      v = num / den;
      break;
    }
    case Op::Pow: {
      double b = eval_rec(e.lhs(), x, scale, names);
      int k = e.exponent();
      if (k < 0 && b == 0.0) throw DomainError("division by zero", e.str(names ? *names : std::vector<std::string>{}));
      v = std::pow(b, k);
      break;
    }
    case Op::Neg:
      v = -eval_rec(e.lhs(), x, scale, names);
      break;
    case Op::Exp:
      v = std::exp(eval_rec(e.lhs(), x, scale, names));
      break;
    case Op::Ln: {
      double a = eval_rec(e.lhs(), x, scale, names);
      if (!(a > 0.0)) throw DomainError("ln of non-positive argument", e.str(names ? *names : std::vector<std::string>{}));
      v = std::log(a);
      break;
    }
    case Op::Sin:
      v = std::sin(eval_rec(e.lhs(), x, scale, names));
      break;
    case Op::Cos:
      v = std::cos(eval_rec(e.lhs(), x, scale, names));
      break;
    case Op::Sqrt: {
      double a = eval_rec(e.lhs(), x, scale, names);
      if (!(a > 0.0)) throw DomainError("sqrt of non-positive argument", e.str(names ? *names : std::vector<std::string>{}));
      v = std::sqrt(a);
      break;
    }
  }
  if (scale) *scale = std::max(*scale, std::abs(v));
  return v;
}

}  // namespace

double Expr::eval(std::span<const double> x, const std::vector<std::string>* names) const {
  return eval_rec(*this, x, nullptr, names);
}

double Expr::eval_scaled(std::span<const double> x, double& scale,
                         const std::vector<std::string>* names) const {
  scale = 0.0;
  return eval_rec(*this, x, &scale, names);
}

Expr Expr::diff(int i) const {
  const Expr a = lhs();
  const Expr b = rhs();
  switch (n_->op) {
    case Op::Const:
      return Expr();
    case Op::Var:
      return Expr(n_->k == i ? 1.0 : 0.0);
    case Op::Add:
      return a.diff(i) + b.diff(i);
    case Op::Sub:
      return a.diff(i) - b.diff(i);
    case Op::Mul:
      return a.diff(i) * b + a * b.diff(i);
    case Op::Div: {
      Expr da = a.diff(i), db = b.diff(i);
      if (db.is_zero()) return da / b;
      return (da * b - a * db) / pow(b, 2);
    }
    case Op::Pow:
      return Expr(static_cast<double>(n_->k)) * pow(a, n_->k - 1) * a.diff(i);
    case Op::Neg:
      return -a.diff(i);
    case Op::Exp:
      return *this * a.diff(i);
    case Op::Ln:
      return a.diff(i) / a;
    case Op::Sin:
      return cos(a) * a.diff(i);
    case Op::Cos:
      return -(sin(a) * a.diff(i));
    case Op::Sqrt:
      return a.diff(i) / (Expr(2.0) * *this);
  }
  return Expr();
}

Expr Expr::substitute(const std::vector<Expr>& subs) const {
  const Expr a = lhs();
  const Expr b = rhs();
  switch (n_->op) {
    case Op::Const:
      return *this;
    case Op::Var:
      if (static_cast<std::size_t>(n_->k) >= subs.size())
        throw std::out_of_range("substitute: variable index out of range");
      return subs[n_->k];
    case Op::Add:
      return a.substitute(subs) + b.substitute(subs);
    case Op::Sub:
      return a.substitute(subs) - b.substitute(subs);
    case Op::Mul:
      return a.substitute(subs) * b.substitute(subs);
    case Op::Div:
      return a.substitute(subs) / b.substitute(subs);
    case Op::Pow:
      return pow(a.substitute(subs), n_->k);
    case Op::Neg:
      return -a.substitute(subs);
    case Op::Exp:
      return exp(a.substitute(subs));
    case Op::Ln:
      return ln(a.substitute(subs));
    case Op::Sin:
      return sin(a.substitute(subs));
    case Op::Cos:
      return cos(a.substitute(subs));
    case Op::Sqrt:
      return sqrt(a.substitute(subs));
  }
  return *this;
}

std::string Expr::str(const std::vector<std::string>& names) const {
  const Expr a = lhs();
  const Expr b = rhs();
  switch (n_->op) {
    case Op::Const: {
      double c = n_->c;
      if (c < 0 || std::signbit(c)) return "(" + fmt_double(c) + ")";
      return fmt_double(c);
    }
    case Op::Var:
      if (static_cast<std::size_t>(n_->k) < names.size()) return names[n_->k];
      return "x" + std::to_string(n_->k + 1);
    case Op::Add:
      return "(" + a.str(names) + " + " + b.str(names) + ")";
    case Op::Sub:
      return "(" + a.str(names) + " - " + b.str(names) + ")";
    case Op::Mul:
      return "(" + a.str(names) + "*" + b.str(names) + ")";
    case Op::Div:
      return "(" + a.str(names) + "/" + b.str(names) + ")";
    case Op::Pow:
      return "(" + a.str(names) + ")^" +
             (n_->k < 0 ? "(" + std::to_string(n_->k) + ")" : std::to_string(n_->k));
    case Op::Neg:
      return "(-" + a.str(names) + ")";
    case Op::Exp:
      return "exp(" + a.str(names) + ")";
    case Op::Ln:
      return "ln(" + a.str(names) + ")";
    case Op::Sin:
      return "sin(" + a.str(names) + ")";
    case Op::Cos:
      return "cos(" + a.str(names) + ")";
    case Op::Sqrt:
      return "sqrt(" + a.str(names) + ")";
  }
  return "?";
}

// ---- parser -------------------------------------------------------------

namespace {

class Parser {
 public:
  Parser(const std::string& s, const std::vector<std::string>& names) : s_(s), names_(names) {}

  Expr run() {
    skip();
    if (pos_ >= s_.size()) throw ParseError("empty expression", pos_);
    Expr e = expr();
    skip();
    if (pos_ != s_.size()) throw ParseError(std::string("unexpected '") + s_[pos_] + "'", pos_);
    return e;
  }

 private:
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
    if (!accept(c)) {
      if (pos_ >= s_.size())
        throw ParseError(std::string("expected '") + c + "' but input ended", pos_);
      throw ParseError(std::string("expected '") + c + "'", pos_);
    }
  }

  Expr expr() {
    Expr e = term();
    for (;;) {
      if (accept('+'))
        e = e + term();
      else if (accept('-'))
        e = e - term();
      else
        return e;
    }
  }

  Expr term() {
    Expr e = factor();
    for (;;) {
      if (accept('*'))
        e = e * factor();
      else if (accept('/'))
        e = e / factor();
      else
        return e;
    }
  }

  Expr factor() {
    skip();
    if (accept('-')) return -factor();
    Expr b = base();
    if (accept('^')) b = pow(b, integer());
    return b;
  }

  int integer() {
    skip();
    bool paren = accept('(');
    skip();
    bool neg = false;
    if (accept('-'))
      neg = true;
    else
      accept('+');
    skip();
    std::size_t start = pos_;
    while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    if (start == pos_) throw ParseError("exponent must be an integer", start);
    long v = std::stol(s_.substr(start, pos_ - start));
    if (v > 64) throw ParseError("exponent too large", start);
    if (paren) expect(')');
    return neg ? -static_cast<int>(v) : static_cast<int>(v);
  }

  Expr base() {
    skip();
    if (pos_ >= s_.size()) throw ParseError("unexpected end of input", pos_);
    char c = s_[pos_];
    if (c == '(') {
      ++pos_;
      Expr e = expr();
      expect(')');
      return e;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t start = pos_;
      while (pos_ < s_.size() &&
             (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_'))
        ++pos_;
      std::string id = s_.substr(start, pos_ - start);
      for (std::size_t i = 0; i < names_.size(); ++i)
        if (names_[i] == id) return Expr::var(static_cast<int>(i));
      static const char* funcs[] = {"exp", "ln", "sin", "cos", "sqrt"};
      for (const char* f : funcs) {
        if (id == f) {
          skip();
          if (pos_ >= s_.size() || s_[pos_] != '(')
            throw ParseError("expected '(' after " + id, pos_);
          ++pos_;
          Expr arg = expr();
          expect(')');
          if (id == "exp") return exp(arg);
          if (id == "ln") return ln(arg);
          if (id == "sin") return sin(arg);
          if (id == "cos") return cos(arg);
          return sqrt(arg);
        }
      }
      throw ParseError("unknown identifier '" + id + "'", start);
    }
    throw ParseError(std::string("unexpected '") + c + "'", pos_);
  }

  Expr number() {
    std::size_t start = pos_;
    while (pos_ < s_.size() && (std::isdigit(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '.'))
      ++pos_;
    if (pos_ < s_.size() && (s_[pos_] == 'e' || s_[pos_] == 'E')) {
      std::size_t save = pos_;
      ++pos_;
      if (pos_ < s_.size() && (s_[pos_] == '+' || s_[pos_] == '-')) ++pos_;
      if (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) {
        while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
      } else {
        pos_ = save;
      }
    }
    std::string tok = s_.substr(start, pos_ - start);
    try {
      std::size_t used = 0;
      double v = std::stod(tok, &used);
      if (used != tok.size()) throw ParseError("malformed number '" + tok + "'", start);
      return Expr(v);
    } catch (const std::logic_error&) {
      throw ParseError("malformed number '" + tok + "'", start);
    }
  }

  const std::string& s_;
  const std::vector<std::string>& names_;
  std::size_t pos_ = 0;
};

}  // namespace

Expr parse_expr(const std::string& text, const std::vector<std::string>& names) {
  return Parser(text, names).run();
}

std::vector<std::string> default_names(int n) {
  std::vector<std::string> v;
  for (int i = 0; i < n; ++i) v.push_back("x" + std::to_string(i + 1));
  return v;
}

// ---- ScalarField ---------------------------------------------------------

ScalarField::ScalarField(Expr e, int arity, std::vector<std::string> names)
    : e_(std::move(e)), arity_(arity) {
  if (!names.empty()) {
    if (static_cast<int>(names.size()) != arity) throw std::invalid_argument("names do not match arity");
    names_ = std::make_shared<const std::vector<std::string>>(std::move(names));
  }
  if (arity < 0) throw std::invalid_argument("negative arity");
  if (e_.max_var() >= arity) throw std::out_of_range("variable index out of range for arity");
}

double ScalarField::operator()(std::span<const double> x) const {
  if (x.size() != static_cast<std::size_t>(arity_))
    throw std::invalid_argument("point dimension does not match field arity");
  return e_.eval(x, names_.get());
}

double ScalarField::eval_scaled(std::span<const double> x, double& scale) const {
  if (x.size() != static_cast<std::size_t>(arity_))
    throw std::invalid_argument("point dimension does not match field arity");
  return e_.eval_scaled(x, scale, names_.get());
}

ScalarField ScalarField::diff(int i) const {
  if (i < 0 || i >= arity_) throw std::out_of_range("derivative index out of range");
  ScalarField out(e_.diff(i), arity_);
  out.names_ = names_;
  return out;
}

std::string ScalarField::str(const std::vector<std::string>& names) const {
  if (names.empty() && names_) return e_.str(*names_);
  return e_.str(names);
}

ScalarField parse(const std::string& text, const std::vector<std::string>& names) {
  return ScalarField(parse_expr(text, names), static_cast<int>(names.size()), names);
}

ScalarField parse(const std::string& text, int arity) { return parse(text, default_names(arity)); }

double evaluate(const ScalarField& f, std::span<const double> x) { return f(x); }

ScalarField differentiate(const ScalarField& f, int i) { return f.diff(i); }

double zero_residual(const Expr& f, const std::vector<std::vector<double>>& samples,
                     const std::vector<std::string>* names) {
  double worst = 0.0;
  if (f.is_zero()) return 0.0;
  for (const auto& x : samples) {
    double scale = 0.0;
    double v = f.eval_scaled(x, scale, names);
    if (!std::isfinite(v)) return std::numeric_limits<double>::infinity();
    worst = std::max(worst, std::abs(v) / (1.0 + scale));
  }
  return worst;
}

bool is_zero_field(const ScalarField& f, const std::vector<std::vector<double>>& samples,
                   double tol) {
  if (samples.empty()) throw std::invalid_argument("is_zero_field needs at least one sample");
  for (const auto& x : samples)
    if (x.size() != static_cast<std::size_t>(f.arity()))
      throw std::invalid_argument("sample dimension does not match field arity");
  return zero_residual(f.expr(), samples, f.names()) <= tol;
}

}  // namespace spg
