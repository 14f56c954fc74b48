#include "spg/jj.hpp"

#include <cmath>
#include <map>
#include <sstream>

namespace spg {

namespace {

Rational zero() { return Rational(0); }

std::string rat_str(const Rational& r) {
  std::ostringstream os;
  os << r.numerator();
  if (r.denominator() != 1) os << "/" << r.denominator();
  return os.str();
}

std::string vec_str(const RVector& v) {
  std::ostringstream os;
  bool first = true;
  for (std::size_t k = 0; k < v.size(); ++k) {
    if (v[k].numerator() == 0) continue;
    if (!first) os << (v[k] > 0 ? "+" : "");
    first = false;
    if (v[k] == Rational(-1))
      os << "-";
    else if (v[k] != Rational(1))
      os << rat_str(v[k]) << (v[k].denominator() != 1 ? " " : "");
    os << "e" << k + 1;
  }
  return first ? "0" : os.str();
}

bool is_zero(const RVector& v) {
  for (const auto& x : v)
    if (x.numerator() != 0) return false;
  return true;
}

}  // namespace

CommutativeAlgebra::CommutativeAlgebra(int dim) : n_(dim), c_(static_cast<std::size_t>(dim * dim * dim), zero()) {
  if (dim < 1) throw AlgebraError("dimension must be positive");
}

void CommutativeAlgebra::set(int k, int i, int j, Rational v) {
  c_[(k * n_ + i) * n_ + j] = v;
  c_[(k * n_ + j) * n_ + i] = v;
}

RVector CommutativeAlgebra::product(const RVector& u, const RVector& v) const {
  if (static_cast<int>(u.size()) != n_ || static_cast<int>(v.size()) != n_) throw AlgebraError("dimension mismatch");
  RVector out(n_, zero());
  for (int k = 0; k < n_; ++k)
    for (int i = 0; i < n_; ++i) {
      if (u[i].numerator() == 0) continue;
      for (int j = 0; j < n_; ++j)
        if (v[j].numerator() != 0 && c(k, i, j).numerator() != 0) out[k] += c(k, i, j) * u[i] * v[j];
    }
  return out;
}

std::vector<double> CommutativeAlgebra::product(const std::vector<double>& u, const std::vector<double>& v) const {
  if (static_cast<int>(u.size()) != n_ || static_cast<int>(v.size()) != n_) throw AlgebraError("dimension mismatch");
  std::vector<double> out(n_, 0.0);
  for (int k = 0; k < n_; ++k)
    for (int i = 0; i < n_; ++i)
      for (int j = 0; j < n_; ++j) out[k] += boost::rational_cast<double>(c(k, i, j)) * u[i] * v[j];
  return out;
}

RVector CommutativeAlgebra::basis(int i) const {
  RVector e(n_, zero());
  e.at(i) = 1;
  return e;
}

std::string CommutativeAlgebra::str() const {
  std::ostringstream os;
  bool any = false;
  for (int i = 0; i < n_; ++i)
    for (int j = i; j < n_; ++j) {
      auto p = product(basis(i), basis(j));
      if (is_zero(p)) continue;
      os << (any ? ", " : "") << "e" << i + 1 << "e" << j + 1 << "=" << vec_str(p);
      any = true;
    }
  return any ? os.str() : "0";
}

RVector jacobiator(const CommutativeAlgebra& a, const RVector& u, const RVector& v, const RVector& w) {
  auto x = a.product(u, a.product(v, w)), y = a.product(v, a.product(w, u)), z = a.product(w, a.product(u, v));
  for (std::size_t k = 0; k < x.size(); ++k) x[k] += y[k] + z[k];
  return x;
}

RVector associator(const CommutativeAlgebra& a, const RVector& u, const RVector& v, const RVector& w) {
  auto x = a.product(a.product(u, v), w), y = a.product(u, a.product(v, w));
  for (std::size_t k = 0; k < x.size(); ++k) x[k] -= y[k];
  return x;
}

namespace {

template <class F>
AlgebraVerdict all_triples(const CommutativeAlgebra& a, const char* what, F f) {
  int n = a.dim();
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) {
        auto r = f(a, a.basis(i), a.basis(j), a.basis(k));
        if (!is_zero(r)) {
          std::ostringstream os;
          os << what << "(e" << i + 1 << ",e" << j + 1 << ",e" << k + 1 << ") = " << vec_str(r);
          return {false, os.str()};
        }
      }
  return {};
}

}  // namespace

AlgebraVerdict is_jacobi_jordan(const CommutativeAlgebra& a) { return all_triples(a, "Jac", [](const CommutativeAlgebra& b, const RVector& u, const RVector& v, const RVector& w) {
    return jacobiator(b, u, v, w);
  });
}
AlgebraVerdict is_associative(const CommutativeAlgebra& a) { return all_triples(a, "assoc", associator); }

Chart linear_chart(int n) {
  if (n <= 4) {
    std::vector<std::string> names{"x", "y", "z", "t"};
    names.resize(n);
    return Chart(names);
  }
  return Chart(n);
}

SymPoissonPair to_linear_structure(const CommutativeAlgebra& a) { return to_linear_structure(a, linear_chart(a.dim())); }

SymPoissonPair to_linear_structure(const CommutativeAlgebra& a, const Chart& chart) {
  if (chart.n() != a.dim()) throw AlgebraError("chart dimension differs from algebra dimension");
  auto theta = SymTensorField::generate(chart, 2, [&](const std::vector<int>& idx) {
    Expr sum;
    for (int k = 0; k < a.dim(); ++k) {
      const Rational& c = a.c(k, idx[0], idx[1]);
      if (c.numerator() == 0) continue;
      Expr x = Expr::var(k);
      sum += c == Rational(1) ? x : Expr(boost::rational_cast<double>(c)) * x;
    }
    return sum;
  });
  return SymPoissonPair(theta, Connection(chart));
}

std::optional<Rational> to_rational(double v, long long max_den) {
  if (!std::isfinite(v)) return std::nullopt;
  // continued fraction convergents
  long long h0 = 0, h1 = 1, k0 = 1, k1 = 0;
  double x = v;
  for (int it = 0; it < 64; ++it) {
    double a = std::floor(x);
    if (std::abs(a) > 1e15) break;
    long long ai = static_cast<long long>(a);
    long long h2 = ai * h1 + h0, k2 = ai * k1 + k0;
    if (k2 > max_den) break;
    h0 = h1, h1 = h2, k0 = k1, k1 = k2;
    double frac = x - a;
    if (std::abs(static_cast<double>(h1) / static_cast<double>(k1) - v) <= 1e-15 * (1 + std::abs(v)) || frac == 0)
      break;
    x = 1.0 / frac;
  }
  if (k1 == 0) return std::nullopt;
  Rational r(h1, k1);
  if (std::abs(boost::rational_cast<double>(r) - v) > 1e-12 * (1 + std::abs(v))) return std::nullopt;
  return r;
}

CommutativeAlgebra from_linear_structure(const SymTensorField& theta) {
  if (theta.degree() != 2) throw AlgebraError("θ must have degree 2");
  const Chart& c = theta.chart();
  int n = c.n();
  Point origin(n, 0.0);
  auto samples = c.samples();
  CommutativeAlgebra a(n);
  for (const auto& idx : theta.sorted_indices()) {
    const Expr& e = theta.at(idx);
    Expr rebuilt;
    for (int k = 0; k < n; ++k) {
      double coeff = e.diff(k).eval(origin);
      auto r = to_rational(coeff);
      if (!r) throw AlgebraError("component " + e.str(c.names()) + " has a non-rational coefficient");
      a.set(k, idx[0], idx[1], *r);
      rebuilt += Expr(coeff) * Expr::var(k);
    }
    if (zero_residual(e - rebuilt, samples) > 1e-12)
      throw AlgebraError("component θ[" + std::to_string(idx[0] + 1) + "," + std::to_string(idx[1] + 1) +
                         "] = " + e.str(c.names()) + " is not homogeneous linear");
  }
  return a;
}

std::optional<RMatrix> inverse(const RMatrix& m) {
  int n = static_cast<int>(m.size());
  RMatrix a = m, inv(n, RVector(n, zero()));
  for (int i = 0; i < n; ++i) inv[i][i] = 1;
  for (int col = 0; col < n; ++col) {
    int piv = -1;
    for (int r = col; r < n; ++r)
      if (a[r][col].numerator() != 0) {
        piv = r;
        break;
      }
    if (piv < 0) return std::nullopt;
    std::swap(a[piv], a[col]);
    std::swap(inv[piv], inv[col]);
    Rational d = a[col][col];
    for (int j = 0; j < n; ++j) {
      a[col][j] /= d;
      inv[col][j] /= d;
    }
    for (int r = 0; r < n; ++r) {
      if (r == col || a[r][col].numerator() == 0) continue;
      Rational f = a[r][col];
      for (int j = 0; j < n; ++j) {
        a[r][j] -= f * a[col][j];
        inv[r][j] -= f * inv[col][j];
      }
    }
  }
  return inv;
}

CommutativeAlgebra change_basis(const CommutativeAlgebra& a, const RMatrix& p) {
  int n = a.dim();
  if (static_cast<int>(p.size()) != n) throw AlgebraError("basis change has the wrong size");
  auto q = inverse(p);
  if (!q) throw AlgebraError("basis change is singular");
  CommutativeAlgebra out(n);
  for (int x = 0; x < n; ++x)
    for (int y = x; y < n; ++y) {
      RVector fx(n), fy(n);
      for (int i = 0; i < n; ++i) {
        fx[i] = p[i][x];
        fy[i] = p[i][y];
      }
      auto prod = a.product(fx, fy);  // in e-coordinates
      for (int c = 0; c < n; ++c) {
        Rational s = 0;
        for (int k = 0; k < n; ++k) s += (*q)[c][k] * prod[k];
        out.set(c, x, y, s);
      }
    }
  return out;
}

namespace {

CommutativeAlgebra make(int n, std::initializer_list<std::tuple<int, int, int, Rational>> entries) {
  CommutativeAlgebra a(n);
  for (const auto& [k, i, j, v] : entries) a.set(k - 1, i - 1, j - 1, v);
  return a;
}

std::vector<JJEntry> build_catalog() {
  std::vector<JJEntry> cat;
  cat.push_back({"dim1", "0", CommutativeAlgebra(1), {}});
  cat.push_back({"dim2", "y ∂x⊗∂x", make(2, {{2, 1, 1, 1}}), {}});
  cat.push_back({"dim3_1", "z ∂x⊗∂x", make(3, {{3, 1, 1, 1}}), {}});
  cat.push_back({"dim3_2", "z (∂x⊗∂x + ∂y⊗∂y)", make(3, {{3, 1, 1, 1}, {3, 2, 2, 1}}), {}});
  cat.push_back({"dim4_1", "t ∂x⊗∂x", make(4, {{4, 1, 1, 1}}), {}});
  cat.push_back({"dim4_2", "t (∂x⊗∂x + ∂y⊗∂y)", make(4, {{4, 1, 1, 1}, {4, 2, 2, 1}}), {}});
  cat.push_back({"dim4_3", "t ∂x⊗∂x + z ∂y⊗∂y", make(4, {{4, 1, 1, 1}, {3, 2, 2, 1}}), {}});
  cat.push_back({"dim4_4", "t ∂x⊗∂x + z ∂x⊙∂y", make(4, {{4, 1, 1, 1}, {3, 1, 2, 1}}), {}});
  cat.push_back({"dim4_5", "t (∂x⊗∂x + ∂y⊙∂z)", make(4, {{4, 1, 1, 1}, {4, 2, 3, 1}}), {}});
  Expected r5;
  r5.associative = false;
  r5.strong = false;
  cat.push_back({"dim5_nonassoc", "x2 ∂1⊗∂1 + x5 ∂1⊙∂4 − ½x3 ∂1⊙∂5 + x3 ∂2⊙∂4",
                 make(5, {{2, 1, 1, 1}, {5, 1, 4, 1}, {3, 1, 5, Rational(-1, 2)}, {3, 2, 4, 1}}), r5});
  return cat;
}

}  // namespace

const std::vector<JJEntry>& jj_catalog() {
  static const std::vector<JJEntry> cat = build_catalog();
  return cat;
}

const JJEntry& jj_entry(const std::string& id) {
  for (const auto& e : jj_catalog())
    if (e.id == id) return e;
  throw AlgebraError("unknown catalog id '" + id + "'");
}

std::vector<SymTensorField> r5_generators(const Chart& c) {
  if (c.n() != 5) throw AlgebraError("R5 generators need a 5-dimensional chart");
  auto x = [](int i) { return Expr::var(i - 1); };
  auto vec = [&](std::map<int, Expr> comps) {
    std::vector<Expr> v(5);
    for (auto& [i, e] : comps) v[i - 1] = e;
    return SymTensorField::vector(c, v);
  };
  return {vec({{1, x(2)}, {4, x(5)}, {5, Expr(-0.5) * x(3)}}), vec({{4, x(3)}}), vec({{1, x(5)}, {2, x(3)}}),
          vec({{1, x(3)}})};
}

}  // namespace spg
