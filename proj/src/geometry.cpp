#include "spg/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <sstream>

namespace spg {

// ---- Chart ----------------------------------------------------------------

Chart::Chart(int n) : Chart(default_names(n)) {}

Chart::Chart(std::vector<std::string> names, std::vector<std::pair<double, double>> box) {
  if (names.empty()) throw GeometryError("chart needs at least one coordinate");
  for (std::size_t i = 0; i < names.size(); ++i)
    for (std::size_t j = i + 1; j < names.size(); ++j)
      if (names[i] == names[j]) throw GeometryError("duplicate coordinate name '" + names[i] + "'");
  if (box.empty()) box.assign(names.size(), {-1.0, 1.0});
  if (box.size() != names.size()) throw GeometryError("sample box size does not match chart");
  for (auto& [lo, hi] : box)
    if (!(lo <= hi)) throw GeometryError("empty sample interval");
  d_ = std::make_shared<const Data>(Data{std::move(names), std::move(box)});
}

Samples Chart::samples(int count, std::uint64_t seed) const {
  std::mt19937_64 rng(seed);
  Samples out;
  out.reserve(count);
  for (int s = 0; s < count; ++s) {
    Point p(n());
    for (int i = 0; i < n(); ++i) {
      auto [lo, hi] = d_->box[i];
      p[i] = std::uniform_real_distribution<double>(lo, hi)(rng);
    }
    out.push_back(std::move(p));
  }
  return out;
}

ScalarField Chart::coord(int i) const { return ScalarField(Expr::var(i), n()); }
ScalarField Chart::constant(double c) const { return ScalarField(Expr(c), n()); }
ScalarField Chart::parse(const std::string& text) const { return spg::parse(text, names()); }

bool Chart::operator==(const Chart& o) const {
  if (d_ == o.d_) return true;
  if (!d_ || !o.d_) return false;
  return d_->names == o.d_->names;
}

void require_same_chart(const Chart& a, const Chart& b) {
  if (a != b) throw GeometryError("chart mismatch");
}

// ---- SymArray ---------------------------------------------------------------

SymArray::SymArray(Chart chart, int degree) : chart_(std::move(chart)), r_(degree) {
  if (degree < 0) throw GeometryError("negative degree");
  if (degree > kMaxDegree) throw DegreeOverflow("degree " + std::to_string(degree) + " exceeds cap");
  std::size_t sz = 1;
  for (int i = 0; i < degree; ++i) sz *= static_cast<std::size_t>(chart_.n());
  c_.assign(sz, Expr());
}

std::size_t SymArray::flat(const std::vector<int>& idx) const {
  if (static_cast<int>(idx.size()) != r_) throw GeometryError("index rank mismatch");
  std::size_t f = 0;
  for (int i : idx) {
    if (i < 0 || i >= n()) throw std::out_of_range("tensor index out of range");
    f = f * n() + i;
  }
  return f;
}

std::vector<int> SymArray::unflat(std::size_t f) const {
  std::vector<int> idx(r_);
  for (int s = r_ - 1; s >= 0; --s) {
    idx[s] = static_cast<int>(f % n());
    f /= n();
  }
  return idx;
}

void SymArray::set(const std::vector<int>& idx, const Expr& e) {
  std::vector<int> p = idx;
  std::sort(p.begin(), p.end());
  do {
    c_[flat(p)] = e;
  } while (std::next_permutation(p.begin(), p.end()));
}

std::vector<std::vector<int>> SymArray::sorted_indices() const {
  std::vector<std::vector<int>> out;
  std::vector<int> idx(r_, 0);
  if (r_ == 0) return {idx};
  for (;;) {
    out.push_back(idx);
    int s = r_ - 1;
    while (s >= 0 && idx[s] == n() - 1) --s;
    if (s < 0) break;
    int v = idx[s] + 1;
    for (int t = s; t < r_; ++t) idx[t] = v;
  }
  return out;
}

std::vector<double> SymArray::eval(const Point& x) const {
  std::vector<double> v(c_.size());
  for (std::size_t i = 0; i < c_.size(); ++i) v[i] = c_[i].eval(x);
  return v;
}

bool SymArray::is_symmetric(const Samples& s, double tol) const {
  for (std::size_t f = 0; f < c_.size(); ++f) {
    auto idx = unflat(f);
    std::sort(idx.begin(), idx.end());
    if (spg::zero_residual(c_[f] - at(idx), s) > tol) return false;
  }
  return true;
}

double SymArray::zero_residual(const Samples& s) const {
  double worst = 0.0;
  for (const auto& idx : sorted_indices()) worst = std::max(worst, spg::zero_residual(at(idx), s));
  return worst;
}

bool SymArray::is_structurally_zero() const {
  return std::all_of(c_.begin(), c_.end(), [](const Expr& e) { return e.is_zero(); });
}

namespace {

template <class T>
T generate_impl(const Chart& c, int r, const std::function<Expr(const std::vector<int>&)>& fn) {
  T t(c, r);
  for (const auto& idx : t.sorted_indices()) t.set(idx, fn(idx));
  return t;
}

template <class T>
T combine(const T& a, const T& b, int sign) {
  require_same_chart(a.chart(), b.chart());
  if (a.degree() != b.degree()) throw GeometryError("degree mismatch in sum");
  return generate_impl<T>(a.chart(), a.degree(), [&](const std::vector<int>& i) {
    return sign > 0 ? a.at(i) + b.at(i) : a.at(i) - b.at(i);
  });
}

template <class T>
std::string to_str(const T& t, const char* kind) {
  std::ostringstream os;
  os << kind << " deg " << t.degree() << " {";
  bool first = true;
  for (const auto& idx : t.sorted_indices()) {
    if (t.at(idx).is_zero()) continue;
    if (!first) os << ", ";
    first = false;
    os << "[";
    for (std::size_t s = 0; s < idx.size(); ++s) os << (s ? "," : "") << idx[s] + 1;
    os << "]=" << t.at(idx).str(t.chart().names());
  }
  os << "}";
  return os.str();
}

}  // namespace

SymTensorField SymTensorField::scalar(const Chart& c, const Expr& f) {
  SymTensorField t(c, 0);
  t.c_[0] = f;
  return t;
}

SymTensorField SymTensorField::vector(const Chart& c, const std::vector<Expr>& comps) {
  if (static_cast<int>(comps.size()) != c.n()) throw GeometryError("vector size mismatch");
  SymTensorField t(c, 1);
  t.c_ = comps;
  return t;
}

SymTensorField SymTensorField::generate(const Chart& c, int r,
                                        const std::function<Expr(const std::vector<int>&)>& fn) {
  return generate_impl<SymTensorField>(c, r, fn);
}

SymTensorField SymTensorField::bivector(const Chart& c, const std::vector<std::vector<Expr>>& m) {
  if (static_cast<int>(m.size()) != c.n()) throw GeometryError("matrix size mismatch");
  return generate(c, 2, [&](const std::vector<int>& i) { return m[i[0]][i[1]]; });
}

SymTensorField SymTensorField::operator+(const SymTensorField& o) const { return combine(*this, o, 1); }
SymTensorField SymTensorField::operator-(const SymTensorField& o) const { return combine(*this, o, -1); }
SymTensorField SymTensorField::operator*(const Expr& f) const {
  return generate(chart_, r_, [&](const std::vector<int>& i) { return f * at(i); });
}
std::string SymTensorField::str() const { return to_str(*this, "multivector"); }

SymFormField SymFormField::scalar(const Chart& c, const Expr& f) {
  SymFormField t(c, 0);
  t.c_[0] = f;
  return t;
}

SymFormField SymFormField::covector(const Chart& c, const std::vector<Expr>& comps) {
  if (static_cast<int>(comps.size()) != c.n()) throw GeometryError("covector size mismatch");
  SymFormField t(c, 1);
  t.c_ = comps;
  return t;
}

SymFormField SymFormField::generate(const Chart& c, int r,
                                    const std::function<Expr(const std::vector<int>&)>& fn) {
  return generate_impl<SymFormField>(c, r, fn);
}

SymFormField SymFormField::matrix(const Chart& c, const std::vector<std::vector<Expr>>& m) {
  if (static_cast<int>(m.size()) != c.n()) throw GeometryError("matrix size mismatch");
  return generate(c, 2, [&](const std::vector<int>& i) { return m[i[0]][i[1]]; });
}

SymFormField SymFormField::differential(const Chart& c, const Expr& f) {
  std::vector<Expr> d;
  for (int i = 0; i < c.n(); ++i) d.push_back(f.diff(i));
  return covector(c, d);
}

SymFormField SymFormField::operator+(const SymFormField& o) const { return combine(*this, o, 1); }
SymFormField SymFormField::operator-(const SymFormField& o) const { return combine(*this, o, -1); }
SymFormField SymFormField::operator*(const Expr& f) const {
  return generate(chart_, r_, [&](const std::vector<int>& i) { return f * at(i); });
}
std::string SymFormField::str() const { return to_str(*this, "form"); }

// ---- Connection --------------------------------------------------------------

Connection::Connection(Chart chart) : chart_(std::move(chart)) {
  std::size_t n = chart_.n();
  g_.assign(n * n * n, Expr());
}

void Connection::set_symmetric(int k, int i, int j, const Expr& e) {
  set_gamma(k, i, j, e);
  set_gamma(k, j, i, e);
}

bool Connection::is_torsion_free(const Samples& s, double tol) const {
  for (int k = 0; k < n(); ++k)
    for (int i = 0; i < n(); ++i)
      for (int j = i + 1; j < n(); ++j)
        if (zero_residual(torsion(k, i, j), s) > tol) return false;
  return true;
}

void Connection::require_torsion_free() const {
  if (!is_torsion_free(chart_.samples())) throw TorsionError("connection has torsion");
}

Connection torsion_free_part(const Connection& nabla) {
  Connection out(nabla.chart());
  int n = nabla.n();
  for (int k = 0; k < n; ++k)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        out.set_gamma(k, i, j, Expr(0.5) * (nabla.gamma(k, i, j) + nabla.gamma(k, j, i)));
  return out;
}

bool CurvatureField::is_zero(const Samples& s, double tol) const {
  for (const auto& e : r_)
    if (zero_residual(e, s) > tol) return false;
  return true;
}

// ---- algebra -------------------------------------------------------------------

namespace {

template <class T>
T sym_product_impl(const T& a, const T& b) {
  require_same_chart(a.chart(), b.chart());
  int p = a.degree(), q = b.degree(), m = p + q;
  if (m > kMaxDegree) throw DegreeOverflow("symmetric product degree exceeds cap");
  std::vector<unsigned> masks;
  for (unsigned s = 0; s < (1u << m); ++s)
    if (std::popcount(s) == p) masks.push_back(s);
  return T::generate(a.chart(), m, [&](const std::vector<int>& idx) {
    Expr sum;
    std::vector<int> ia, ib;
    for (unsigned s : masks) {
      ia.clear();
      ib.clear();
      for (int t = 0; t < m; ++t) ((s >> t) & 1u ? ia : ib).push_back(idx[t]);
      sum = sum + a.at(ia) * b.at(ib);
    }
    return sum;
  });
}

template <class Out, class One, class Many>
Out contract_impl(const One& v, const Many& a) {
  require_same_chart(v.chart(), a.chart());
  if (v.degree() != 1) throw GeometryError("contraction needs a degree-1 argument");
  if (a.degree() == 0) return Out(a.chart(), 0);
  return Out::generate(a.chart(), a.degree() - 1, [&](const std::vector<int>& idx) {
    std::vector<int> full(idx.size() + 1);
    std::copy(idx.begin(), idx.end(), full.begin() + 1);
    Expr sum;
    for (int j = 0; j < a.n(); ++j) {
      full[0] = j;
      sum = sum + v.at({j}) * a.at(full);
    }
    return sum;
  });
}

double factorial(int r) {
  double f = 1;
  for (int i = 2; i <= r; ++i) f *= i;
  return f;
}

}  // namespace

SymTensorField sym_product(const SymTensorField& a, const SymTensorField& b) {
  return sym_product_impl(a, b);
}
SymFormField sym_product(const SymFormField& a, const SymFormField& b) { return sym_product_impl(a, b); }

SymTensorField contract(const SymFormField& alpha, const SymTensorField& a) {
  return contract_impl<SymTensorField>(alpha, a);
}

SymFormField contract(const SymTensorField& x, const SymFormField& phi) {
  return contract_impl<SymFormField>(x, phi);
}

std::optional<SymFormField> insert(const SymTensorField& x, const SymFormField& phi) {
  require_same_chart(x.chart(), phi.chart());
  int r = x.degree(), s = phi.degree();
  if (r > s) return std::nullopt;
  if (r == 0) return phi * x.at({});
  Expr norm(1.0 / factorial(r));
  SymTensorField dummy(x.chart(), r);
  std::size_t total = dummy.size();
  return SymFormField::generate(phi.chart(), s - r, [&](const std::vector<int>& j) {
    Expr sum;
    std::vector<int> full(s);
    std::copy(j.begin(), j.end(), full.begin() + r);
    for (std::size_t f = 0; f < total; ++f) {
      auto i = dummy.unflat(f);
      std::copy(i.begin(), i.end(), full.begin());
      sum = sum + x.at_flat(f) * phi.at(full);
    }
    return norm * sum;
  });
}

Expr pair(const SymFormField& alpha, const SymTensorField& x) {
  return contract(alpha, x).at({});
}

SymTensorField apply(const SymTensorField& theta, const SymFormField& alpha) {
  if (theta.degree() != 2) throw GeometryError("apply expects a bivector");
  return contract(alpha, theta);
}

SymFormField dx(const Chart& c, int i) {
  std::vector<Expr> comps(c.n());
  comps.at(i) = Expr(1.0);
  return SymFormField::covector(c, comps);
}

// ---- calculus --------------------------------------------------------------------

ScalarField directional(const SymTensorField& x, const Expr& f) {
  if (x.degree() != 1) throw GeometryError("directional derivative needs a vector field");
  Expr sum;
  for (int k = 0; k < x.n(); ++k) sum = sum + x.at({k}) * f.diff(k);
  return ScalarField(sum, x.n());
}

SymTensorField lie_bracket(const SymTensorField& x, const SymTensorField& y) {
  require_same_chart(x.chart(), y.chart());
  if (x.degree() != 1 || y.degree() != 1) throw GeometryError("Lie bracket needs vector fields");
  std::vector<Expr> out;
  for (int j = 0; j < x.n(); ++j)
    out.push_back(directional(x, y.at({j})).expr() - directional(y, x.at({j})).expr());
  return SymTensorField::vector(x.chart(), out);
}

std::vector<SymTensorField> covariant_derivative(const Connection& nabla, const SymTensorField& t) {
  require_same_chart(nabla.chart(), t.chart());
  std::vector<SymTensorField> out;
  int n = t.n();
  for (int k = 0; k < n; ++k) {
    out.push_back(SymTensorField::generate(t.chart(), t.degree(), [&](const std::vector<int>& idx) {
      Expr sum = t.at(idx).diff(k);
      std::vector<int> j = idx;
      for (std::size_t s = 0; s < idx.size(); ++s) {
        for (int m = 0; m < n; ++m) {
          const Expr& g = nabla.gamma(idx[s], k, m);
          if (g.is_zero()) continue;
          j[s] = m;
          sum = sum + g * t.at(j);
        }
        j[s] = idx[s];
      }
      return sum;
    }));
  }
  return out;
}

std::vector<SymFormField> covariant_derivative(const Connection& nabla, const SymFormField& t) {
  require_same_chart(nabla.chart(), t.chart());
  std::vector<SymFormField> out;
  int n = t.n();
  for (int k = 0; k < n; ++k) {
    out.push_back(SymFormField::generate(t.chart(), t.degree(), [&](const std::vector<int>& idx) {
      Expr sum = t.at(idx).diff(k);
      std::vector<int> j = idx;
      for (std::size_t s = 0; s < idx.size(); ++s) {
        for (int m = 0; m < n; ++m) {
          const Expr& g = nabla.gamma(m, k, idx[s]);
          if (g.is_zero()) continue;
          j[s] = m;
          sum = sum - g * t.at(j);
        }
        j[s] = idx[s];
      }
      return sum;
    }));
  }
  return out;
}

namespace {

template <class T>
T along(const SymTensorField& x, const std::vector<T>& d) {
  if (x.degree() != 1) throw GeometryError("covariant derivative direction must be a vector");
  T out(d.at(0).chart(), d.at(0).degree());
  for (int k = 0; k < x.n(); ++k)
    if (!x.at({k}).is_zero()) out = out + d[k] * x.at({k});
  return out;
}

}  // namespace

SymTensorField covariant_derivative_along(const Connection& nabla, const SymTensorField& x,
                                          const SymTensorField& t) {
  return along(x, covariant_derivative(nabla, t));
}

SymFormField covariant_derivative_along(const Connection& nabla, const SymTensorField& x,
                                        const SymFormField& t) {
  return along(x, covariant_derivative(nabla, t));
}

SymFormField symmetric_derivative(const Connection& nabla, const SymFormField& phi) {
  nabla.require_torsion_free();
  auto d = covariant_derivative(nabla, phi);
  return SymFormField::generate(phi.chart(), phi.degree() + 1, [&](const std::vector<int>& idx) {
    Expr sum;
    std::vector<int> rest;
    for (std::size_t s = 0; s < idx.size(); ++s) {
      rest.clear();
      for (std::size_t t = 0; t < idx.size(); ++t)
        if (t != s) rest.push_back(idx[t]);
      sum = sum + d[idx[s]].at(rest);
    }
    return sum;
  });
}

SymTensorField symmetric_bracket(const Connection& nabla, const SymTensorField& x,
                                 const SymTensorField& y) {
  nabla.require_torsion_free();
  return covariant_derivative_along(nabla, x, y) + covariant_derivative_along(nabla, y, x);
}

SymFormField symmetric_lie_derivative(const Connection& nabla, const SymTensorField& x,
                                      const SymFormField& phi) {
  SymFormField first = contract(x, symmetric_derivative(nabla, phi));
  if (phi.degree() == 0) return first;
  return first - symmetric_derivative(nabla, contract(x, phi));
}

SymTensorField schouten(const Connection& nabla, const SymTensorField& a, const SymTensorField& b) {
  require_same_chart(a.chart(), b.chart());
  nabla.require_torsion_free();
  int r = a.degree(), l = b.degree();
  if (r + l < 1) throw GeometryError("Schouten bracket of two functions is undefined");
  if (r + l - 1 > kMaxDegree) throw DegreeOverflow("Schouten bracket degree exceeds cap");
  auto da = covariant_derivative(nabla, a);
  auto db = covariant_derivative(nabla, b);
  SymTensorField out(a.chart(), r + l - 1);
  for (int k = 0; k < a.n(); ++k) {
    SymFormField e = dx(a.chart(), k);
    if (r >= 1) out = out + sym_product(contract(e, a), db[k]);
    if (l >= 1) out = out + sym_product(da[k], contract(e, b));
  }
  return out;
}

SymTensorField anticommutative_schouten(const SymTensorField& a, const SymTensorField& b) {
  require_same_chart(a.chart(), b.chart());
  int r = a.degree(), l = b.degree();
  if (r + l < 1) throw GeometryError("bracket of two functions is undefined");
  if (r + l - 1 > kMaxDegree) throw DegreeOverflow("bracket degree exceeds cap");
  SymTensorField out(a.chart(), r + l - 1);
  auto partial = [](const SymTensorField& t, int k) {
    return SymTensorField::generate(t.chart(), t.degree(),
                                    [&](const std::vector<int>& i) { return t.at(i).diff(k); });
  };
  for (int k = 0; k < a.n(); ++k) {
    SymFormField e = dx(a.chart(), k);
    if (r >= 1) out = out + sym_product(contract(e, a), partial(b, k));
    if (l >= 1) out = out - sym_product(contract(e, b), partial(a, k));
  }
  return out;
}

CurvatureField curvature(const Connection& nabla) {
  int n = nabla.n();
  std::vector<Expr> r(static_cast<std::size_t>(n) * n * n * n);
  for (int l = 0; l < n; ++l)
    for (int k = 0; k < n; ++k)
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
          Expr e = nabla.gamma(l, j, k).diff(i) - nabla.gamma(l, i, k).diff(j);
          for (int m = 0; m < n; ++m) {
            e = e + nabla.gamma(l, i, m) * nabla.gamma(m, j, k);
            e = e - nabla.gamma(l, j, m) * nabla.gamma(m, i, k);
          }
          r[((l * n + k) * n + i) * n + j] = e;
        }
  return CurvatureField(nabla.chart(), std::move(r));
}

Matrix ricci(const Connection& nabla) {
  auto r = curvature(nabla);
  int n = nabla.n();
  Matrix ric(n, std::vector<Expr>(n));
  for (int k = 0; k < n; ++k)
    for (int j = 0; j < n; ++j)
      for (int i = 0; i < n; ++i) ric[k][j] = ric[k][j] + r.at(i, k, i, j);
  return ric;
}

bool is_killing(const Connection& nabla, const SymFormField& phi, const SampleSpec& s) {
  return symmetric_derivative(nabla, phi).is_zero(phi.chart().samples(s), s.tol);
}

// ---- metrics ------------------------------------------------------------------------

Expr determinant(const Matrix& m) {
  std::size_t n = m.size();
  if (n == 0) return Expr(1.0);
  if (n == 1) return m[0][0];
  if (n == 2) return m[0][0] * m[1][1] - m[0][1] * m[1][0];
  Expr det;
  for (std::size_t c = 0; c < n; ++c) {
    if (m[0][c].is_zero()) continue;
    Matrix minor;
    for (std::size_t r = 1; r < n; ++r) {
      std::vector<Expr> row;
      for (std::size_t cc = 0; cc < n; ++cc)
        if (cc != c) row.push_back(m[r][cc]);
      minor.push_back(std::move(row));
    }
    Expr term = m[0][c] * determinant(minor);
    det = (c % 2 == 0) ? det + term : det - term;
  }
  return det;
}

Matrix inverse(const Matrix& m) {
  std::size_t n = m.size();
  Expr det = determinant(m);
  if (det.is_zero()) throw GeometryError("matrix is structurally singular");
  Matrix inv(n, std::vector<Expr>(n));
  if (n == 1) {
    inv[0][0] = Expr(1.0) / det;
    return inv;
  }
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      Matrix minor;
      for (std::size_t r = 0; r < n; ++r) {
        if (r == j) continue;
        std::vector<Expr> row;
        for (std::size_t c = 0; c < n; ++c)
          if (c != i) row.push_back(m[r][c]);
        minor.push_back(std::move(row));
      }
      Expr cof = determinant(minor);
      if ((i + j) % 2 == 1) cof = -cof;
      inv[i][j] = cof / det;
    }
  return inv;
}

Matrix to_matrix(const SymArray& t) {
  if (t.degree() != 2) throw GeometryError("to_matrix expects degree 2");
  int n = t.n();
  Matrix m(n, std::vector<Expr>(n));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) m[i][j] = t.at({i, j});
  return m;
}

namespace {

void require_nondegenerate(const Matrix& m, const Chart& c, const SampleSpec& s) {
  Expr det = determinant(m);
  for (const auto& x : c.samples(s)) {
    double scale = 0;
    double v = det.eval_scaled(x, scale);
    if (!(std::abs(v) > 1e-12 * (1.0 + scale)))
      throw GeometryError("degenerate metric at a sample point");
  }
}

}  // namespace

Connection levi_civita(const SymFormField& g, const SampleSpec& s) {
  if (g.degree() != 2) throw GeometryError("metric must have degree 2");
  Matrix gm = to_matrix(g);
  require_nondegenerate(gm, g.chart(), s);
  Matrix gi = inverse(gm);
  int n = g.n();
  Connection nabla(g.chart());
  for (int k = 0; k < n; ++k)
    for (int i = 0; i < n; ++i)
      for (int j = i; j < n; ++j) {
        Expr sum;
        for (int l = 0; l < n; ++l) {
          if (gi[k][l].is_zero()) continue;
          Expr koszul = gm[j][l].diff(i) + gm[i][l].diff(j) - gm[i][j].diff(l);
          sum = sum + gi[k][l] * koszul;
        }
        nabla.set_symmetric(k, i, j, Expr(0.5) * sum);
      }
  return nabla;
}

namespace {

// Applies m to every slot: out_I = Σ_A m[i1][a1]...m[ir][ar] in_A.
template <class Out, class In>
Out transform_all(const Matrix& m, const In& t) {
  int r = t.degree();
  std::size_t total = t.size();
  return Out::generate(t.chart(), r, [&](const std::vector<int>& idx) {
    Expr sum;
    for (std::size_t f = 0; f < total; ++f) {
      if (t.at_flat(f).is_zero()) continue;
      auto a = t.unflat(f);
      Expr prod(1.0);
      for (int s = 0; s < r && !prod.is_zero(); ++s) prod = prod * m[idx[s]][a[s]];
      if (!prod.is_zero()) sum = sum + prod * t.at_flat(f);
    }
    return sum;
  });
}

}  // namespace

SymFormField lower(const SymFormField& g, const SymTensorField& t) {
  require_same_chart(g.chart(), t.chart());
  return transform_all<SymFormField>(to_matrix(g), t);
}

SymTensorField raise(const SymTensorField& ginv, const SymFormField& phi) {
  require_same_chart(ginv.chart(), phi.chart());
  return transform_all<SymTensorField>(to_matrix(ginv), phi);
}

SymTensorField inverse_metric(const SymFormField& g) {
  return SymTensorField::bivector(g.chart(), inverse(to_matrix(g)));
}

SymFormField inverse_bivector(const SymTensorField& theta) {
  return SymFormField::matrix(theta.chart(), inverse(to_matrix(theta)));
}

}  // namespace spg
