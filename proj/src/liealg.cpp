#include "spg/liealg.hpp"

#include <cmath>
#include <numeric>
#include <sstream>

namespace spg {

namespace {

std::string rat_str(const Rational& r) {
  std::ostringstream os;
  os << r.numerator();
  if (r.denominator() != 1) os << "/" << r.denominator();
  return os.str();
}

bool nonzero(const Rational& r) { return r.numerator() != 0; }

bool all_zero(const RVector& v) {
  for (const auto& x : v)
    if (nonzero(x)) return false;
  return true;
}

std::string vec_str(const RVector& v) {
  std::ostringstream os;
  bool first = true;
  for (std::size_t k = 0; k < v.size(); ++k) {
    if (!nonzero(v[k])) continue;
    if (!first) os << " + ";
    first = false;
    if (v[k] != Rational(1)) os << rat_str(v[k]) << " ";
    os << "X" << k + 1;
  }
  return first ? "0" : os.str();
}

int rank(RMatrix rows) {
  int r = 0;
  if (rows.empty()) return 0;
  int cols = static_cast<int>(rows[0].size());
  for (int col = 0; col < cols && r < static_cast<int>(rows.size()); ++col) {
    int piv = -1;
    for (int i = r; i < static_cast<int>(rows.size()); ++i)
      if (nonzero(rows[i][col])) {
        piv = i;
        break;
      }
    if (piv < 0) continue;
    std::swap(rows[piv], rows[r]);
    for (int i = r + 1; i < static_cast<int>(rows.size()); ++i) {
      if (!nonzero(rows[i][col])) continue;
      Rational f = rows[i][col] / rows[r][col];
      for (int j = col; j < cols; ++j) rows[i][j] -= f * rows[r][j];
    }
    ++r;
  }
  return r;
}

std::string idx_str(const std::vector<int>& idx) {
  std::string s;
  for (std::size_t i = 0; i < idx.size(); ++i) s += (i ? "," : "") + std::to_string(idx[i] + 1);
  return s;
}

}  // namespace

// ---- LieAlgebra ----------------------------------------------------------------

LieAlgebra::LieAlgebra(int dim) : n_(dim), c_(static_cast<std::size_t>(dim * dim * dim), Rational(0)) {
  if (dim < 1) throw AlgebraError("dimension must be positive");
}

void LieAlgebra::set(int k, int i, int j, Rational v) {
  if (i == j && nonzero(v)) throw AlgebraError("structure constants must be antisymmetric");
  c_[(k * n_ + i) * n_ + j] = v;
  c_[(k * n_ + j) * n_ + i] = -v;
}

RVector LieAlgebra::bracket(const RVector& u, const RVector& v) const {
  if (static_cast<int>(u.size()) != n_ || static_cast<int>(v.size()) != n_) throw AlgebraError("dimension mismatch");
  RVector out(n_, Rational(0));
  for (int i = 0; i < n_; ++i) {
    if (!nonzero(u[i])) continue;
    for (int j = 0; j < n_; ++j) {
      if (!nonzero(v[j])) continue;
      for (int k = 0; k < n_; ++k)
        if (nonzero(c(k, i, j))) out[k] += c(k, i, j) * u[i] * v[j];
    }
  }
  return out;
}

RVector LieAlgebra::basis(int i) const {
  RVector e(n_, Rational(0));
  e.at(i) = 1;
  return e;
}

std::string LieAlgebra::jacobi_witness() const {
  for (int i = 0; i < n_; ++i)
    for (int j = i + 1; j < n_; ++j)
      for (int k = j + 1; k < n_; ++k) {
        auto a = bracket(basis(i), bracket(basis(j), basis(k)));
        auto b = bracket(basis(j), bracket(basis(k), basis(i)));
        auto c = bracket(basis(k), bracket(basis(i), basis(j)));
        for (int m = 0; m < n_; ++m) a[m] += b[m] + c[m];
        if (!all_zero(a))
          return "Jac(X" + std::to_string(i + 1) + ",X" + std::to_string(j + 1) + ",X" + std::to_string(k + 1) +
                 ") = " + vec_str(a);
      }
  return {};
}

void LieAlgebra::validate() const {
  auto w = jacobi_witness();
  if (!w.empty()) throw AlgebraError("Jacobi identity fails: " + w);
}

// ---- connections and tensors -------------------------------------------------------

LeftInvariantConnection::LeftInvariantConnection(int dim)
    : n_(dim), a_(static_cast<std::size_t>(dim * dim * dim), Rational(0)) {}

bool LeftInvariantConnection::is_torsion_free(const LieAlgebra& g) const {
  if (g.dim() != n_) throw AlgebraError("dimension mismatch");
  for (int k = 0; k < n_; ++k)
    for (int i = 0; i < n_; ++i)
      for (int j = 0; j < n_; ++j)
        if (a(k, i, j) - a(k, j, i) != g.c(k, i, j)) return false;
  return true;
}

LeftInvariantSymTensor::LeftInvariantSymTensor(int dim, int degree) : n_(dim), r_(degree) {
  if (dim < 1 || degree < 0) throw AlgebraError("bad tensor shape");
  std::size_t size = 1;
  for (int i = 0; i < degree; ++i) size *= static_cast<std::size_t>(dim);
  c_.assign(size, Rational(0));
}

LeftInvariantSymTensor LeftInvariantSymTensor::vector(const RVector& v) {
  LeftInvariantSymTensor t(static_cast<int>(v.size()), 1);
  for (std::size_t i = 0; i < v.size(); ++i) t.c_[i] = v[i];
  return t;
}

LeftInvariantSymTensor LeftInvariantSymTensor::bivector(const RMatrix& m) {
  int n = static_cast<int>(m.size());
  LeftInvariantSymTensor t(n, 2);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      if (m[i][j] != m[j][i]) throw AlgebraError("bivector matrix is not symmetric");
      t.c_[i * n + j] = m[i][j];
    }
  return t;
}

std::size_t LeftInvariantSymTensor::flat(const std::vector<int>& idx) const {
  if (static_cast<int>(idx.size()) != r_) throw AlgebraError("index length differs from degree");
  std::size_t f = 0;
  for (int i : idx) {
    if (i < 0 || i >= n_) throw AlgebraError("index out of range");
    f = f * n_ + i;
  }
  return f;
}

std::vector<int> LeftInvariantSymTensor::unflat(std::size_t f) const {
  std::vector<int> idx(r_);
  for (int s = r_ - 1; s >= 0; --s) {
    idx[s] = static_cast<int>(f % n_);
    f /= n_;
  }
  return idx;
}

void LeftInvariantSymTensor::set(const std::vector<int>& idx, Rational v) {
  auto p = idx;
  std::sort(p.begin(), p.end());
  do c_[flat(p)] = v;
  while (std::next_permutation(p.begin(), p.end()));
}

bool LeftInvariantSymTensor::is_zero() const { return all_zero(c_); }

LeftInvariantSymTensor LeftInvariantSymTensor::operator+(const LeftInvariantSymTensor& o) const {
  if (n_ != o.n_ || r_ != o.r_) throw AlgebraError("shape mismatch");
  auto t = *this;
  for (std::size_t f = 0; f < c_.size(); ++f) t.c_[f] += o.c_[f];
  return t;
}

LeftInvariantSymTensor LeftInvariantSymTensor::operator-(const LeftInvariantSymTensor& o) const {
  return *this + o * Rational(-1);
}

LeftInvariantSymTensor LeftInvariantSymTensor::operator*(const Rational& s) const {
  auto t = *this;
  for (auto& v : t.c_) v *= s;
  return t;
}

std::string LeftInvariantSymTensor::str() const {
  std::ostringstream os;
  bool first = true;
  for (std::size_t f = 0; f < c_.size(); ++f) {
    auto idx = unflat(f);
    if (!std::is_sorted(idx.begin(), idx.end()) || !nonzero(c_[f])) continue;
    if (!first) os << " + ";
    first = false;
    if (c_[f] != Rational(1) || r_ == 0) os << rat_str(c_[f]) << (r_ ? " " : "");
    if (r_ == 2) {
      os << "X" << idx[0] + 1 << (idx[0] == idx[1] ? "⊗" : "⊙") << "X" << idx[1] + 1;
    } else if (r_ > 0) {
      os << "X[" << idx_str(idx) << "]";
    }
  }
  return first ? "0" : os.str();
}

LeftInvariantSymTensor li_sym_product(const LeftInvariantSymTensor& a, const LeftInvariantSymTensor& b) {
  if (a.dim() != b.dim()) throw AlgebraError("dimension mismatch");
  int p = a.degree(), q = b.degree(), r = p + q;
  LeftInvariantSymTensor out(a.dim(), r);
  for (std::size_t f = 0; f < out.size(); ++f) {
    auto idx = out.unflat(f);
    if (!std::is_sorted(idx.begin(), idx.end())) continue;
    // sum over position subsets of size p
    Rational s = 0;
    std::vector<bool> pick(r, false);
    std::fill(pick.begin(), pick.begin() + p, true);
    do {
      std::vector<int> ia, ib;
      for (int k = 0; k < r; ++k) (pick[k] ? ia : ib).push_back(idx[k]);
      s += a.at(ia) * b.at(ib);
    } while (std::prev_permutation(pick.begin(), pick.end()));
    out.set(idx, s);
  }
  return out;
}

RVector li_apply(const LeftInvariantSymTensor& theta, int i) {
  if (theta.degree() != 2) throw AlgebraError("θ must have degree 2");
  RVector v(theta.dim());
  for (int j = 0; j < theta.dim(); ++j) v[j] = theta.at({i, j});
  return v;
}

LeftInvariantConnection weitzenboeck0(const LieAlgebra& g) {
  int n = g.dim();
  LeftInvariantConnection nabla(n);
  for (int k = 0; k < n; ++k)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) nabla.set(k, i, j, g.c(k, i, j) / 2);
  return nabla;
}

RVector li_symmetric_bracket(const LeftInvariantConnection& nabla, int i, int j) {
  RVector v(nabla.dim());
  for (int k = 0; k < nabla.dim(); ++k) v[k] = nabla.a(k, i, j) + nabla.a(k, j, i);
  return v;
}

LeftInvariantSymTensor li_covariant_derivative(const LeftInvariantConnection& nabla, const LeftInvariantSymTensor& t,
                                               int i) {
  int n = t.dim();
  if (nabla.dim() != n) throw AlgebraError("dimension mismatch");
  LeftInvariantSymTensor out(n, t.degree());
  for (std::size_t f = 0; f < out.size(); ++f) {
    auto idx = out.unflat(f);
    if (!std::is_sorted(idx.begin(), idx.end())) continue;
    Rational s = 0;
    for (int slot = 0; slot < t.degree(); ++slot) {
      auto j = idx;
      for (int m = 0; m < n; ++m) {
        if (!nonzero(nabla.a(idx[slot], i, m))) continue;
        j[slot] = m;
        s += nabla.a(idx[slot], i, m) * t.at(j);
      }
    }
    out.set(idx, s);
  }
  return out;
}

namespace {

// ι_{εᵏ}A: contraction on the first slot.
LeftInvariantSymTensor li_contract(const LeftInvariantSymTensor& a, int k) {
  LeftInvariantSymTensor out(a.dim(), a.degree() - 1);
  for (std::size_t f = 0; f < out.size(); ++f) {
    auto idx = out.unflat(f);
    idx.insert(idx.begin(), k);
    out.set(out.unflat(f), a.at(idx));
  }
  return out;
}

}  // namespace

LeftInvariantSymTensor li_schouten(const LeftInvariantConnection& nabla, const LeftInvariantSymTensor& a,
                                   const LeftInvariantSymTensor& b) {
  if (a.degree() == 0 && b.degree() == 0) throw AlgebraError("Schouten bracket of two functions is undefined");
  int n = a.dim();
  LeftInvariantSymTensor out(n, a.degree() + b.degree() - 1);
  for (int k = 0; k < n; ++k) {
    if (a.degree() > 0) out = out + li_sym_product(li_contract(a, k), li_covariant_derivative(nabla, b, k));
    if (b.degree() > 0) out = out + li_sym_product(li_covariant_derivative(nabla, a, k), li_contract(b, k));
  }
  return out;
}

AlgebraVerdict li_is_symmetric_poisson(const LeftInvariantSymTensor& theta, const LeftInvariantConnection& nabla) {
  auto tt = li_schouten(nabla, theta, theta);
  for (std::size_t f = 0; f < tt.size(); ++f)
    if (nonzero(tt.at_flat(f))) return {false, "[θ,θ]_s[" + idx_str(tt.unflat(f)) + "] = " + rat_str(tt.at_flat(f))};
  return {};
}

AlgebraVerdict li_is_strong(const LeftInvariantSymTensor& theta, const LeftInvariantConnection& nabla) {
  int n = theta.dim();
  for (int i = 0; i < n; ++i) {
    auto v = li_apply(theta, i);
    LeftInvariantSymTensor d(n, 2);
    for (int j = 0; j < n; ++j)
      if (nonzero(v[j])) d = d + li_covariant_derivative(nabla, theta, j) * v[j];
    if (!d.is_zero()) return {false, "∇_{θ(ε" + std::to_string(i + 1) + ")}θ = " + d.str()};
  }
  return {};
}

AlgebraVerdict li_is_parallel(const LeftInvariantSymTensor& theta, const LeftInvariantConnection& nabla) {
  for (int i = 0; i < theta.dim(); ++i) {
    auto d = li_covariant_derivative(nabla, theta, i);
    if (!d.is_zero()) return {false, "∇_{X" + std::to_string(i + 1) + "}θ = " + d.str()};
  }
  return {};
}

AlgebraVerdict li_is_involutive(const LeftInvariantSymTensor& theta, const LieAlgebra& g) {
  int n = theta.dim();
  if (g.dim() != n) throw AlgebraError("dimension mismatch");
  RMatrix span;
  for (int i = 0; i < n; ++i) span.push_back(li_apply(theta, i));
  int base = rank(span);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      auto w = g.bracket(span[i], span[j]);
      auto ext = span;
      ext.push_back(w);
      if (rank(ext) > base)
        return {false, "[θ(ε" + std::to_string(i + 1) + "),θ(ε" + std::to_string(j + 1) + ")] = " + vec_str(w) +
                           " leaves im θ"};
    }
  return {};
}

RVector LiCurvature::apply(int i, int j, int k) const {
  RVector v(n);
  for (int l = 0; l < n; ++l) v[l] = at(l, k, i, j);
  return v;
}

bool LiCurvature::is_zero() const { return all_zero(r); }

LiCurvature li_curvature(const LieAlgebra& g, const LeftInvariantConnection& nabla) {
  int n = g.dim();
  if (nabla.dim() != n) throw AlgebraError("dimension mismatch");
  LiCurvature out{n, std::vector<Rational>(static_cast<std::size_t>(n * n * n * n), Rational(0))};
  for (int l = 0; l < n; ++l)
    for (int k = 0; k < n; ++k)
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
          Rational s = 0;
          for (int m = 0; m < n; ++m)
            s += nabla.a(m, j, k) * nabla.a(l, i, m) - nabla.a(m, i, k) * nabla.a(l, j, m) -
                 g.c(m, i, j) * nabla.a(l, m, k);
          out.r[((l * n + k) * n + i) * n + j] = s;
        }
  return out;
}

// ---- Hopf flow -------------------------------------------------------------------

std::array<std::array<double, 4>, 4> hopf_matrix(double a, double b, double c) {
  return {{{0, -a, -b, -c}, {a, 0, c, -b}, {b, -c, 0, a}, {c, b, -a, 0}}};
}

std::array<double, 4> su2_flow(double a, double b, double c, const std::array<double, 4>& q0, double t) {
  double norm = std::sqrt(q0[0] * q0[0] + q0[1] * q0[1] + q0[2] * q0[2] + q0[3] * q0[3]);
  if (std::abs(norm - 1.0) > 1e-12) throw std::invalid_argument("initial point must be a unit quaternion");
  auto m = hopf_matrix(a, b, c);
  double w = std::sqrt(a * a + b * b + c * c);
  double cs = std::cos(w * t), sn = w == 0.0 ? t : std::sin(w * t) / w;
  std::array<double, 4> q{};
  for (int i = 0; i < 4; ++i) {
    double mq = 0;
    for (int j = 0; j < 4; ++j) mq += m[i][j] * q0[j];
    q[i] = cs * q0[i] + sn * mq;
    if (!std::isfinite(q[i])) throw std::runtime_error("su2 flow produced a non-finite value");
  }
  return q;
}

// ---- catalog -------------------------------------------------------------------

LieAlgebra abelian(int n) { return LieAlgebra(n); }

LieAlgebra so3() {
  LieAlgebra g(3);
  g.set(2, 0, 1, 1);
  g.set(0, 1, 2, 1);
  g.set(1, 2, 0, 1);
  return g;
}

LieAlgebra aff1() {
  LieAlgebra g(2);
  g.set(1, 0, 1, 1);
  return g;
}

LieAlgebra aff1xR() {
  LieAlgebra g(3);
  g.set(1, 0, 1, 1);
  return g;
}

LieAlgebra heisenberg3() {
  LieAlgebra g(3);
  g.set(2, 0, 1, 1);
  return g;
}

LeftInvariantSymTensor aff1_theta(Rational l1, Rational l2, Rational l3) {
  return LeftInvariantSymTensor::bivector({{l1, l2}, {l2, l3}});
}

LeftInvariantConnection aff1xR_connection() {
  LeftInvariantConnection nabla(3);
  nabla.set(0, 0, 0, -1);
  nabla.set(1, 0, 1, 1);
  return nabla;
}

namespace {

LeftInvariantSymTensor diag(int n, std::initializer_list<Rational> d) {
  LeftInvariantSymTensor t(n, 2);
  int i = 0;
  for (const auto& v : d) {
    t.set({i, i}, v);
    ++i;
  }
  return t;
}

std::vector<LiEntry> build_catalog() {
  std::vector<LiEntry> cat;
  auto add = [&](std::string id, std::string desc, LieAlgebra g, LeftInvariantSymTensor theta, LiExpected e,
                 std::optional<LeftInvariantConnection> nabla = std::nullopt) {
    auto conn = nabla ? *nabla : weitzenboeck0(g);
    cat.push_back({std::move(id), std::move(desc), std::move(g), std::move(conn), std::move(theta), e});
  };
  add("abelian_n", "abelian R^3, θ = X1⊗X1 + X2⊗X2, ∇⁰", abelian(3), diag(3, {1, 1}), {true, true, true, true});
  add("so3", "so(3), θ = X1⊗X1 + X2⊗X2, ∇⁰", so3(), diag(3, {1, 1}), {true, false, false, false});
  add("aff1", "aff(1), θ = X⊗X + X⊙Y + Y⊗Y, ∇⁰", aff1(), aff1_theta(1, 1, 1), {true, true, false, true});
  LeftInvariantSymTensor xy(3, 2);
  xy.set({0, 1}, 1);
  add("aff1xR", "aff(1)⊕R, θ = X⊙Y, ∇_XX = −X, ∇_XY = Y", aff1xR(), xy, {true, true, true, true},
      aff1xR_connection());
  add("su2", "su(2), θ = ½(X1⊗X1 + X2⊗X2 + X3⊗X3), ∇⁰", so3(), diag(3, {Rational(1, 2), Rational(1, 2), Rational(1, 2)}),
      {true, true, true, true});
  add("heisenberg3", "heisenberg, θ = X1⊗X1 + X2⊗X2, ∇⁰", heisenberg3(), diag(3, {1, 1}),
      {true, false, false, false});
  return cat;
}

}  // namespace

const std::vector<LiEntry>& li_catalog() {
  static const std::vector<LiEntry> cat = build_catalog();
  return cat;
}

LiEntry li_entry(const std::string& id) {
  for (const auto& e : li_catalog())
    if (e.id == id) return e;
  const std::string prefix = "abelian_";
  if (id.rfind(prefix, 0) == 0 && id.size() > prefix.size() &&
      id.find_first_not_of("0123456789", prefix.size()) == std::string::npos) {
    int n = std::stoi(id.substr(prefix.size()));
    if (n < 1 || n > 16) throw AlgebraError("abelian dimension out of range");
    LeftInvariantSymTensor theta(n, 2);
    for (int i = 0; i < std::min(n, 2); ++i) theta.set({i, i}, 1);
    auto g = abelian(n);
    return {id, "abelian R^" + std::to_string(n) + ", ∇⁰", g, weitzenboeck0(g), theta, {true, true, true, true}};
  }
  throw AlgebraError("unknown catalog id '" + id + "'");
}

// ---- chart bridge ------------------------------------------------------------------

std::optional<PolynomialFrame> polynomial_frame(const std::string& id) {
  auto x = [](int i) { return Expr::var(i); };
  if (id == "aff1") {
    Chart c({"a", "b"}, {{0.5, 2.0}, {-1.0, 1.0}});
    return PolynomialFrame{c, {{x(0), Expr()}, {Expr(), x(0)}}};
  }
  if (id == "aff1xR") {
    Chart c({"a", "b", "z"}, {{0.5, 2.0}, {-1.0, 1.0}, {-1.0, 1.0}});
    return PolynomialFrame{c, {{x(0), Expr(), Expr()}, {Expr(), x(0), Expr()}, {Expr(), Expr(), Expr(1.0)}}};
  }
  if (id == "heisenberg3") {
    Chart c({"x", "y", "z"});
    return PolynomialFrame{c, {{Expr(1.0), Expr(), Expr()}, {Expr(), Expr(1.0), x(0)}, {Expr(), Expr(), Expr(1.0)}}};
  }
  int n = 0;
  if (id == "abelian_n") {
    n = 3;
  } else if (id.rfind("abelian_", 0) == 0) {
    n = li_entry(id).algebra.dim();
  } else {
    return std::nullopt;
  }
  PolynomialFrame f{linear_chart(n), std::vector<std::vector<Expr>>(n, std::vector<Expr>(n))};
  for (int i = 0; i < n; ++i) f.f[i][i] = Expr(1.0);
  return f;
}

SymPoissonPair to_chart(const PolynomialFrame& frame, const LieAlgebra& g, const LeftInvariantSymTensor& theta,
                        const LeftInvariantConnection& nabla) {
  const Chart& chart = frame.chart;
  int n = chart.n();
  if (g.dim() != n || theta.dim() != n || nabla.dim() != n || static_cast<int>(frame.f.size()) != n)
    throw AlgebraError("frame, algebra and tensors must share the dimension");
  if (theta.degree() != 2) throw AlgebraError("θ must have degree 2");
  auto dbl = [](const Rational& r) { return boost::rational_cast<double>(r); };

  std::vector<SymTensorField> xs;
  for (int i = 0; i < n; ++i) xs.push_back(SymTensorField::vector(chart, frame.f[i]));
  auto samples = chart.samples();
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      auto diff = lie_bracket(xs[i], xs[j]);
      for (int k = 0; k < n; ++k)
        if (nonzero(g.c(k, i, j))) diff = diff - xs[k] * Expr(dbl(g.c(k, i, j)));
      if (!diff.is_zero(samples))
        throw AlgebraError("frame does not realize [X" + std::to_string(i + 1) + ",X" + std::to_string(j + 1) + "]");
    }

  // M[a][i] = Fᵃᵢ, ∂_a = N[i][a] X_i
  Matrix m(n, std::vector<Expr>(n));
  for (int a = 0; a < n; ++a)
    for (int i = 0; i < n; ++i) m[a][i] = frame.f[i][a];
  Matrix inv = inverse(m);
  auto along = [&](int i, const Expr& f) {
    Expr s;
    for (int a = 0; a < n; ++a)
      if (!m[a][i].is_zero()) s += m[a][i] * f.diff(a);
    return s;
  };

  auto th = SymTensorField::generate(chart, 2, [&](const std::vector<int>& idx) {
    Expr s;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        if (nonzero(theta.at({i, j}))) s += Expr(dbl(theta.at({i, j}))) * m[idx[0]][i] * m[idx[1]][j];
    return s;
  });

  Connection conn(chart);
  for (int c = 0; c < n; ++c)
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b) {
        Expr s;
        for (int i = 0; i < n; ++i) {
          if (inv[i][a].is_zero()) continue;
          for (int j = 0; j < n; ++j) {
            s += inv[i][a] * along(i, inv[j][b]) * m[c][j];
            for (int k = 0; k < n; ++k)
              if (nonzero(nabla.a(k, i, j))) s += inv[i][a] * inv[j][b] * Expr(dbl(nabla.a(k, i, j))) * m[c][k];
          }
        }
        conn.set_gamma(c, a, b, s);
      }
  return SymPoissonPair(th, conn);
}

}  // namespace spg
