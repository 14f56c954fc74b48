#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "spg/expr.hpp"

namespace spg {

using Point = std::vector<double>;
using Samples = std::vector<Point>;

inline constexpr std::uint64_t kDefaultSeed = 0x5EED;
inline constexpr int kDefaultSampleCount = 25;
inline constexpr double kDefaultTol = 1e-9;
inline constexpr int kMaxDegree = 4;

struct SampleSpec {
  int count = kDefaultSampleCount;
  std::uint64_t seed = kDefaultSeed;
  double tol = kDefaultTol;
};

class GeometryError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};
class TorsionError : public GeometryError {
 public:
  using GeometryError::GeometryError;
};
class DegreeOverflow : public GeometryError {
 public:
  using GeometryError::GeometryError;
};

class Chart {
 public:
  Chart() = default;
  explicit Chart(int n);
  Chart(std::vector<std::string> names, std::vector<std::pair<double, double>> box = {});

  int n() const { return d_ ? static_cast<int>(d_->names.size()) : 0; }
  const std::vector<std::string>& names() const { return d_->names; }
  const std::vector<std::pair<double, double>>& box() const { return d_->box; }
  // Uniform points in the sample box; deterministic for a given seed.
  Samples samples(int count = kDefaultSampleCount, std::uint64_t seed = kDefaultSeed) const;
  Samples samples(const SampleSpec& s) const { return samples(s.count, s.seed); }

  ScalarField coord(int i) const;
  ScalarField constant(double c) const;
  ScalarField parse(const std::string& text) const;

  bool operator==(const Chart& o) const;
  bool operator!=(const Chart& o) const { return !(*this == o); }

 private:
  struct Data {
    std::vector<std::string> names;
    std::vector<std::pair<double, double>> box;
  };
  std::shared_ptr<const Data> d_;
};

void require_same_chart(const Chart& a, const Chart& b);

// Totally symmetric array of n^r expressions, flat index i1*n^(r-1)+...+ir.
class SymArray {
 public:
  SymArray() = default;
  SymArray(Chart chart, int degree);

  const Chart& chart() const { return chart_; }
  int n() const { return chart_.n(); }
  int degree() const { return r_; }
  std::size_t size() const { return c_.size(); }

  const Expr& at(const std::vector<int>& idx) const { return c_[flat(idx)]; }
  const Expr& at_flat(std::size_t f) const { return c_[f]; }
  // Sets the component and all of its permutations.
  void set(const std::vector<int>& idx, const Expr& e);

  std::size_t flat(const std::vector<int>& idx) const;
  std::vector<int> unflat(std::size_t f) const;
  // Nondecreasing multi-indices.
  std::vector<std::vector<int>> sorted_indices() const;

  ScalarField component(const std::vector<int>& idx) const { return ScalarField(at(idx), n()); }
  std::vector<double> eval(const Point& x) const;
  bool is_symmetric(const Samples& s, double tol = kDefaultTol) const;
  double zero_residual(const Samples& s) const;
  bool is_zero(const Samples& s, double tol = kDefaultTol) const { return zero_residual(s) <= tol; }
  bool is_structurally_zero() const;

 protected:
  Chart chart_;
  int r_ = 0;
  std::vector<Expr> c_;
};

// Contravariant symmetric r-tensor (symmetric multivector).
class SymTensorField : public SymArray {
 public:
  using SymArray::SymArray;
  static SymTensorField scalar(const Chart& c, const Expr& f);
  static SymTensorField vector(const Chart& c, const std::vector<Expr>& comps);
  static SymTensorField generate(const Chart& c, int r,
                                 const std::function<Expr(const std::vector<int>&)>& fn);
  // Matrix form for degree 2.
  static SymTensorField bivector(const Chart& c, const std::vector<std::vector<Expr>>& m);

  SymTensorField operator+(const SymTensorField& o) const;
  SymTensorField operator-(const SymTensorField& o) const;
  SymTensorField operator*(const Expr& f) const;
  std::string str() const;
};

// Covariant symmetric r-form.
class SymFormField : public SymArray {
 public:
  using SymArray::SymArray;
  static SymFormField scalar(const Chart& c, const Expr& f);
  static SymFormField covector(const Chart& c, const std::vector<Expr>& comps);
  static SymFormField generate(const Chart& c, int r,
                               const std::function<Expr(const std::vector<int>&)>& fn);
  static SymFormField matrix(const Chart& c, const std::vector<std::vector<Expr>>& m);
  static SymFormField differential(const Chart& c, const Expr& f);

  SymFormField operator+(const SymFormField& o) const;
  SymFormField operator-(const SymFormField& o) const;
  SymFormField operator*(const Expr& f) const;
  std::string str() const;
};

using VectorField = SymTensorField;  // degree 1

// Γ^k_ij with ∇_{∂i}∂j = Γ^k_ij ∂k.
class Connection {
 public:
  Connection() = default;
  explicit Connection(Chart chart);  // Euclidean (Γ = 0)
  static Connection euclidean(const Chart& c) { return Connection(c); }

  const Chart& chart() const { return chart_; }
  int n() const { return chart_.n(); }
  const Expr& gamma(int k, int i, int j) const { return g_[(k * n() + i) * n() + j]; }
  void set_gamma(int k, int i, int j, const Expr& e) { g_[(k * n() + i) * n() + j] = e; }
  // Sets Γ^k_ij and Γ^k_ji.
  void set_symmetric(int k, int i, int j, const Expr& e);

  // T^k_ij = Γ^k_ij - Γ^k_ji.
  Expr torsion(int k, int i, int j) const { return gamma(k, i, j) - gamma(k, j, i); }
  bool is_torsion_free(const Samples& s, double tol = kDefaultTol) const;
  // Sampled check with the default protocol; throws TorsionError.
  void require_torsion_free() const;

 private:
  Chart chart_;
  std::vector<Expr> g_;
};

Connection torsion_free_part(const Connection& nabla);

// R^l_kij = ∂iΓ^l_jk - ∂jΓ^l_ik + Γ^l_im Γ^m_jk - Γ^l_jm Γ^m_ik, so R(∂i,∂j)∂k = R^l_kij ∂l.
class CurvatureField {
 public:
  CurvatureField(Chart c, std::vector<Expr> comps) : chart_(std::move(c)), r_(std::move(comps)) {}
  const Chart& chart() const { return chart_; }
  const Expr& at(int l, int k, int i, int j) const {
    int n = chart_.n();
    return r_[((l * n + k) * n + i) * n + j];
  }
  bool is_zero(const Samples& s, double tol = kDefaultTol) const;

 private:
  Chart chart_;
  std::vector<Expr> r_;
};

using Matrix = std::vector<std::vector<Expr>>;

// ---- algebra -------------------------------------------------------------
SymTensorField sym_product(const SymTensorField& a, const SymTensorField& b);
SymFormField sym_product(const SymFormField& a, const SymFormField& b);
// (ι_α A)^{i..} = α_j A^{j i..}; degree-0 input gives the zero scalar.
SymTensorField contract(const SymFormField& alpha, const SymTensorField& a);
// (ι_X φ)_{i..} = X^j φ_{j i..}.
SymFormField contract(const SymTensorField& x, const SymFormField& phi);
// ι_𝒳 φ = (1/r!) 𝒳^{I} φ_{I J}; nullopt when deg 𝒳 > deg φ.
std::optional<SymFormField> insert(const SymTensorField& x, const SymFormField& phi);
// Full pairing of a 1-form with a vector.
Expr pair(const SymFormField& alpha, const SymTensorField& x);
// A(α, ·) for a bivector, i.e. the vector θ(α).
SymTensorField apply(const SymTensorField& theta, const SymFormField& alpha);
SymFormField dx(const Chart& c, int i);

// ---- calculus ------------------------------------------------------------
ScalarField directional(const SymTensorField& x, const Expr& f);
SymTensorField lie_bracket(const SymTensorField& x, const SymTensorField& y);
// Index k holds ∇_{∂k}T.
std::vector<SymTensorField> covariant_derivative(const Connection& nabla, const SymTensorField& t);
std::vector<SymFormField> covariant_derivative(const Connection& nabla, const SymFormField& t);
SymTensorField covariant_derivative_along(const Connection& nabla, const SymTensorField& x,
                                          const SymTensorField& t);
SymFormField covariant_derivative_along(const Connection& nabla, const SymTensorField& x,
                                        const SymFormField& t);
SymFormField symmetric_derivative(const Connection& nabla, const SymFormField& phi);
SymTensorField symmetric_bracket(const Connection& nabla, const SymTensorField& x,
                                 const SymTensorField& y);
SymFormField symmetric_lie_derivative(const Connection& nabla, const SymTensorField& x,
                                      const SymFormField& phi);
SymTensorField schouten(const Connection& nabla, const SymTensorField& a, const SymTensorField& b);
SymTensorField anticommutative_schouten(const SymTensorField& a, const SymTensorField& b);
CurvatureField curvature(const Connection& nabla);
// Ric_kj = R^i_kij.
Matrix ricci(const Connection& nabla);
bool is_killing(const Connection& nabla, const SymFormField& phi, const SampleSpec& s = {});

// ---- metrics -------------------------------------------------------------
Expr determinant(const Matrix& m);
Matrix inverse(const Matrix& m);  // adjugate / determinant
Matrix to_matrix(const SymArray& t);
Connection levi_civita(const SymFormField& g, const SampleSpec& s = {});
SymFormField lower(const SymFormField& g, const SymTensorField& t);
SymTensorField raise(const SymTensorField& ginv, const SymFormField& phi);
SymTensorField inverse_metric(const SymFormField& g);
SymFormField inverse_bivector(const SymTensorField& theta);

}  // namespace spg
