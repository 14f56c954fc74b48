#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "spg/jj.hpp"

namespace spg {

// [X_i, X_j] = cᵏᵢⱼ X_k.
class LieAlgebra {
 public:
  LieAlgebra() = default;
  explicit LieAlgebra(int dim);

  int dim() const { return n_; }
  const Rational& c(int k, int i, int j) const { return c_[(k * n_ + i) * n_ + j]; }
  // Sets cᵏᵢⱼ = v and cᵏⱼᵢ = −v.
  void set(int k, int i, int j, Rational v);

  RVector bracket(const RVector& u, const RVector& v) const;
  RVector basis(int i) const;
  // Witness of the first failing Jacobi triple, empty if none.
  std::string jacobi_witness() const;
  // Throws AlgebraError unless the Jacobi identity holds.
  void validate() const;

  bool operator==(const LieAlgebra& o) const { return n_ == o.n_ && c_ == o.c_; }

 private:
  int n_ = 0;
  std::vector<Rational> c_;
};

// ∇_{X_i}X_j = Aᵏᵢⱼ X_k.
class LeftInvariantConnection {
 public:
  LeftInvariantConnection() = default;
  explicit LeftInvariantConnection(int dim);

  int dim() const { return n_; }
  const Rational& a(int k, int i, int j) const { return a_[(k * n_ + i) * n_ + j]; }
  void set(int k, int i, int j, Rational v) { a_[(k * n_ + i) * n_ + j] = v; }
  bool is_torsion_free(const LieAlgebra& g) const;

 private:
  int n_ = 0;
  std::vector<Rational> a_;
};

// Constant symmetric components in the left-invariant frame; flat index as in SymArray.
class LeftInvariantSymTensor {
 public:
  LeftInvariantSymTensor() = default;
  LeftInvariantSymTensor(int dim, int degree);
  static LeftInvariantSymTensor vector(const RVector& v);
  // m must be symmetric.
  static LeftInvariantSymTensor bivector(const RMatrix& m);

  int dim() const { return n_; }
  int degree() const { return r_; }
  std::size_t size() const { return c_.size(); }
  const Rational& at(const std::vector<int>& idx) const { return c_[flat(idx)]; }
  const Rational& at_flat(std::size_t f) const { return c_[f]; }
  void set(const std::vector<int>& idx, Rational v);  // and all permutations
  std::vector<int> unflat(std::size_t f) const;
  std::size_t flat(const std::vector<int>& idx) const;
  bool is_zero() const;

  LeftInvariantSymTensor operator+(const LeftInvariantSymTensor& o) const;
  LeftInvariantSymTensor operator-(const LeftInvariantSymTensor& o) const;
  LeftInvariantSymTensor operator*(const Rational& s) const;
  bool operator==(const LeftInvariantSymTensor& o) const { return n_ == o.n_ && r_ == o.r_ && c_ == o.c_; }
  std::string str() const;  // e.g. "X1⊗X1 + 1/2 X2⊙X3"

 private:
  int n_ = 0, r_ = 0;
  std::vector<Rational> c_;
};

// Shuffle product, so X⊙X = 2X⊗X.
LeftInvariantSymTensor li_sym_product(const LeftInvariantSymTensor& a, const LeftInvariantSymTensor& b);
// θ(εⁱ) as a vector, i.e. row i of a bivector.
RVector li_apply(const LeftInvariantSymTensor& theta, int i);

LeftInvariantConnection weitzenboeck0(const LieAlgebra& g);
// ⟨X_i, X_j⟩_s = ∇_{X_i}X_j + ∇_{X_j}X_i.
RVector li_symmetric_bracket(const LeftInvariantConnection& nabla, int i, int j);
// ∇_{X_i}θ.
LeftInvariantSymTensor li_covariant_derivative(const LeftInvariantConnection& nabla, const LeftInvariantSymTensor& t,
                                               int i);
// Σ_k (ι_{εᵏ}A)⊙∇_{X_k}B + (∇_{X_k}A)⊙ι_{εᵏ}B.
LeftInvariantSymTensor li_schouten(const LeftInvariantConnection& nabla, const LeftInvariantSymTensor& a,
                                   const LeftInvariantSymTensor& b);

AlgebraVerdict li_is_symmetric_poisson(const LeftInvariantSymTensor& theta, const LeftInvariantConnection& nabla);
AlgebraVerdict li_is_strong(const LeftInvariantSymTensor& theta, const LeftInvariantConnection& nabla);
AlgebraVerdict li_is_parallel(const LeftInvariantSymTensor& theta, const LeftInvariantConnection& nabla);
AlgebraVerdict li_is_involutive(const LeftInvariantSymTensor& theta, const LieAlgebra& g);

// R(X_i, X_j)X_k = Rˡₖᵢⱼ X_l, stored at [((l*n + k)*n + i)*n + j].
struct LiCurvature {
  int n = 0;
  std::vector<Rational> r;
  const Rational& at(int l, int k, int i, int j) const { return r[((l * n + k) * n + i) * n + j]; }
  RVector apply(int i, int j, int k) const;  // R(X_i, X_j)X_k
  bool is_zero() const;
};
LiCurvature li_curvature(const LieAlgebra& g, const LeftInvariantConnection& nabla);

// Generator of the Hopf flow on unit quaternions (x, y, z, w).
std::array<std::array<double, 4>, 4> hopf_matrix(double a, double b, double c);
// exp(tM)q0 with M = hopf_matrix(a, b, c); M² = −ω²I, ω² = a² + b² + c².
std::array<double, 4> su2_flow(double a, double b, double c, const std::array<double, 4>& q0, double t);

// ---- catalog -----------------------------------------------------------------
struct LiExpected {
  bool symmetric_poisson = true;
  bool strong = true;
  bool parallel = false;
  bool involutive = true;
};

struct LiEntry {
  std::string id;
  std::string description;
  LieAlgebra algebra;
  LeftInvariantConnection nabla;
  LeftInvariantSymTensor theta;
  LiExpected expected;
};

// "abelian_n" stands for abelian_2, abelian_3, ...; the list carries abelian_3.
const std::vector<LiEntry>& li_catalog();
LiEntry li_entry(const std::string& id);
LieAlgebra abelian(int n);
LieAlgebra so3();
LieAlgebra aff1();
LieAlgebra aff1xR();
LieAlgebra heisenberg3();
// θ = λ₁X⊗X + λ₂X⊙Y + λ₃Y⊗Y
LeftInvariantSymTensor aff1_theta(Rational l1, Rational l2, Rational l3);
// ∇_XX = −X, ∇_XY = Y, all others zero.
LeftInvariantConnection aff1xR_connection();

// ---- chart bridge --------------------------------------------------------------
// Left-invariant frame X_i = Fᵃᵢ ∂_a with polynomial components.
struct PolynomialFrame {
  Chart chart;
  std::vector<std::vector<Expr>> f;  // f[i][a] = Fᵃᵢ
};
// Exact frames for abelian_n, aff1 (on a > 0), aff1xR and heisenberg3; nullopt otherwise (so3, su2).
std::optional<PolynomialFrame> polynomial_frame(const std::string& id);
// Throws AlgebraError if the frame does not realize g.
SymPoissonPair to_chart(const PolynomialFrame& frame, const LieAlgebra& g, const LeftInvariantSymTensor& theta,
                        const LeftInvariantConnection& nabla);

}  // namespace spg
