#pragma once

#include <boost/rational.hpp>
#include <optional>
#include <string>
#include <vector>

#include "spg/poisson.hpp"

namespace spg {

using Rational = boost::rational<long long>;
using RVector = std::vector<Rational>;
using RMatrix = std::vector<RVector>;  // row-major, m[row][col]

class AlgebraError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Commutative algebra e_i·e_j = cᵏᵢⱼ e_k.
class CommutativeAlgebra {
 public:
  CommutativeAlgebra() = default;
  explicit CommutativeAlgebra(int dim);

  int dim() const { return n_; }
  const Rational& c(int k, int i, int j) const { return c_[(k * n_ + i) * n_ + j]; }
  // Sets cᵏᵢⱼ and cᵏⱼᵢ.
  void set(int k, int i, int j, Rational v);

  RVector product(const RVector& u, const RVector& v) const;
  std::vector<double> product(const std::vector<double>& u, const std::vector<double>& v) const;
  RVector basis(int i) const;

  bool operator==(const CommutativeAlgebra& o) const { return n_ == o.n_ && c_ == o.c_; }
  std::string str() const;  // nonzero products, e.g. "e1e1=e2"

 private:
  int n_ = 0;
  std::vector<Rational> c_;
};

// u·(v·w) + v·(w·u) + w·(u·v)
RVector jacobiator(const CommutativeAlgebra& a, const RVector& u, const RVector& v, const RVector& w);
// (u·v)·w − u·(v·w)
RVector associator(const CommutativeAlgebra& a, const RVector& u, const RVector& v, const RVector& w);

struct AlgebraVerdict {
  bool holds = true;
  std::string witness;  // first failing basis triple
};
AlgebraVerdict is_jacobi_jordan(const CommutativeAlgebra& a);
AlgebraVerdict is_associative(const CommutativeAlgebra& a);

// Chart for V*: x, y, z, t up to dimension 4, x1..xn beyond.
Chart linear_chart(int n);
// θⁱʲ = cᵏᵢⱼ x_k with the Euclidean connection.
SymPoissonPair to_linear_structure(const CommutativeAlgebra& a);
SymPoissonPair to_linear_structure(const CommutativeAlgebra& a, const Chart& chart);
// Throws AlgebraError unless every component is homogeneous linear with rational coefficients.
CommutativeAlgebra from_linear_structure(const SymTensorField& theta);

// Structure constants in the basis f_a = Pⁱ_a e_i (columns of P).
CommutativeAlgebra change_basis(const CommutativeAlgebra& a, const RMatrix& p);
std::optional<RMatrix> inverse(const RMatrix& m);
// Best rational approximation with denominator ≤ max_den; nullopt if off by more than 1e-12.
std::optional<Rational> to_rational(double v, long long max_den = 1000000);

struct Expected {
  bool jacobi = true;
  bool associative = true;
  bool symmetric_poisson = true;
  bool strong = true;
  bool involutive = true;
};

struct JJEntry {
  std::string id;
  std::string theta;  // as printed
  CommutativeAlgebra algebra;
  Expected expected;
};

// Low-dimensional classification (dim1 trivial row plus 8 structures), then dim5_nonassoc.
const std::vector<JJEntry>& jj_catalog();
const JJEntry& jj_entry(const std::string& id);

// Characteristic module generators of dim5_nonassoc as printed:
// X1 = x2∂1 + x5∂4 − ½x3∂5, X2 = x3∂4, X3 = x5∂1 + x3∂2, X4 = x3∂1.
std::vector<SymTensorField> r5_generators(const Chart& c);

}  // namespace spg
