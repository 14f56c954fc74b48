#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "spg/geometry.hpp"

namespace spg {

// (θ, ∇): symmetric bivector plus torsion-free connection on the same chart.
class SymPoissonPair {
 public:
  SymPoissonPair(SymTensorField theta, Connection nabla);

  const SymTensorField& theta() const { return theta_; }
  const Connection& nabla() const { return nabla_; }
  const Chart& chart() const { return theta_.chart(); }
  int n() const { return theta_.n(); }

 private:
  SymTensorField theta_;
  Connection nabla_;
};

struct Verdict {
  bool holds = false;
  double residual = 0.0;  // max of |value|/(1+scale) over components and samples
  int samples = 0;
  std::uint64_t seed = 0;
  std::string witness;  // first failing component, empty when holds
};

ScalarField poisson_bracket(const SymPoissonPair& pair, const ScalarField& f, const ScalarField& g);
SymTensorField gradient(const SymPoissonPair& pair, const Expr& f);

// [θ,θ]_s through 2·((∇_{θ(α)}θ)(β,η) + cyclic).
SymTensorField schouten_self(const SymPoissonPair& pair);

struct SchoutenVerdict : Verdict {
  // Deviation between schouten_self and the general Schouten bracket.
  double cross_check = 0.0;
};
SchoutenVerdict is_symmetric_poisson(const SymPoissonPair& pair, const SampleSpec& s = {});
// ∇_{θ(dxⁱ)}θ = 0 for every i.
Verdict is_strong(const SymPoissonPair& pair, const SampleSpec& s = {});
Verdict is_parallel(const SymPoissonPair& pair, const SampleSpec& s = {});

// ff' + 2f²h for θ = f ∂x⊗∂x and ∇_{∂x}∂x = h ∂x.
Expr one_dim_residual(const SymPoissonPair& pair);
// θ = sign·√λ·e^{−2H} ∂x⊗∂x with ∇_{∂x}∂x = H' ∂x, so θ² = λe^{−4H}.
SymPoissonPair one_dim_family(const Chart& c, double lambda, const Expr& H, int sign = 1);

// ---- pointwise characteristic data ---------------------------------------
struct CharacteristicData {
  Point point;
  int rank = 0;
  Eigen::MatrixXd basis;        // n × rank, orthonormal columns spanning im θ
  Eigen::MatrixXd metric_gram;  // g_θ on `basis`
  int p = 0, q = 0;             // signature
  Eigen::MatrixXd theta;        // θ at the point

  // g_θ(u, v) for u, v in im θ.
  double metric(const Eigen::VectorXd& u, const Eigen::VectorXd& v) const;
  // basis · gram⁻¹ · basisᵀ, which is θ again.
  Eigen::MatrixXd reconstruct() const;
};

// Eigenvalues below 1e-8·(largest |eigenvalue| + 1) count as zero.
inline constexpr double kRankThreshold = 1e-8;

Eigen::MatrixXd eval_matrix(const SymArray& t, const Point& x);
CharacteristicData characteristic_data(const SymTensorField& theta, const Point& x);
int numeric_rank(const Eigen::MatrixXd& m);
// Least-squares residual of w after projection onto the column space of m.
double image_residual(const Eigen::MatrixXd& m, const Eigen::VectorXd& w);

enum class Involutivity { involutive_on_samples, not_involutive, inconclusive };
std::string to_string(Involutivity v);

struct InvolutivityReport {
  Involutivity verdict = Involutivity::inconclusive;
  double residual = 0.0;
  int min_rank = 0, max_rank = 0;
  int samples = 0;
  std::string witness;
};
InvolutivityReport involutivity_check(const SymPoissonPair& pair, const SampleSpec& s = {});
InvolutivityReport involutivity_check(const SymPoissonPair& pair, const Samples& s, double tol = kDefaultTol);

// ---- identities ----------------------------------------------------------
Expr jacobiator(const SymPoissonPair& pair, const Expr& f, const Expr& g, const Expr& h);
// Jac(f,g,h) − [dh(⟨X_f,X_g⟩_s) + cyclic].
Expr jacobiator_identity_check(const SymPoissonPair& pair, const Expr& f, const Expr& g, const Expr& h);
// X_{{f,g}} − ⟨X_f,X_g⟩_s.
SymTensorField strong_morphism_check(const SymPoissonPair& pair, const Expr& f, const Expr& g);

Expr scalar_curvature(const SymPoissonPair& pair);
Expr laplacian(const SymPoissonPair& pair, const Expr& f);

}  // namespace spg
