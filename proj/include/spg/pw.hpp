#pragma once

#include <Eigen/Dense>
#include <ostream>
#include <string>
#include <vector>

#include "spg/poisson.hpp"

namespace spg {

// Coordinates (x¹…xⁿ, p₁…pₙ) on T*M: variable i < n is xⁱ, variable n+j is p_j.
Chart phase_chart(const Chart& base, double p_range = 1.0);

struct PhaseField {
  Chart base;
  Expr e;

  int n() const { return base.n(); }
  double operator()(const std::vector<double>& xp) const { return e.eval(xp); }
  Expr dx(int i) const { return e.diff(i); }
  Expr dp(int j) const { return e.diff(base.n() + j); }
};

PhaseField pullback(const Chart& base, const Expr& f);  // pr*f
Expr momentum(const Chart& base, int j);

struct CotangentState {
  Point x;
  Point p;
  std::vector<double> flat() const;
};

// 𝒳ᵛ = (1/r!) 𝒳^{i1..ir} p_{i1}…p_{ir}.
PhaseField vertical_lift(const SymTensorField& a);

// (x, p) ordering: [[−2p_kΓᵏ, I], [I, 0]].
Eigen::MatrixXd pw_metric_matrix(const Connection& nabla, const CotangentState& s);
PhaseField pw_bracket(const Connection& nabla, const PhaseField& f, const PhaseField& g);
PhaseField canonical_bracket(const PhaseField& f, const PhaseField& g);
// 2n components: ∂H/∂pᵢ on ∂ₓᵢ, then ∂H/∂xʲ + 2p_kΓᵏᵢⱼ ∂H/∂pᵢ on ∂_{pⱼ}.
std::vector<Expr> pw_gradient(const Connection& nabla, const PhaseField& h);
// −∂H/∂pᵢ ∂ₓᵢ + ∂H/∂xʲ ∂_{pⱼ}.
std::vector<Expr> hamiltonian_vector(const PhaseField& h);

struct Splitting {
  Eigen::VectorXd horizontal;  // base component X of the horizontal lift
  Eigen::VectorXd vertical;    // P − p_kΓᵏᵢⱼXⁱ
};
// Decomposition of a tangent vector of T*M along the ∇-horizontal distribution.
Splitting split(const Connection& nabla, const CotangentState& s, const Eigen::VectorXd& v);

// ---- trajectories ----------------------------------------------------------
struct Trajectory {
  double dt = 0.0;
  std::vector<CotangentState> states;
  std::vector<std::string> channel_names;
  std::vector<std::vector<double>> channels;  // channels[c][step]

  std::size_t steps() const { return states.empty() ? 0 : states.size() - 1; }
  double time(std::size_t i) const { return static_cast<double>(i) * dt; }
  const std::vector<double>& channel(const std::string& name) const;
  // max |c(t) − c(0)|
  double drift(const std::string& name) const;
};

class BlowUp : public std::runtime_error {
 public:
  BlowUp(const std::string& msg, std::size_t step, Trajectory partial)
      : std::runtime_error(msg), step_(step), partial_(std::move(partial)) {}
  std::size_t step() const { return step_; }
  const Trajectory& partial() const { return partial_; }

 private:
  std::size_t step_;
  Trajectory partial_;
};

struct Monitor {
  std::string name;
  PhaseField f;
};

// RK4 for the PW equations of motion. Channels: "H", "v1".."vn" (= ∂H/∂p), then extras.
Trajectory integrate_pw(const Connection& nabla, const PhaseField& h, const CotangentState& s0, double dt,
                        std::size_t steps, const std::vector<Monitor>& extra = {});
// RK4 for ẍᵏ + Γᵏᵢⱼẋⁱẋʲ = 0. states[i].p holds the velocity; channels "v1".."vn".
Trajectory integrate_geodesic(const Connection& nabla, const Point& x0, const Point& v0, double dt,
                              std::size_t steps);

struct GeodesicResidual {
  std::vector<double> residual;  // ‖∇_γ̇γ̇ − ¼ιₐιₐ[θ,θ]_s‖, steps 2..N-2
  std::vector<double> rhs_norm;  // ‖¼ιₐιₐ[θ,θ]_s‖
  double max_residual = 0.0;
  double max_rhs = 0.0;
};
// Acceleration by five-point central differences on the v channel of an integrate_pw run with H = θᵛ.
GeodesicResidual monitor_geodesic_residual(const SymPoissonPair& pair, const Trajectory& traj);
// ∇_γ̇γ̇ along a geodesic run; should vanish.
std::vector<double> geodesic_self_residual(const Connection& nabla, const Trajectory& traj);
// θ(a, a) per step.
std::vector<double> monitor_speed_square(const SymPoissonPair& pair, const Trajectory& traj);
// ¼ιₐιₐ[θ,θ]_s at a state.
Eigen::VectorXd quarter_contraction(const SymTensorField& theta_theta, const CotangentState& s);

struct InvarianceReport {
  double max_base_distance = 0.0;
  double max_image_residual = 0.0;
  std::size_t steps = 0;
};
// Compares the PW curve of θᵛ from ζ0 with the ∇-geodesic from (x0, θ(ζ0)).
InvarianceReport check_locally_geodesically_invariant(const SymPoissonPair& pair, const CotangentState& z0,
                                                      double dt, std::size_t steps);

// PW dynamics of (g⁻¹ − f)ᵛ under the Levi-Civita connection of g.
// Extra channel "energy" = ½g(ẋ,ẋ) + f.
Trajectory run_newtonian(const SymFormField& g, const Expr& f, const Point& x0, const Point& v0, double dt,
                         std::size_t steps);

// Header t,x1..xn,p1..pn,<channels>; 17 significant digits.
void write_csv(std::ostream& os, const Trajectory& traj);

}  // namespace spg
