#include "spg/pw.hpp"

#include <cmath>
#include <cstdio>
#include <functional>

namespace spg {

Chart phase_chart(const Chart& base, double p_range) {
  auto names = base.names();
  auto box = base.box();
  for (const auto& nm : base.names()) {
    names.push_back("p_" + nm);
    box.push_back({-p_range, p_range});
  }
  return Chart(names, box);
}

PhaseField pullback(const Chart& base, const Expr& f) { return {base, f}; }

Expr momentum(const Chart& base, int j) { return Expr::var(base.n() + j); }

std::vector<double> CotangentState::flat() const {
  std::vector<double> v(x);
  v.insert(v.end(), p.begin(), p.end());
  return v;
}

PhaseField vertical_lift(const SymTensorField& a) {
  const Chart& c = a.chart();
  Expr sum;
  for (const auto& idx : a.sorted_indices()) {
    const Expr& comp = a.at(idx);
    if (comp.is_zero()) continue;
    // (1/r!)·(number of orderings) = 1/Π mᵢ!
    double weight = 1.0;
    Expr mono(1.0);
    std::size_t s = 0;
    while (s < idx.size()) {
      std::size_t e = s;
      while (e < idx.size() && idx[e] == idx[s]) ++e;
      for (std::size_t m = 2; m <= e - s; ++m) weight /= static_cast<double>(m);
      mono = mono * pow(momentum(c, idx[s]), static_cast<int>(e - s));
      s = e;
    }
    sum += Expr(weight) * comp * mono;
  }
  return {c, sum};
}

Eigen::MatrixXd pw_metric_matrix(const Connection& nabla, const CotangentState& s) {
  int n = nabla.n();
  Eigen::MatrixXd g = Eigen::MatrixXd::Zero(2 * n, 2 * n);
  for (int i = 0; i < n; ++i) {
    g(i, n + i) = g(n + i, i) = 1.0;
    for (int j = 0; j < n; ++j) {
      double a = 0;
      for (int k = 0; k < n; ++k) a += s.p[k] * nabla.gamma(k, i, j).eval(s.x);
      g(i, j) = -2.0 * a;
    }
  }
  return g;
}

namespace {
void require_base(const Chart& a, const Chart& b) { require_same_chart(a, b); }
}  // namespace

PhaseField pw_bracket(const Connection& nabla, const PhaseField& f, const PhaseField& g) {
  require_base(f.base, g.base);
  require_base(f.base, nabla.chart());
  int n = f.n();
  Expr sum;
  std::vector<Expr> fp(n), gp(n);
  for (int i = 0; i < n; ++i) {
    fp[i] = f.dp(i);
    gp[i] = g.dp(i);
    sum += f.dx(i) * gp[i] + fp[i] * g.dx(i);
  }
  for (int k = 0; k < n; ++k)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        const Expr& gam = nabla.gamma(k, i, j);
        if (gam.is_zero() || fp[i].is_zero() || gp[j].is_zero()) continue;
        sum += Expr(2.0) * momentum(f.base, k) * gam * fp[i] * gp[j];
      }
  return {f.base, sum};
}

PhaseField canonical_bracket(const PhaseField& f, const PhaseField& g) {
  require_base(f.base, g.base);
  Expr sum;
  for (int i = 0; i < f.n(); ++i) sum += f.dx(i) * g.dp(i) - g.dx(i) * f.dp(i);
  return {f.base, sum};
}

std::vector<Expr> pw_gradient(const Connection& nabla, const PhaseField& h) {
  require_base(nabla.chart(), h.base);
  int n = h.n();
  std::vector<Expr> out(2 * n);
  std::vector<Expr> hp(n);
  for (int i = 0; i < n; ++i) out[i] = hp[i] = h.dp(i);
  for (int j = 0; j < n; ++j) {
    Expr e = h.dx(j);
    for (int k = 0; k < n; ++k)
      for (int i = 0; i < n; ++i) {
        const Expr& gam = nabla.gamma(k, i, j);
        if (gam.is_zero() || hp[i].is_zero()) continue;
        e += Expr(2.0) * momentum(h.base, k) * gam * hp[i];
      }
    out[n + j] = e;
  }
  return out;
}

std::vector<Expr> hamiltonian_vector(const PhaseField& h) {
  int n = h.n();
  std::vector<Expr> out(2 * n);
  for (int i = 0; i < n; ++i) {
    out[i] = -h.dp(i);
    out[n + i] = h.dx(i);
  }
  return out;
}

Splitting split(const Connection& nabla, const CotangentState& s, const Eigen::VectorXd& v) {
  int n = nabla.n();
  Splitting out{v.head(n), v.tail(n)};
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i)
      for (int k = 0; k < n; ++k) out.vertical[j] -= s.p[k] * nabla.gamma(k, i, j).eval(s.x) * out.horizontal[i];
  return out;
}

// ---- trajectories ----------------------------------------------------------

const std::vector<double>& Trajectory::channel(const std::string& name) const {
  for (std::size_t c = 0; c < channel_names.size(); ++c)
    if (channel_names[c] == name) return channels[c];
  throw std::out_of_range("no channel '" + name + "'");
}

double Trajectory::drift(const std::string& name) const {
  const auto& ch = channel(name);
  double worst = 0;
  for (double v : ch) worst = std::max(worst, std::abs(v - ch.front()));
  return worst;
}

namespace {

using Rhs = std::function<std::vector<double>(const std::vector<double>&)>;
using Record = std::function<void(const std::vector<double>&, Trajectory&)>;

bool finite(const std::vector<double>& y) {
  for (double v : y)
    if (!std::isfinite(v)) return false;
  return true;
}

CotangentState unflat(const std::vector<double>& y, int n) {
  return {Point(y.begin(), y.begin() + n), Point(y.begin() + n, y.end())};
}

Trajectory rk4(const Rhs& f, const Record& record, std::vector<double> y, int n, double dt, std::size_t steps,
               std::vector<std::string> names) {
  if (!(dt > 0)) throw std::invalid_argument("dt must be positive");
  if (steps < 1) throw std::invalid_argument("steps must be at least 1");
  Trajectory tr;
  tr.dt = dt;
  tr.channel_names = std::move(names);
  tr.channels.resize(tr.channel_names.size());
  tr.states.reserve(steps + 1);
  auto push = [&](const std::vector<double>& state, std::size_t step) {
    if (!finite(state)) throw BlowUp("non-finite state at step " + std::to_string(step), step, tr);
    try {
      record(state, tr);
    } catch (const DomainError& e) {
      throw BlowUp(std::string("domain error at step ") + std::to_string(step) + ": " + e.what(), step, tr);
    }
    tr.states.push_back(unflat(state, n));
  };
  push(y, 0);
  std::size_t m = y.size();
  std::vector<double> tmp(m);
  for (std::size_t s = 1; s <= steps; ++s) {
    try {
      auto k1 = f(y);
      for (std::size_t i = 0; i < m; ++i) tmp[i] = y[i] + 0.5 * dt * k1[i];
      auto k2 = f(tmp);
      for (std::size_t i = 0; i < m; ++i) tmp[i] = y[i] + 0.5 * dt * k2[i];
      auto k3 = f(tmp);
      for (std::size_t i = 0; i < m; ++i) tmp[i] = y[i] + dt * k3[i];
      auto k4 = f(tmp);
      for (std::size_t i = 0; i < m; ++i) y[i] += dt / 6.0 * (k1[i] + 2 * k2[i] + 2 * k3[i] + k4[i]);
    } catch (const DomainError& e) {
      throw BlowUp(std::string("domain error at step ") + std::to_string(s) + ": " + e.what(), s, tr);
    }
    push(y, s);
  }
  return tr;
}

std::vector<double> eval_all(const std::vector<Expr>& es, const std::vector<double>& y) {
  std::vector<double> out(es.size());
  for (std::size_t i = 0; i < es.size(); ++i) out[i] = es[i].eval(y);
  return out;
}

double gamma_vv(const Connection& nabla, int k, const Point& x, const std::vector<double>& v) {
  int n = nabla.n();
  double sum = 0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      const Expr& g = nabla.gamma(k, i, j);
      if (!g.is_zero()) sum += g.eval(x) * v[i] * v[j];
    }
  return sum;
}

}  // namespace

Trajectory integrate_pw(const Connection& nabla, const PhaseField& h, const CotangentState& s0, double dt,
                        std::size_t steps, const std::vector<Monitor>& extra) {
  int n = h.n();
  auto grad = pw_gradient(nabla, h);
  std::vector<std::string> names{"H"};
  std::vector<Expr> chans{h.e};
  for (int i = 0; i < n; ++i) {
    names.push_back("v" + std::to_string(i + 1));
    chans.push_back(h.dp(i));
  }
  for (const auto& m : extra) {
    names.push_back(m.name);
    chans.push_back(m.f.e);
  }
  Rhs rhs = [&](const std::vector<double>& y) { return eval_all(grad, y); };
  Record rec = [&](const std::vector<double>& y, Trajectory& tr) {
    auto v = eval_all(chans, y);
    for (std::size_t c = 0; c < v.size(); ++c) tr.channels[c].push_back(v[c]);
  };
  return rk4(rhs, rec, s0.flat(), n, dt, steps, names);
}

Trajectory integrate_geodesic(const Connection& nabla, const Point& x0, const Point& v0, double dt,
                              std::size_t steps) {
  int n = nabla.n();
  std::vector<std::string> names;
  for (int i = 0; i < n; ++i) names.push_back("v" + std::to_string(i + 1));
  Rhs rhs = [&](const std::vector<double>& y) {
    Point x(y.begin(), y.begin() + n);
    std::vector<double> v(y.begin() + n, y.end());
    std::vector<double> out(2 * n);
    for (int k = 0; k < n; ++k) {
      out[k] = v[k];
      out[n + k] = -gamma_vv(nabla, k, x, v);
    }
    return out;
  };
  Record rec = [&](const std::vector<double>& y, Trajectory& tr) {
    for (int i = 0; i < n; ++i) tr.channels[i].push_back(y[n + i]);
  };
  CotangentState s0{x0, v0};
  return rk4(rhs, rec, s0.flat(), n, dt, steps, names);
}

Eigen::VectorXd quarter_contraction(const SymTensorField& tt, const CotangentState& s) {
  int n = tt.n();
  Eigen::VectorXd out = Eigen::VectorXd::Zero(n);
  auto v = tt.eval(s.x);
  for (int c = 0; c < n; ++c)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) out[c] += 0.25 * s.p[j] * s.p[k] * v[(j * n + k) * n + c];
  return out;
}

namespace {

std::vector<double> velocity(const Trajectory& traj, std::size_t i, int n) {
  std::vector<double> v(n);
  for (int k = 0; k < n; ++k) v[k] = traj.channel("v" + std::to_string(k + 1))[i];
  return v;
}

Eigen::VectorXd covariant_acceleration(const Connection& nabla, const Trajectory& traj, std::size_t i) {
  int n = nabla.n();
  // five-point central stencil
  auto vm2 = velocity(traj, i - 2, n), vm = velocity(traj, i - 1, n), v = velocity(traj, i, n);
  auto vp = velocity(traj, i + 1, n), vp2 = velocity(traj, i + 2, n);
  Eigen::VectorXd a(n);
  for (int k = 0; k < n; ++k)
    a[k] = (vm2[k] - 8 * vm[k] + 8 * vp[k] - vp2[k]) / (12 * traj.dt) + gamma_vv(nabla, k, traj.states[i].x, v);
  return a;
}

void require_interior(const Trajectory& traj) {
  if (traj.states.size() < 5) throw std::invalid_argument("finite differences need at least 4 steps");
}

}  // namespace

GeodesicResidual monitor_geodesic_residual(const SymPoissonPair& pair, const Trajectory& traj) {
  require_interior(traj);
  auto tt = schouten_self(pair);
  GeodesicResidual out;
  for (std::size_t i = 2; i + 2 < traj.states.size(); ++i) {
    auto lhs = covariant_acceleration(pair.nabla(), traj, i);
    auto rhs = quarter_contraction(tt, traj.states[i]);
    out.residual.push_back((lhs - rhs).norm());
    out.rhs_norm.push_back(rhs.norm());
    out.max_residual = std::max(out.max_residual, out.residual.back());
    out.max_rhs = std::max(out.max_rhs, out.rhs_norm.back());
  }
  return out;
}

std::vector<double> geodesic_self_residual(const Connection& nabla, const Trajectory& traj) {
  require_interior(traj);
  std::vector<double> out;
  for (std::size_t i = 2; i + 2 < traj.states.size(); ++i) out.push_back(covariant_acceleration(nabla, traj, i).norm());
  return out;
}

std::vector<double> monitor_speed_square(const SymPoissonPair& pair, const Trajectory& traj) {
  std::vector<double> out;
  for (const auto& s : traj.states) {
    auto m = eval_matrix(pair.theta(), s.x);
    Eigen::Map<const Eigen::VectorXd> a(s.p.data(), pair.n());
    out.push_back(a.dot(m * a));
  }
  return out;
}

InvarianceReport check_locally_geodesically_invariant(const SymPoissonPair& pair, const CotangentState& z0,
                                                      double dt, std::size_t steps) {
  int n = pair.n();
  auto m0 = eval_matrix(pair.theta(), z0.x);
  Eigen::Map<const Eigen::VectorXd> a0(z0.p.data(), n);
  Eigen::VectorXd v0 = m0 * a0;
  if (v0.norm() == 0.0) throw std::invalid_argument("θ(ζ0) must be nonzero");
  auto pw = integrate_pw(pair.nabla(), vertical_lift(pair.theta()), z0, dt, steps);
  auto geo = integrate_geodesic(pair.nabla(), z0.x, Point(v0.data(), v0.data() + n), dt, steps);
  InvarianceReport rep;
  rep.steps = steps;
  for (std::size_t i = 0; i <= steps; ++i) {
    double d = 0;
    for (int k = 0; k < n; ++k) d = std::max(d, std::abs(pw.states[i].x[k] - geo.states[i].x[k]));
    rep.max_base_distance = std::max(rep.max_base_distance, d);
    const auto& v = geo.states[i].p;
    Eigen::Map<const Eigen::VectorXd> w(v.data(), n);
    double r = image_residual(eval_matrix(pair.theta(), geo.states[i].x), w) / (1.0 + w.norm());
    rep.max_image_residual = std::max(rep.max_image_residual, r);
  }
  return rep;
}

Trajectory run_newtonian(const SymFormField& g, const Expr& f, const Point& x0, const Point& v0, double dt,
                         std::size_t steps) {
  const Chart& c = g.chart();
  int n = c.n();
  auto kinetic = vertical_lift(inverse_metric(g));
  PhaseField h{c, kinetic.e - f};
  auto gm = eval_matrix(g, x0);
  Eigen::Map<const Eigen::VectorXd> v(v0.data(), n);
  Eigen::VectorXd p = gm * v;
  CotangentState s0{x0, Point(p.data(), p.data() + n)};
  return integrate_pw(levi_civita(g), h, s0, dt, steps, {{"energy", {c, kinetic.e + f}}});
}

void write_csv(std::ostream& os, const Trajectory& traj) {
  if (traj.states.empty()) return;
  std::size_t n = traj.states.front().x.size();
  os << "t";
  for (std::size_t i = 0; i < n; ++i) os << ",x" << i + 1;
  for (std::size_t i = 0; i < n; ++i) os << ",p" << i + 1;
  for (const auto& nm : traj.channel_names) os << "," << nm;
  os << "\n";
  char buf[32];
  auto put = [&](double v) {
    std::snprintf(buf, sizeof buf, "%.17g", v);
    os << buf;
  };
  for (std::size_t s = 0; s < traj.states.size(); ++s) {
    put(traj.time(s));
    for (double v : traj.states[s].x) os << ",", put(v);
    for (double v : traj.states[s].p) os << ",", put(v);
    for (const auto& ch : traj.channels)
      if (s < ch.size()) os << ",", put(ch[s]);
    os << "\n";
  }
}

}  // namespace spg
