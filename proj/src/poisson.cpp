#include "spg/poisson.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace spg {

namespace {

std::string index_str(const std::vector<int>& idx) {
  std::string s = "[";
  for (std::size_t i = 0; i < idx.size(); ++i) s += (i ? "," : "") + std::to_string(idx[i] + 1);
  return s + "]";
}

// Accumulates the worst component residual of several arrays into one verdict.
struct Collector {
  Verdict v;
  const Samples& s;
  double tol;

  Collector(const SampleSpec& spec, const Samples& samples) : s(samples), tol(spec.tol) {
    v.samples = static_cast<int>(samples.size());
    v.seed = spec.seed;
  }

  void add(const Expr& e, const std::string& label) {
    double r = zero_residual(e, s);
    if (r > v.residual) {
      v.residual = r;
      if (r > tol) v.witness = label;
    }
  }
  void add(const SymArray& t, const std::string& label) {
    for (const auto& idx : t.sorted_indices()) add(t.at(idx), label + index_str(idx));
  }
  Verdict done() {
    v.holds = v.residual <= tol;
    if (v.holds) v.witness.clear();
    return v;
  }
};

}  // namespace

SymPoissonPair::SymPoissonPair(SymTensorField theta, Connection nabla)
    : theta_(std::move(theta)), nabla_(std::move(nabla)) {
  if (theta_.degree() != 2) throw GeometryError("θ must have degree 2");
  require_same_chart(theta_.chart(), nabla_.chart());
  nabla_.require_torsion_free();
}

ScalarField poisson_bracket(const SymPoissonPair& pair, const ScalarField& f, const ScalarField& g) {
  const Chart& c = pair.chart();
  if (f.arity() != c.n() || g.arity() != c.n()) throw GeometryError("arity does not match chart");
  Expr sum;
  for (int i = 0; i < c.n(); ++i)
    for (int j = 0; j < c.n(); ++j) {
      const Expr& t = pair.theta().at({i, j});
      if (t.is_zero()) continue;
      sum += t * f.expr().diff(i) * g.expr().diff(j);
    }
  return ScalarField(sum, c.n(), c.names());
}

SymTensorField gradient(const SymPoissonPair& pair, const Expr& f) {
  return apply(pair.theta(), SymFormField::differential(pair.chart(), f));
}

SymTensorField schouten_self(const SymPoissonPair& pair) {
  const auto& theta = pair.theta();
  const Chart& c = pair.chart();
  int n = c.n();
  auto d = covariant_derivative(pair.nabla(), theta);
  return SymTensorField::generate(c, 3, [&](const std::vector<int>& idx) {
    Expr sum;
    for (int rot = 0; rot < 3; ++rot) {
      int a = idx[rot], b = idx[(rot + 1) % 3], e = idx[(rot + 2) % 3];
      for (int k = 0; k < n; ++k) {
        const Expr& t = theta.at({k, a});
        if (t.is_zero()) continue;
        sum += t * d[k].at({b, e});
      }
    }
    return Expr(2.0) * sum;
  });
}

Expr one_dim_residual(const SymPoissonPair& pair) {
  if (pair.n() != 1) throw GeometryError("one_dim_residual needs a 1-dimensional chart");
  const Expr& f = pair.theta().at({0, 0});
  const Expr& h = pair.nabla().gamma(0, 0, 0);
  return f * f.diff(0) + Expr(2.0) * f * f * h;
}

SymPoissonPair one_dim_family(const Chart& c, double lambda, const Expr& H, int sign) {
  if (c.n() != 1) throw GeometryError("one_dim_family needs a 1-dimensional chart");
  if (lambda < 0) throw GeometryError("λ must be non-negative");
  Expr f = Expr(sign * std::sqrt(lambda)) * exp(Expr(-2.0) * H);
  Connection nabla(c);
  nabla.set_gamma(0, 0, 0, H.diff(0));
  return SymPoissonPair(SymTensorField::bivector(c, {{f}}), nabla);
}

SchoutenVerdict is_symmetric_poisson(const SymPoissonPair& pair, const SampleSpec& spec) {
  auto s = pair.chart().samples(spec);
  Collector col(spec, s);
  auto self = schouten_self(pair);
  if (pair.n() == 1)
    col.add(one_dim_residual(pair), "ff'+2f²h");
  else
    col.add(self, "[θ,θ]_s");
  SchoutenVerdict out;
  static_cast<Verdict&>(out) = col.done();
  auto general = schouten(pair.nabla(), pair.theta(), pair.theta());
  out.cross_check = (self - general).zero_residual(s);
  return out;
}

Verdict is_strong(const SymPoissonPair& pair, const SampleSpec& spec) {
  auto s = pair.chart().samples(spec);
  Collector col(spec, s);
  for (int i = 0; i < pair.n(); ++i) {
    auto x = apply(pair.theta(), dx(pair.chart(), i));
    col.add(covariant_derivative_along(pair.nabla(), x, pair.theta()), "∇_{θ(dx" + std::to_string(i + 1) + ")}θ");
  }
  return col.done();
}

Verdict is_parallel(const SymPoissonPair& pair, const SampleSpec& spec) {
  auto s = pair.chart().samples(spec);
  Collector col(spec, s);
  auto d = covariant_derivative(pair.nabla(), pair.theta());
  for (int k = 0; k < pair.n(); ++k) col.add(d[k], "∇_" + std::to_string(k + 1) + "θ");
  return col.done();
}

// ---- characteristic data ---------------------------------------------------

Eigen::MatrixXd eval_matrix(const SymArray& t, const Point& x) {
  if (t.degree() != 2) throw GeometryError("eval_matrix needs degree 2");
  int n = t.n();
  auto v = t.eval(x);
  Eigen::MatrixXd m(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) m(i, j) = v[i * n + j];
  return m;
}

namespace {

struct Spectrum {
  Eigen::VectorXd values;
  Eigen::MatrixXd vectors;
  std::vector<int> kept;
};

Spectrum spectrum(const Eigen::MatrixXd& m) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(0.5 * (m + m.transpose()));
  Spectrum sp{es.eigenvalues(), es.eigenvectors(), {}};
  double top = sp.values.size() ? sp.values.cwiseAbs().maxCoeff() : 0.0;
  for (int i = 0; i < sp.values.size(); ++i)
    if (std::abs(sp.values[i]) >= kRankThreshold * (top + 1.0)) sp.kept.push_back(i);
  return sp;
}

}  // namespace

int numeric_rank(const Eigen::MatrixXd& m) { return static_cast<int>(spectrum(m).kept.size()); }

double image_residual(const Eigen::MatrixXd& m, const Eigen::VectorXd& w) {
  auto sp = spectrum(m);
  Eigen::VectorXd r = w;
  for (int i : sp.kept) {
    auto b = sp.vectors.col(i);
    r -= b.dot(w) * b;
  }
  return r.norm();
}

CharacteristicData characteristic_data(const SymTensorField& theta, const Point& x) {
  CharacteristicData cd;
  cd.point = x;
  cd.theta = eval_matrix(theta, x);
  auto sp = spectrum(cd.theta);
  int n = theta.n();
  cd.rank = static_cast<int>(sp.kept.size());
  cd.basis.resize(n, cd.rank);
  cd.metric_gram = Eigen::MatrixXd::Zero(cd.rank, cd.rank);
  for (int c = 0; c < cd.rank; ++c) {
    double lam = sp.values[sp.kept[c]];
    cd.basis.col(c) = sp.vectors.col(sp.kept[c]);
    cd.metric_gram(c, c) = 1.0 / lam;
    (lam > 0 ? cd.p : cd.q) += 1;
  }
  return cd;
}

double CharacteristicData::metric(const Eigen::VectorXd& u, const Eigen::VectorXd& v) const {
  return (basis.transpose() * u).dot(metric_gram * (basis.transpose() * v));
}

Eigen::MatrixXd CharacteristicData::reconstruct() const {
  if (rank == 0) return Eigen::MatrixXd::Zero(theta.rows(), theta.cols());
  return basis * metric_gram.inverse() * basis.transpose();
}

std::string to_string(Involutivity v) {
  switch (v) {
    case Involutivity::involutive_on_samples:
      return "involutive_on_samples";
    case Involutivity::not_involutive:
      return "not_involutive";
    default:
      return "inconclusive";
  }
}

InvolutivityReport involutivity_check(const SymPoissonPair& pair, const SampleSpec& spec) {
  return involutivity_check(pair, pair.chart().samples(spec), spec.tol);
}

InvolutivityReport involutivity_check(const SymPoissonPair& pair, const Samples& s, double tol) {
  const Chart& c = pair.chart();
  int n = c.n();
  std::vector<SymTensorField> gens;
  for (int i = 0; i < n; ++i) gens.push_back(apply(pair.theta(), dx(c, i)));
  std::vector<std::pair<std::pair<int, int>, SymTensorField>> brackets;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) brackets.push_back({{i, j}, lie_bracket(gens[i], gens[j])});

  InvolutivityReport rep;
  rep.samples = static_cast<int>(s.size());
  rep.min_rank = n;
  bool failed = false;
  for (const auto& x : s) {
    auto m = eval_matrix(pair.theta(), x);
    int r = numeric_rank(m);
    rep.min_rank = std::min(rep.min_rank, r);
    rep.max_rank = std::max(rep.max_rank, r);
    for (const auto& [ij, b] : brackets) {
      auto v = b.eval(x);
      Eigen::VectorXd w = Eigen::Map<Eigen::VectorXd>(v.data(), n);
      double res = image_residual(m, w) / (1.0 + w.norm());
      rep.residual = std::max(rep.residual, res);
      if (res > tol && !failed) {
        failed = true;
        std::ostringstream os;
        os << "[θ(dx" << ij.first + 1 << "),θ(dx" << ij.second + 1 << ")] leaves im θ at (";
        for (int k = 0; k < n; ++k) os << (k ? "," : "") << x[k];
        os << ")";
        rep.witness = os.str();
      }
    }
  }
  if (failed)
    rep.verdict = Involutivity::not_involutive;
  else if (rep.min_rank != rep.max_rank)
    rep.verdict = Involutivity::inconclusive;
  else
    rep.verdict = Involutivity::involutive_on_samples;
  return rep;
}

// ---- identities ------------------------------------------------------------

namespace {
Expr bracket(const SymPoissonPair& pair, const Expr& f, const Expr& g) {
  int n = pair.n();
  return poisson_bracket(pair, ScalarField(f, n), ScalarField(g, n)).expr();
}
}  // namespace

Expr jacobiator(const SymPoissonPair& pair, const Expr& f, const Expr& g, const Expr& h) {
  return bracket(pair, f, bracket(pair, g, h)) + bracket(pair, g, bracket(pair, h, f)) +
         bracket(pair, h, bracket(pair, f, g));
}

Expr jacobiator_identity_check(const SymPoissonPair& pair, const Expr& f, const Expr& g, const Expr& h) {
  auto xf = gradient(pair, f), xg = gradient(pair, g), xh = gradient(pair, h);
  const Chart& c = pair.chart();
  auto term = [&](const SymTensorField& a, const SymTensorField& b, const Expr& k) {
    return spg::pair(SymFormField::differential(c, k), symmetric_bracket(pair.nabla(), a, b));
  };
  Expr rhs = term(xf, xg, h) + term(xg, xh, f) + term(xh, xf, g);
  return jacobiator(pair, f, g, h) - rhs;
}

SymTensorField strong_morphism_check(const SymPoissonPair& pair, const Expr& f, const Expr& g) {
  return gradient(pair, bracket(pair, f, g)) -
         symmetric_bracket(pair.nabla(), gradient(pair, f), gradient(pair, g));
}

Expr scalar_curvature(const SymPoissonPair& pair) {
  auto ric = ricci(pair.nabla());
  Expr sum;
  for (int i = 0; i < pair.n(); ++i)
    for (int j = 0; j < pair.n(); ++j) {
      const Expr& t = pair.theta().at({i, j});
      if (!t.is_zero()) sum += t * ric[i][j];
    }
  return sum;
}

Expr laplacian(const SymPoissonPair& pair, const Expr& f) {
  auto hess = covariant_derivative(pair.nabla(), SymFormField::differential(pair.chart(), f));
  Expr sum;
  for (int i = 0; i < pair.n(); ++i)
    for (int j = 0; j < pair.n(); ++j) {
      const Expr& t = pair.theta().at({i, j});
      if (!t.is_zero()) sum += t * hess[i].at({j});
    }
  return sum;
}

}  // namespace spg
