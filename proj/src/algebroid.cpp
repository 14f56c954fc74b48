#include "spg/algebroid.hpp"

namespace spg {

namespace {

using Maybe = std::optional<SymFormField>;

Maybe iota(const SymTensorField& x, const Maybe& phi) {
  if (!phi) return std::nullopt;
  return insert(x, *phi);
}

Maybe nabla_s(const Connection& nabla, const Maybe& phi) {
  if (!phi) return std::nullopt;
  return symmetric_derivative(nabla, *phi);
}

// Accumulates signed terms that are either zero (nullopt) or of a common degree.
struct Sum {
  Maybe acc;
  void add(const Maybe& t, double sign) {
    if (!t) return;
    auto term = *t * Expr(sign);
    acc = acc ? *acc + term : term;
  }
};

SymFormField zero_scalar(const Chart& c) { return SymFormField::scalar(c, Expr()); }

}  // namespace

Verdict killing_via_schouten(const SymFormField& g, const SymFormField& k, const SampleSpec& spec) {
  require_same_chart(g.chart(), k.chart());
  auto s = g.chart().samples(spec);
  for (const auto& x : s)
    if (std::abs(determinant(to_matrix(g)).eval(x)) < 1e-12) throw GeometryError("metric is degenerate at a sample");
  auto lc = levi_civita(g, spec);
  auto ginv = inverse_metric(g);
  auto raised = raise(ginv, k);
  Verdict v;
  v.samples = static_cast<int>(s.size());
  v.seed = spec.seed;
  v.residual = schouten(lc, ginv, raised).zero_residual(s);
  v.holds = v.residual <= spec.tol;
  if (!v.holds) v.witness = "[g⁻¹, g⁻¹(K)]_s";
  return v;
}

SymFormField derived_bracket_lhs(const Connection& nabla, const SymTensorField& x, const SymTensorField& y,
                                 const SymFormField& phi) {
  require_same_chart(x.chart(), phi.chart());
  require_same_chart(y.chart(), phi.chart());
  if (x.degree() > 3 || y.degree() > 3 || phi.degree() > 3) throw DegreeOverflow("derived bracket degrees are capped at 3");
  Maybe p = phi;
  Sum sum;
  sum.add(iota(x, nabla_s(nabla, iota(y, p))), 1);
  sum.add(nabla_s(nabla, iota(x, iota(y, p))), -1);
  sum.add(iota(y, iota(x, nabla_s(nabla, p))), -1);
  sum.add(iota(y, nabla_s(nabla, iota(x, p))), 1);
  return sum.acc ? *sum.acc : zero_scalar(phi.chart());
}

SymFormField derived_bracket_check(const Connection& nabla, const SymTensorField& x, const SymTensorField& y,
                                   const SymFormField& phi) {
  auto lhs = derived_bracket_lhs(nabla, x, y, phi);
  int r = x.degree(), l = y.degree();
  if (r + l - 1 > phi.degree()) return lhs;
  if (r + l == 0) return lhs;  // [f, g]_s = 0
  auto rhs = insert(schouten(nabla, x, y), phi);
  if (lhs.degree() != rhs->degree()) throw GeometryError("derived bracket degree mismatch");
  return lhs - *rhs;
}

SymFormField cotangent_bracket(const SymPoissonPair& pair, const SymFormField& a, const SymFormField& b) {
  if (a.degree() != 1 || b.degree() != 1) throw GeometryError("cotangent bracket needs 1-forms");
  const auto& nb = pair.nabla();
  return covariant_derivative_along(nb, apply(pair.theta(), a), b) -
         covariant_derivative_along(nb, apply(pair.theta(), b), a);
}

SymFormField antisymmetry_defect(const SymPoissonPair& pair, const SymFormField& a, const SymFormField& b) {
  return cotangent_bracket(pair, a, b) + cotangent_bracket(pair, b, a);
}

SymFormField leibniz_defect(const SymPoissonPair& pair, const SymFormField& a, const SymFormField& b, const Expr& f) {
  auto rho_f = directional(apply(pair.theta(), a), f).expr();
  return cotangent_bracket(pair, a, b * f) - b * rho_f - cotangent_bracket(pair, a, b) * f;
}

SymTensorField anchor_defect(const SymPoissonPair& pair, const SymFormField& a, const SymFormField& b) {
  const auto& th = pair.theta();
  return apply(th, cotangent_bracket(pair, a, b)) - lie_bracket(apply(th, a), apply(th, b));
}

SymFormField cotangent_jacobiator(const SymPoissonPair& pair, const SymFormField& a, const SymFormField& b,
                                  const SymFormField& c) {
  return cotangent_bracket(pair, a, cotangent_bracket(pair, b, c)) +
         cotangent_bracket(pair, b, cotangent_bracket(pair, c, a)) +
         cotangent_bracket(pair, c, cotangent_bracket(pair, a, b));
}

SymFormField bianchi_defect(const SymPoissonPair& pair, const SymFormField& a, const SymFormField& b,
                            const SymFormField& c) {
  auto r = curvature(pair.nabla());
  const auto& th = pair.theta();
  int n = pair.n();
  auto term = [&](const SymFormField& u, const SymFormField& v, const SymFormField& eta) {
    auto x = apply(th, u), y = apply(th, v);
    std::vector<Expr> comps(n);
    for (int k = 0; k < n; ++k) {
      Expr s;
      for (int l = 0; l < n; ++l)
        for (int i = 0; i < n; ++i)
          for (int j = 0; j < n; ++j) {
            const Expr& rl = r.at(l, k, i, j);
            if (rl.is_zero() || eta.at({l}).is_zero() || x.at({i}).is_zero() || y.at({j}).is_zero()) continue;
            s -= eta.at({l}) * rl * x.at({i}) * y.at({j});
          }
      comps[k] = s;
    }
    return SymFormField::covector(pair.chart(), comps);
  };
  return term(a, b, c) + term(b, c, a) + term(c, a, b);
}

AlgebroidReport algebroid_check(const SymPoissonPair& pair, const Expr& f, const SampleSpec& spec) {
  auto s = pair.chart().samples(spec);
  AlgebroidReport rep;
  rep.samples = static_cast<int>(s.size());
  rep.seed = spec.seed;
  int n = pair.n();
  const Chart& c = pair.chart();
  auto upd = [](double& slot, double v) { slot = std::max(slot, v); };
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      upd(rep.antisymmetry, antisymmetry_defect(pair, dx(c, i), dx(c, j)).zero_residual(s));
      upd(rep.leibniz, leibniz_defect(pair, dx(c, i), dx(c, j), f).zero_residual(s));
      upd(rep.anchor, anchor_defect(pair, dx(c, i), dx(c, j)).zero_residual(s));
      for (int k = 0; k < n; ++k) {
        if (!(i < j && j < k)) continue;
        upd(rep.jacobi, cotangent_jacobiator(pair, dx(c, i), dx(c, j), dx(c, k)).zero_residual(s));
        upd(rep.bianchi, bianchi_defect(pair, dx(c, i), dx(c, j), dx(c, k)).zero_residual(s));
      }
    }
  return rep;
}

}  // namespace spg
