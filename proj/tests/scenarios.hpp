// Worked structures shared by the unit tests and the acceptance run.
#pragma once

#include "spg/poisson.hpp"
#include "support.hpp"

namespace spg::testing {

inline SymFormField euclid(const Chart& c) {
  return SymFormField::generate(c, 2, [](const std::vector<int>& i) { return Expr(i[0] == i[1] ? 1.0 : 0.0); });
}

inline SymPoissonPair flat_pair(const Chart& c) { return SymPoissonPair(inverse_metric(euclid(c)), Connection(c)); }

// h(y) ∂x⊗∂x, Euclidean
inline SymPoissonPair inclusion(const Chart& c) {
  Expr h = c.parse("1 + y^2 + exp(y)").expr();
  return SymPoissonPair(SymTensorField::bivector(c, {{h, Expr()}, {Expr(), Expr()}}), Connection(c));
}

inline SymFormField nondeg_kill_metric(const Chart& c) {
  return sym_product(SymFormField::covector(c, {c.parse("exp(2*y)").expr(), Expr()}),
                     SymFormField::covector(c, {Expr(), c.parse("exp(2*x)").expr()}));
}

// ∇_{∂x}∂y = ∂x + ∂y
inline Connection nondeg_kill_connection(const Chart& c) {
  Connection nabla(c);
  nabla.set_symmetric(0, 0, 1, Expr(1.0));
  nabla.set_symmetric(1, 0, 1, Expr(1.0));
  return nabla;
}

inline SymPoissonPair nondeg_kill(const Chart& c) {
  return SymPoissonPair(inverse_metric(nondeg_kill_metric(c)), nondeg_kill_connection(c));
}

// θ = X1⊗X1 + X2⊗X2 with X1 = ∂x, X2 = ∂y + x∂z; ∇_{∂x}∂y = −½∂z.
inline SymPoissonPair heisenberg(const Chart& c) {
  auto x1 = SymTensorField::vector(c, {Expr(1.0), Expr(), Expr()});
  auto x2 = SymTensorField::vector(c, {Expr(), Expr(1.0), Expr::var(0)});
  Connection nabla(c);
  nabla.set_symmetric(2, 0, 1, Expr(-0.5));
  auto half_square = [](const SymTensorField& x) { return sym_product(x, x) * Expr(0.5); };
  return SymPoissonPair(half_square(x1) + half_square(x2), nabla);
}

// X⊗X on the punctured plane for X = R (kind 0), S (1) or H (2), with ∇_{∂x}∂x = ∇_{∂y}∂y = ±R/(x²+y²).
inline SymPoissonPair punctured_plane(int kind) {
  Chart c({"x", "y"}, {{0.5, 1.5}, {0.5, 1.5}});
  Expr x = Expr::var(0), y = Expr::var(1);
  std::vector<Expr> comps = kind == 0 ? std::vector{x, y} : kind == 1 ? std::vector{-y, x} : std::vector{x, -y};
  auto v = SymTensorField::vector(c, comps);
  Expr r2 = x * x + y * y;
  double sign = kind == 1 ? 1.0 : -1.0;
  Connection nabla(c);
  for (int k = 0; k < 2; ++k) {
    nabla.set_gamma(k, 0, 0, Expr(sign) * Expr::var(k) / r2);
    nabla.set_gamma(k, 1, 1, Expr(sign) * Expr::var(k) / r2);
  }
  return SymPoissonPair(sym_product(v, v) * Expr(0.5), nabla);
}

// x ∂x⊗∂x on the line with the Euclidean connection: not symmetric Poisson.
inline SymPoissonPair line_non_example() {
  Chart line({"x"});
  return SymPoissonPair(SymTensorField::bivector(line, {{Expr::var(0)}}), Connection(line));
}

struct KillingCase {
  SymFormField g;
  SymFormField k;
};

// Killing and non-Killing tensors on the plane, the round sphere and Minkowski space.
inline std::vector<KillingCase> killing_battery(Rng& rng) {
  std::vector<KillingCase> out;
  Chart c({"x", "y"});
  auto x = c.coord(0).expr(), y = c.coord(1).expr();
  auto flat = euclid(c);
  auto rot = SymFormField::covector(c, {-y, x});
  auto tx = SymFormField::covector(c, {Expr(1.0), Expr()});
  auto ty = SymFormField::covector(c, {Expr(), Expr(1.0)});
  std::vector<SymFormField> flat_killing{rot, tx, ty, sym_product(rot, rot), sym_product(tx, rot), flat,
                                         sym_product(ty, ty) + sym_product(rot, tx) * Expr(2.0),
                                         sym_product(sym_product(rot, tx), ty)};

  Chart sc({"u", "v"}, {{0.5, 2.5}, {-3.0, 3.0}});
  auto u = sc.coord(0).expr(), v = sc.coord(1).expr();
  auto sphere = SymFormField::matrix(sc, {{Expr(1.0), Expr()}, {Expr(), pow(sin(u), 2)}});
  // ∂v, sin v ∂u + cot u cos v ∂v lowered
  auto kv = SymFormField::covector(sc, {Expr(), pow(sin(u), 2)});
  auto kw = SymFormField::covector(sc, {sin(v), cos(u) * sin(u) * cos(v)});
  std::vector<SymFormField> sphere_killing{kv, kw, sym_product(kv, kw), sphere, sym_product(kw, kw)};

  Chart lc({"t", "z"});
  auto mink = SymFormField::matrix(lc, {{Expr(1.0), Expr()}, {Expr(), Expr(-1.0)}});
  auto boost = SymFormField::covector(lc, {lc.coord(1).expr(), lc.coord(0).expr()});
  std::vector<SymFormField> mink_killing{boost, sym_product(boost, boost), mink};

  for (int t = 0; t < 25; ++t) {
    int which = t % 3;
    bool killing = rng.integer(0, 1) == 1;
    if (which == 0) {
      auto k = flat_killing[rng.integer(0, static_cast<int>(flat_killing.size()) - 1)];
      if (!killing) k = k + random_form(rng, c, k.degree(), 2);
      out.push_back({flat, k});
    } else if (which == 1) {
      auto k = sphere_killing[rng.integer(0, static_cast<int>(sphere_killing.size()) - 1)];
      if (!killing) k = k * (Expr(1.0) + Expr(0.3) * u);
      out.push_back({sphere, k});
    } else {
      auto k = mink_killing[rng.integer(0, static_cast<int>(mink_killing.size()) - 1)];
      if (!killing) k = k + random_form(rng, lc, k.degree(), 1);
      out.push_back({mink, k});
    }
  }
  return out;
}

inline std::vector<KillingCase> killing_cases(Rng& rng, std::size_t count) {
  std::vector<KillingCase> cases;
  while (cases.size() < count) {
    auto more = killing_battery(rng);
    cases.insert(cases.end(), more.begin(), more.begin() + std::min(more.size(), count - cases.size()));
  }
  return cases;
}

}  // namespace spg::testing
