#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "spg/poisson.hpp"
#include "scenarios.hpp"

using namespace spg;
using spg::testing::Rng;

namespace {

Chart plane() { return Chart({"x", "y"}); }

SymPoissonPair inclusion(const Chart& c) {
  Expr h = c.parse("1 + y^2 + exp(y)").expr();
  return SymPoissonPair(SymTensorField::bivector(c, {{h, Expr()}, {Expr(), Expr()}}), Connection(c));
}

SymFormField nondeg_kill_metric(const Chart& c) {
  return sym_product(SymFormField::covector(c, {c.parse("exp(2*y)").expr(), Expr()}),
                     SymFormField::covector(c, {Expr(), c.parse("exp(2*x)").expr()}));
}

SymPoissonPair nondeg_kill(const Chart& c) {
  Connection nabla(c);
  nabla.set_symmetric(0, 0, 1, Expr(1.0));
  nabla.set_symmetric(1, 0, 1, Expr(1.0));
  return SymPoissonPair(inverse_metric(nondeg_kill_metric(c)), nabla);
}

SymPoissonPair flat(const Chart& c, int p) {
  auto theta = SymTensorField::generate(c, 2, [&](const std::vector<int>& idx) {
    if (idx[0] != idx[1]) return Expr();
    return Expr(idx[0] < p ? 1.0 : -1.0);
  });
  return SymPoissonPair(theta, Connection(c));
}

SymTensorField decomposable(const SymTensorField& x) { return sym_product(x, x) * Expr(0.5); }

}  // namespace

TEST_CASE("bracket and gradient of the flat pair") {
  Chart c = plane();
  auto pr = flat(c, 1);
  auto f = c.parse("x^2*y + sin(y)"), g = c.parse("exp(x) - x*y^3");
  auto b = poisson_bracket(pr, f, g);
  Expr oracle = f.expr().diff(0) * g.expr().diff(0) - f.expr().diff(1) * g.expr().diff(1);
  CHECK(zero_residual(b.expr() - oracle, c.samples()) < 1e-14);
  CHECK(zero_residual(b.expr() - poisson_bracket(pr, g, f).expr(), c.samples()) < 1e-14);
  auto grad = gradient(pr, f.expr());
  CHECK(zero_residual(grad.at({0}) - f.expr().diff(0), c.samples()) < 1e-14);
  CHECK(zero_residual(grad.at({1}) + f.expr().diff(1), c.samples()) < 1e-14);
  CHECK(gradient(pr, Expr(3.0)).is_structurally_zero());
}

TEST_CASE("bracket examples") {
  Chart c = plane();
  SymPoissonPair pr(SymTensorField::bivector(c, {{Expr(1.0), Expr()}, {Expr(), Expr()}}), Connection(c));
  auto b = poisson_bracket(pr, c.parse("x"), c.parse("x*y"));
  CHECK(zero_residual(b.expr() - Expr::var(1), c.samples()) == 0.0);

  Chart line({"x"});
  SymPoissonPair sq(SymTensorField::bivector(line, {{line.parse("x^2").expr()}}), Connection(line));
  auto gx = gradient(sq, Expr::var(0));
  for (const auto& p : line.samples(5)) CHECK(gx.at({0}).eval(p) == doctest::Approx(p[0] * p[0]));

  CHECK_THROWS_AS(SymPoissonPair(SymTensorField(c, 1), Connection(c)), GeometryError);
  CHECK_THROWS_AS(SymPoissonPair(SymTensorField(c, 2), Connection(Chart({"u", "v"}))), GeometryError);
  Connection twisted(c);
  twisted.set_gamma(0, 0, 1, Expr(1.0));
  CHECK_THROWS_AS(SymPoissonPair(SymTensorField(c, 2), twisted), TorsionError);
}

TEST_CASE("integrability verdicts on the worked examples") {
  Chart c = plane();
  auto inc = inclusion(c);
  auto sp = is_symmetric_poisson(inc);
  CHECK(sp.holds);
  CHECK(sp.cross_check < 1e-12);
  CHECK(sp.samples == 25);
  CHECK(sp.seed == kDefaultSeed);
  CHECK(is_strong(inc).holds);
  auto par = is_parallel(inc);
  CHECK_FALSE(par.holds);
  CHECK_FALSE(par.witness.empty());

  auto nk = nondeg_kill(c);
  CHECK(is_killing(nk.nabla(), nondeg_kill_metric(c)));
  auto nsp = is_symmetric_poisson(nk);
  CHECK(nsp.holds);
  CHECK(nsp.cross_check < 1e-12);
  CHECK_FALSE(is_strong(nk).holds);

  Rng rng(3);
  SymPoissonPair zero(SymTensorField(c, 2), testing::random_tf_connection(rng, c));
  CHECK(is_symmetric_poisson(zero).holds);
  CHECK(is_strong(zero).holds);

  for (int p = 0; p <= 3; ++p) {
    auto fl = flat(Chart(3), p);
    CHECK(is_parallel(fl).holds);
    CHECK(is_strong(fl).holds);
    CHECK(is_symmetric_poisson(fl).holds);
  }

  Chart line({"x"});
  SymPoissonPair xl(SymTensorField::bivector(line, {{Expr::var(0)}}), Connection(line));
  CHECK_FALSE(is_symmetric_poisson(xl).holds);
}

TEST_CASE("x d/dx⊗d/dx admits no connection on the line") {
  // ff' + 2f²h = 0 with f = x forces h = -1/(2x), singular at 0; any polynomial h fails.
  Chart line({"x"});
  Rng rng(40);
  for (int t = 0; t < 20; ++t) {
    Connection nabla(line);
    nabla.set_gamma(0, 0, 0, testing::random_poly(rng, 1, 3, 4));
    SymPoissonPair pr(SymTensorField::bivector(line, {{Expr::var(0)}}), nabla);
    CHECK_FALSE(is_symmetric_poisson(pr).holds);
  }
}

TEST_CASE("one-dimensional family and its perturbation") {
  Chart line({"x"});
  Rng rng(41);
  for (int t = 0; t < 10; ++t) {
    double lambda = rng.uniform(0.1, 5.0);
    Expr H = testing::random_poly(rng, 1, 3, 3);
    auto pr = one_dim_family(line, lambda, H, t % 2 ? 1 : -1);
    auto v = is_symmetric_poisson(pr);
    CHECK(v.holds);
    CHECK(v.cross_check < 1e-12);
    CHECK(is_strong(pr).holds);
    // θ² = λe^{-4H}
    for (const auto& p : line.samples(5)) {
      double th = pr.theta().at({0, 0}).eval(p);
      CHECK(th * th == doctest::Approx(lambda * std::exp(-4 * H.eval(p))));
    }
    Expr f = pr.theta().at({0, 0}) * (Expr(1.0) + Expr(0.01) * Expr::var(0));
    SymPoissonPair bent(SymTensorField::bivector(line, {{f}}), pr.nabla());
    CHECK_FALSE(is_symmetric_poisson(bent).holds);
  }
}

TEST_CASE("one-dimensional residual equals the general bracket") {
  Chart line({"x"});
  Rng rng(42);
  for (int t = 0; t < 10; ++t) {
    Connection nabla(line);
    nabla.set_gamma(0, 0, 0, testing::random_poly(rng, 1, 2, 3));
    SymPoissonPair pr(SymTensorField::bivector(line, {{testing::random_smooth(rng, 1)}}), nabla);
    // ½[θ,θ]^{xxx} = 3 f(f' + 2fh)
    Expr diff = schouten_self(pr).at({0, 0, 0}) - Expr(6.0) * one_dim_residual(pr);
    CHECK(zero_residual(diff, line.samples()) < 1e-12);
  }
}

TEST_CASE("schouten_self agrees with the general Schouten bracket") {
  Rng rng(43);
  for (int n = 2; n <= 3; ++n) {
    Chart c(n);
    for (int t = 0; t < 5; ++t) {
      SymPoissonPair pr(testing::random_multivector(rng, c, 2), testing::random_tf_connection(rng, c));
      auto general = schouten(pr.nabla(), pr.theta(), pr.theta());
      CHECK(testing::rel_deviation(schouten_self(pr), general, c.samples()) < 1e-12);
    }
  }
}

TEST_CASE("verdict hierarchy on a battery") {
  Rng rng(44);
  Chart c = plane();
  std::vector<SymPoissonPair> battery;
  for (int t = 0; t < 8; ++t) {
    battery.emplace_back(testing::random_multivector(rng, c, 2, 0), Connection(c));
    battery.emplace_back(testing::random_multivector(rng, c, 2, 1), Connection(c));
    battery.emplace_back(testing::random_multivector(rng, c, 2), testing::random_tf_connection(rng, c));
    Expr h = testing::random_smooth(rng, 2).substitute({Expr(), Expr::var(1)});
    battery.emplace_back(SymTensorField::bivector(c, {{h, Expr()}, {Expr(), Expr()}}), Connection(c));
    auto x = testing::random_vector(rng, c, 1);
    battery.emplace_back(decomposable(x), Connection(c));
  }
  battery.push_back(nondeg_kill(c));
  battery.push_back(inclusion(c));
  int parallel = 0, strong = 0, sp = 0;
  for (const auto& pr : battery) {
    bool p = is_parallel(pr).holds, s = is_strong(pr).holds, q = is_symmetric_poisson(pr).holds;
    parallel += p;
    strong += s;
    sp += q;
    if (p) CHECK(s);
    if (s) CHECK(q);
    if (s) CHECK(involutivity_check(pr).verdict != Involutivity::not_involutive);
  }
  CHECK(parallel >= 8);
  CHECK(strong > parallel);
  CHECK(sp > strong);
  CHECK(sp < static_cast<int>(battery.size()));
}

TEST_CASE("nondegenerate pairs: Killing and Levi-Civita characterizations") {
  Chart c = plane();
  Rng rng(45);
  struct Case {
    SymFormField g;
    Connection nabla;
  };
  std::vector<Case> cases;
  cases.push_back({nondeg_kill_metric(c), nondeg_kill(c).nabla()});
  for (int t = 0; t < 6; ++t) {
    // diagonal metrics stay nondegenerate on the box
    auto g = SymFormField::matrix(c, {{exp(Expr(0.5) * testing::random_poly(rng, 2, 1, 2)), Expr()},
                                      {Expr(), Expr(2.0) + sin(testing::random_poly(rng, 2, 1, 2))}});
    cases.push_back({g, levi_civita(g)});
    cases.push_back({g, testing::random_tf_connection(rng, c, 0)});
  }
  for (const auto& k : cases) {
    SymPoissonPair pr(inverse_metric(k.g), k.nabla);
    bool sp = is_symmetric_poisson(pr).holds;
    CHECK(sp == is_killing(k.nabla, k.g));
    auto lc = levi_civita(k.g);
    bool same = true;
    for (int a = 0; a < 2; ++a)
      for (int b = 0; b < 2; ++b)
        for (int d = 0; d < 2; ++d)
          same = same && zero_residual(lc.gamma(a, b, d) - k.nabla.gamma(a, b, d), c.samples()) <= 1e-9;
    CHECK(is_strong(pr).holds == same);
  }
}

TEST_CASE("characteristic data") {
  Chart line({"x"});
  auto cube = SymTensorField::bivector(line, {{line.parse("x^3").expr()}});
  auto cd = characteristic_data(cube, {2.0});
  CHECK(cd.rank == 1);
  CHECK(cd.p == 1);
  CHECK(cd.q == 0);
  Eigen::VectorXd e(1);
  e << 1.0;
  CHECK(cd.metric(e, e) == doctest::Approx(1.0 / 8));

  Chart c(3);
  auto zero = characteristic_data(SymTensorField(c, 2), {0.1, 0.2, 0.3});
  CHECK(zero.rank == 0);
  CHECK(zero.metric_gram.size() == 0);

  // rank-deficient random θ = Σ εₖ vₖ⊙vₖ/2, rebuilt from (im θ, g_θ)
  Rng rng(46);
  for (int t = 0; t < 10; ++t) {
    int r = rng.integer(1, 3);
    SymTensorField theta(c, 2);
    int neg = 0;
    for (int k = 0; k < r; ++k) {
      double s = rng.integer(0, 1) ? 1.0 : -1.0;
      neg += s < 0;
      theta = theta + decomposable(testing::random_vector(rng, c, 1)) * Expr(s);
    }
    Point x{rng.uniform(-1, 1), rng.uniform(-1, 1), rng.uniform(-1, 1)};
    auto d = characteristic_data(theta, x);
    CHECK(d.rank == r);
    CHECK(d.p + d.q == d.rank);
    CHECK(d.q == neg);
    CHECK((d.reconstruct() - d.theta).cwiseAbs().maxCoeff() <= 1e-8 * (1 + d.theta.cwiseAbs().maxCoeff()));
    // g_θ(θα, θβ) = θ(α, β)
    Eigen::VectorXd a = Eigen::VectorXd::Random(3), b = Eigen::VectorXd::Random(3);
    double lhs = d.metric(d.theta * a, d.theta * b);
    CHECK(lhs == doctest::Approx(a.dot(d.theta * b)).epsilon(1e-8));
  }
}

TEST_CASE("involutivity examples") {
  Chart c = plane();
  SymPoissonPair line_field(SymTensorField::bivector(c, {{Expr(1.0), Expr()}, {Expr(), Expr()}}), Connection(c));
  auto r1 = involutivity_check(line_field);
  CHECK(r1.verdict == Involutivity::involutive_on_samples);
  CHECK(r1.min_rank == 1);

  // R⊗R with R the radial field on the punctured plane
  Chart punctured({"x", "y"}, {{0.3, 1.5}, {-1.5, -0.3}});
  auto radial = SymTensorField::vector(punctured, {Expr::var(0), Expr::var(1)});
  SymPoissonPair rr(decomposable(radial), Connection(punctured));
  CHECK(involutivity_check(rr).verdict == Involutivity::involutive_on_samples);

  // ∂x and ∂y + x∂z do not close
  Chart c3({"x", "y", "z"});
  auto x1 = SymTensorField::vector(c3, {Expr(1.0), Expr(), Expr()});
  auto x2 = SymTensorField::vector(c3, {Expr(), Expr(1.0), Expr::var(0)});
  SymPoissonPair heis(decomposable(x1) + decomposable(x2), Connection(c3));
  auto r3 = involutivity_check(heis);
  CHECK(r3.verdict == Involutivity::not_involutive);
  CHECK_FALSE(r3.witness.empty());

  // rank drops at x = 0
  SymPoissonPair jump(SymTensorField::bivector(c, {{Expr(1.0), Expr()}, {Expr(), c.parse("x^2").expr()}}), Connection(c));
  Samples pts = c.samples(10);
  pts.push_back({0.0, 0.5});
  auto r4 = involutivity_check(jump, pts);
  CHECK(r4.verdict == Involutivity::inconclusive);
  CHECK(r4.min_rank == 1);
  CHECK(r4.max_rank == 2);
}

TEST_CASE("jacobiator identity") {
  Chart c = plane();
  auto inc = inclusion(c);
  Expr x = Expr::var(0), y = Expr::var(1);
  CHECK(zero_residual(jacobiator_identity_check(inc, x, y, x * y), c.samples()) < 1e-12);

  SymPoissonPair zero(SymTensorField(c, 2), Connection(c));
  CHECK(zero_residual(jacobiator(zero, x, y, x * y), c.samples()) == 0.0);
  CHECK(zero_residual(jacobiator_identity_check(zero, x, y, x * y), c.samples()) == 0.0);

  Rng rng(47);
  auto fl = flat(Chart(3), 2);
  for (int t = 0; t < 5; ++t) {
    Expr f = testing::random_poly(rng, 3, 3), g = testing::random_poly(rng, 3, 3), h = testing::random_poly(rng, 3, 3);
    CHECK(zero_residual(jacobiator_identity_check(fl, f, g, h), fl.chart().samples()) < 1e-12);
  }
  // off-shell the defect is −½[θ,θ]_s(df,dg,dh)
  for (int t = 0; t < 5; ++t) {
    SymPoissonPair pr(testing::random_multivector(rng, c, 2), testing::random_tf_connection(rng, c));
    Expr f = testing::random_poly(rng, 2, 2), g = testing::random_poly(rng, 2, 2), h = testing::random_poly(rng, 2, 2);
    auto tt = schouten_self(pr);
    Expr full;
    for (int a = 0; a < 2; ++a)
      for (int b = 0; b < 2; ++b)
        for (int d = 0; d < 2; ++d) full += tt.at({a, b, d}) * f.diff(a) * g.diff(b) * h.diff(d);
    CHECK(zero_residual(jacobiator_identity_check(pr, f, g, h) + Expr(0.5) * full, c.samples()) < 1e-10);
  }
}

TEST_CASE("strong morphism residual") {
  Chart c = plane();
  Expr x = Expr::var(0), y = Expr::var(1);
  CHECK(strong_morphism_check(inclusion(c), x, x).zero_residual(c.samples()) < 1e-12);
  SymPoissonPair zero(SymTensorField(c, 2), Connection(c));
  CHECK(strong_morphism_check(zero, x * y, y).is_structurally_zero());
  auto nk = nondeg_kill(c);
  bool found = false;
  std::vector<Expr> monomials{x, y, x * x, x * y, y * y};
  for (const auto& f : monomials)
    for (const auto& g : monomials)
      found = found || strong_morphism_check(nk, f, g).zero_residual(c.samples()) > 1e-6;
  CHECK(found);
}

TEST_CASE("scalar curvature and Laplacian") {
  Chart c = plane();
  auto f = c.parse("x^3*y + sin(x*y)").expr();
  auto euc = flat(c, 2);
  Expr lap = f.diff(0).diff(0) + f.diff(1).diff(1);
  CHECK(zero_residual(laplacian(euc, f) - lap, c.samples()) < 1e-13);
  auto lor = flat(c, 1);
  CHECK(zero_residual(laplacian(lor, f) - (f.diff(0).diff(0) - f.diff(1).diff(1)), c.samples()) < 1e-13);
  CHECK(zero_residual(scalar_curvature(euc), c.samples()) == 0.0);

  Rng rng(48);
  SymPoissonPair zero(SymTensorField(c, 2), testing::random_tf_connection(rng, c));
  CHECK(zero_residual(laplacian(zero, f), c.samples()) == 0.0);
  CHECK(zero_residual(scalar_curvature(zero), c.samples()) == 0.0);

  // round sphere in stereographic-free coordinates: g = dθ² + sin²θ dφ², scalar curvature 2
  Chart sph({"t", "f"}, {{0.3, 2.8}, {0.0, 6.0}});
  auto g = SymFormField::matrix(sph, {{Expr(1.0), Expr()}, {Expr(), pow(sin(Expr::var(0)), 2)}});
  SymPoissonPair round(inverse_metric(g), levi_civita(g));
  CHECK(zero_residual(scalar_curvature(round) - Expr(2.0), sph.samples()) < 1e-12);
}

TEST_CASE("regular foliations of the punctured plane") {
  for (int kind = 0; kind < 3; ++kind) {
    CAPTURE(kind);
    auto pr = testing::punctured_plane(kind);
    CHECK(is_symmetric_poisson(pr).holds);
    CHECK(is_strong(pr).holds);
    CHECK_FALSE(is_parallel(pr).holds);
    auto inv = involutivity_check(pr);
    CHECK(inv.verdict == Involutivity::involutive_on_samples);
    CHECK(inv.min_rank == 1);
    CHECK(inv.max_rank == 1);
  }
  // the opposite sign breaks ∇_XX = 0
  auto s = testing::punctured_plane(1);
  auto r = testing::punctured_plane(0);
  CHECK_FALSE(is_strong(SymPoissonPair(s.theta(), r.nabla())).holds);
  CHECK_FALSE(is_strong(SymPoissonPair(r.theta(), s.nabla())).holds);
}
