#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <sstream>

#include "spg/pw.hpp"
#include "support.hpp"

using namespace spg;
using spg::testing::Rng;

namespace {

constexpr double kPi = std::numbers::pi;

Chart plane() { return Chart({"x", "y"}); }

Connection nondeg_kill_connection(const Chart& c) {
  Connection nabla(c);
  nabla.set_symmetric(0, 0, 1, Expr(1.0));
  nabla.set_symmetric(1, 0, 1, Expr(1.0));
  return nabla;
}

SymPoissonPair nondeg_kill(const Chart& c) {
  auto g = sym_product(SymFormField::covector(c, {c.parse("exp(2*y)").expr(), Expr()}),
                       SymFormField::covector(c, {Expr(), c.parse("exp(2*x)").expr()}));
  return SymPoissonPair(inverse_metric(g), nondeg_kill_connection(c));
}

SymPoissonPair inclusion(const Chart& c) {
  return SymPoissonPair(SymTensorField::bivector(c, {{c.parse("1 + y^2").expr(), Expr()}, {Expr(), Expr()}}),
                        Connection(c));
}

SymTensorField half_square(const SymTensorField& x) { return sym_product(x, x) * Expr(0.5); }

// θ = X1⊗X1 + X2⊗X2 with X1 = ∂x, X2 = ∂y + x∂z; ∇_{∂x}∂y = −½∂z.
SymPoissonPair heisenberg(const Chart& c) {
  auto x1 = SymTensorField::vector(c, {Expr(1.0), Expr(), Expr()});
  auto x2 = SymTensorField::vector(c, {Expr(), Expr(1.0), Expr::var(0)});
  Connection nabla(c);
  nabla.set_symmetric(2, 0, 1, Expr(-0.5));
  return SymPoissonPair(half_square(x1) + half_square(x2), nabla);
}

// Flat connection in polar coordinates (r, φ).
Connection polar(const Chart& c) {
  Connection nabla(c);
  nabla.set_gamma(0, 1, 1, -Expr::var(0));
  nabla.set_symmetric(1, 0, 1, Expr(1.0) / Expr::var(0));
  return nabla;
}

Eigen::VectorXd eval_vec(const std::vector<Expr>& es, const std::vector<double>& y) {
  Eigen::VectorXd v(es.size());
  for (std::size_t i = 0; i < es.size(); ++i) v[i] = es[i].eval(y);
  return v;
}

Eigen::VectorXd phase_differential(const PhaseField& f, const std::vector<double>& y) {
  int n = f.n();
  Eigen::VectorXd d(2 * n);
  for (int i = 0; i < n; ++i) {
    d[i] = f.dx(i).eval(y);
    d[n + i] = f.dp(i).eval(y);
  }
  return d;
}

}  // namespace

TEST_CASE("PW metric matrix") {
  Chart c = plane();
  CotangentState s{{0.3, -0.2}, {0.5, 0.7}};
  auto flat = pw_metric_matrix(Connection(c), s);
  Eigen::MatrixXd expect = Eigen::MatrixXd::Zero(4, 4);
  expect.block(0, 2, 2, 2) = Eigen::MatrixXd::Identity(2, 2);
  expect.block(2, 0, 2, 2) = Eigen::MatrixXd::Identity(2, 2);
  CHECK((flat - expect).norm() == 0.0);

  // −p_kΓᵏᵢⱼ dxⁱ⊙dxʲ with p_kΓᵏ_xy = 2 gives −4 in the xy slots
  auto nk = pw_metric_matrix(nondeg_kill_connection(c), {{0, 0}, {1, 1}});
  expect(0, 1) = expect(1, 0) = -4.0;
  CHECK((nk - expect).norm() == 0.0);

  Rng rng(50);
  Chart c3(3);
  for (int t = 0; t < 20; ++t) {
    auto nabla = testing::random_tf_connection(rng, c3);
    CotangentState st{{rng.uniform(-1, 1), rng.uniform(-1, 1), rng.uniform(-1, 1)},
                      {rng.uniform(-2, 2), rng.uniform(-2, 2), rng.uniform(-2, 2)}};
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(pw_metric_matrix(nabla, st));
    int pos = 0, neg = 0;
    for (int i = 0; i < 6; ++i) (es.eigenvalues()[i] > 0 ? pos : neg) += 1;
    CHECK(pos == 3);
    CHECK(neg == 3);
  }
}

TEST_CASE("vertical lifts") {
  Chart c = plane();
  Expr f = c.parse("x*y + 1").expr();
  CHECK(vertical_lift(SymTensorField::scalar(c, f)).e.str() == f.str());
  auto x = SymTensorField::vector(c, {c.parse("x^2").expr(), c.parse("y").expr()});
  auto xv = vertical_lift(x);
  Rng rng(51);
  auto theta = testing::random_multivector(rng, c, 2);
  auto tv = vertical_lift(theta);
  for (const auto& y : phase_chart(c).samples(10)) {
    CHECK(xv(y) == doctest::Approx(y[0] * y[0] * y[2] + y[1] * y[3]));
    double half = 0;
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) half += 0.5 * theta.at({i, j}).eval(y) * y[2 + i] * y[2 + j];
    CHECK(tv(y) == doctest::Approx(half));
  }
}

TEST_CASE("PW bracket basics") {
  Chart c = plane();
  Chart ph = phase_chart(c);
  Rng rng(52);
  PhaseField f{c, testing::random_poly(rng, 4, 3)}, g{c, testing::random_poly(rng, 4, 3)};
  auto flat = pw_bracket(Connection(c), f, g);
  Expr oracle;
  for (int i = 0; i < 2; ++i) oracle += f.dx(i) * g.dp(i) + f.dp(i) * g.dx(i);
  CHECK(zero_residual(flat.e - oracle, ph.samples()) < 1e-13);

  auto nabla = testing::random_tf_connection(rng, c);
  auto fg = pw_bracket(nabla, f, g), gf = pw_bracket(nabla, g, f);
  CHECK(zero_residual(fg.e - gf.e, ph.samples()) < 1e-13);
  // Leibniz
  PhaseField k{c, testing::random_poly(rng, 4, 2)};
  auto lhs = pw_bracket(nabla, f, {c, g.e * k.e});
  CHECK(zero_residual(lhs.e - (pw_bracket(nabla, f, g).e * k.e + g.e * pw_bracket(nabla, f, k).e), ph.samples()) <
        1e-12);
  // {fᵛ, gᵛ} = 0
  auto fv = vertical_lift(SymTensorField::scalar(c, testing::random_smooth(rng, 2)));
  auto gv = vertical_lift(SymTensorField::scalar(c, testing::random_smooth(rng, 2)));
  CHECK(zero_residual(pw_bracket(nabla, fv, gv).e, ph.samples()) == 0.0);
  // {Xᵛ, Yᵛ} = ⟨X, Y⟩_sᵛ
  auto x = testing::random_vector(rng, c), y = testing::random_vector(rng, c);
  auto xy = pw_bracket(nabla, vertical_lift(x), vertical_lift(y));
  CHECK(zero_residual(xy.e - vertical_lift(symmetric_bracket(nabla, x, y)).e, ph.samples()) < 1e-12);
}

TEST_CASE("vertical lift carries the symmetric Schouten bracket to the PW bracket") {
  Rng rng(53);
  for (int n = 2; n <= 3; ++n) {
    Chart c(n);
    Chart ph = phase_chart(c, 2.0);
    for (int t = 0; t < 8; ++t) {
      auto nabla = testing::random_tf_connection(rng, c);
      int p = rng.integer(0, 2), q = rng.integer(p == 0 ? 1 : 0, 2);
      auto a = testing::random_multivector(rng, c, p), b = testing::random_multivector(rng, c, q);
      Expr lhs = vertical_lift(schouten(nabla, a, b)).e;
      Expr rhs = pw_bracket(nabla, vertical_lift(a), vertical_lift(b)).e;
      CHECK(zero_residual(lhs - rhs, ph.samples()) < 1e-9);
    }
  }
}

TEST_CASE("PW bracket from the inverse metric") {
  Rng rng(54);
  Chart c = plane();
  auto nabla = testing::random_tf_connection(rng, c);
  PhaseField f{c, testing::random_smooth(rng, 4)}, g{c, testing::random_smooth(rng, 4)};
  auto fg = pw_bracket(nabla, f, g);
  for (const auto& y : phase_chart(c).samples()) {
    CotangentState s{{y[0], y[1]}, {y[2], y[3]}};
    Eigen::MatrixXd gi = pw_metric_matrix(nabla, s).inverse();
    double via = phase_differential(f, y).dot(gi * phase_differential(g, y));
    CHECK(fg(y) == doctest::Approx(via).epsilon(1e-10));
  }
}

TEST_CASE("canonical bracket") {
  Chart c = plane();
  Chart ph = phase_chart(c);
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) {
      auto b = canonical_bracket({c, Expr::var(i)}, {c, momentum(c, j)});
      CHECK(zero_residual(b.e - Expr(i == j ? 1.0 : 0.0), ph.samples()) == 0.0);
    }
  Rng rng(55);
  PhaseField f{c, testing::random_smooth(rng, 4)}, g{c, testing::random_poly(rng, 4, 3)};
  CHECK(zero_residual(canonical_bracket(f, f).e, ph.samples()) == 0.0);
  CHECK(zero_residual(canonical_bracket(f, g).e + canonical_bracket(g, f).e, ph.samples()) == 0.0);
  for (int t = 0; t < 10; ++t) {
    int p = rng.integer(0, 2), q = rng.integer(1, 2);
    auto a = testing::random_multivector(rng, c, p), b = testing::random_multivector(rng, c, q);
    Expr lhs = vertical_lift(anticommutative_schouten(a, b)).e;
    Expr rhs = -canonical_bracket(vertical_lift(a), vertical_lift(b)).e;
    CHECK(zero_residual(lhs - rhs, ph.samples()) < 1e-9);
  }
}

TEST_CASE("PW gradient") {
  Chart c = plane();
  Chart ph = phase_chart(c);
  auto ident = SymTensorField::bivector(c, {{Expr(1.0), Expr()}, {Expr(), Expr(1.0)}});
  auto grad = pw_gradient(Connection(c), vertical_lift(ident));
  CHECK(zero_residual(grad[0] - momentum(c, 0), ph.samples()) == 0.0);
  CHECK(grad[2].is_zero());

  Rng rng(56);
  auto nabla = testing::random_tf_connection(rng, c);
  auto x = testing::random_vector(rng, c);
  auto gx = pw_gradient(nabla, vertical_lift(x));
  for (int i = 0; i < 2; ++i) CHECK(zero_residual(gx[i] - x.at({i}), ph.samples()) < 1e-14);

  PhaseField h{c, testing::random_smooth(rng, 4)};
  auto gh = pw_gradient(nabla, h);
  auto ham = hamiltonian_vector(h);
  for (const auto& y : ph.samples()) {
    CotangentState s{{y[0], y[1]}, {y[2], y[3]}};
    // g(grad H, ·) = dH
    Eigen::VectorXd lowered = pw_metric_matrix(nabla, s) * eval_vec(gh, y);
    CHECK((lowered - phase_differential(h, y)).norm() <= 1e-10 * (1 + lowered.norm()));
    // grad H = pr_V Ham H − pr_H Ham H, so grad + Ham is vertical
    auto sg = split(nabla, s, eval_vec(gh, y)), sh = split(nabla, s, eval_vec(ham, y));
    CHECK((sg.horizontal + sh.horizontal).norm() <= 1e-12 * (1 + sg.horizontal.norm()));
    CHECK((sg.vertical - sh.vertical).norm() <= 1e-10 * (1 + sg.vertical.norm()));
  }
}

TEST_CASE("free particle is integrated exactly") {
  Chart c = plane();
  auto h = vertical_lift(SymTensorField::bivector(c, {{Expr(1.0), Expr()}, {Expr(), Expr(1.0)}}));
  CotangentState s0{{0.1, -0.4}, {0.7, -1.3}};
  auto tr = integrate_pw(Connection(c), h, s0, 1e-3, 1000);
  CHECK(tr.steps() == 1000);
  CHECK(tr.channels.size() == 3);
  double worst = 0;
  for (std::size_t i = 0; i <= 1000; ++i) {
    double t = tr.time(i);
    for (int k = 0; k < 2; ++k) {
      worst = std::max(worst, std::abs(tr.states[i].x[k] - (s0.x[k] + s0.p[k] * t)));
      worst = std::max(worst, std::abs(tr.states[i].p[k] - s0.p[k]));
    }
  }
  CHECK(worst <= 1e-10);
  CHECK_THROWS_AS(integrate_pw(Connection(c), h, s0, 0.0, 10), std::invalid_argument);
  CHECK_THROWS_AS(integrate_pw(Connection(c), h, s0, 1e-3, 0), std::invalid_argument);
}

TEST_CASE("linear Hamiltonians and parallel transport") {
  Chart c({"r", "f"}, {{0.5, 2.0}, {0.0, 6.0}});
  auto nabla = polar(c);
  // Cartesian ∂x in polar coordinates is parallel
  auto x = SymTensorField::vector(c, {cos(Expr::var(1)), -sin(Expr::var(1)) / Expr::var(0)});
  auto h = vertical_lift(x);
  auto grad = pw_gradient(nabla, h);
  CotangentState s0{{1.0, 0.8}, {0.3, -0.6}};
  auto tr = integrate_pw(nabla, h, s0, 1e-3, 1000);
  // a(γ̇) = H is constant
  CHECK(tr.drift("H") <= 1e-8);
  // grad H is horizontal at every state
  for (const auto& s : tr.states) {
    auto y = s.flat();
    auto sp = split(nabla, s, eval_vec(grad, y));
    CHECK(sp.vertical.norm() <= 1e-12);
  }
  // ∇_γ̇ a = 0 by central differences
  double worst = 0;
  for (std::size_t i = 1; i < tr.steps(); ++i) {
    const auto& s = tr.states[i];
    for (int j = 0; j < 2; ++j) {
      double adot = (tr.states[i + 1].p[j] - tr.states[i - 1].p[j]) / (2 * tr.dt);
      double corr = 0;
      for (int k = 0; k < 2; ++k)
        for (int l = 0; l < 2; ++l) corr += nabla.gamma(k, l, j).eval(s.x) * tr.channel("v" + std::to_string(l + 1))[i] * s.p[k];
      worst = std::max(worst, std::abs(adot - corr));
    }
  }
  CHECK(worst <= 1e-6);
}

TEST_CASE("quadratic Hamiltonians of symmetric Poisson pairs") {
  Chart c = plane();
  for (const auto& pr : {inclusion(c), nondeg_kill(c)}) {
    REQUIRE(is_symmetric_poisson(pr).holds);
    CotangentState s0{{0.2, -0.1}, {0.6, 0.4}};
    auto tr = integrate_pw(pr.nabla(), vertical_lift(pr.theta()), s0, 1e-3, 1000);
    CHECK(tr.drift("H") <= 1e-8);
    auto sq = monitor_speed_square(pr, tr);
    double d = 0;
    for (double v : sq) d = std::max(d, std::abs(v - sq.front()));
    CHECK(d <= 1e-8);
    auto gr = monitor_geodesic_residual(pr, tr);
    CHECK(gr.max_residual <= 1e-6);
    CHECK(gr.residual.size() == 997);
  }
}

TEST_CASE("non-example: x d/dx⊗d/dx with the flat connection") {
  Chart line({"x"});
  SymPoissonPair pr(SymTensorField::bivector(line, {{Expr::var(0)}}), Connection(line));
  CotangentState s0{{0.5}, {1.0}};
  auto tr = integrate_pw(pr.nabla(), vertical_lift(pr.theta()), s0, 1e-3, 1000);
  auto sq = monitor_speed_square(pr, tr);
  double d = 0;
  for (double v : sq) d = std::max(d, std::abs(v - sq.front()));
  CHECK(d >= 1e-3);
  auto gr = monitor_geodesic_residual(pr, tr);
  CHECK(gr.max_rhs > 1e-2);
  CHECK(gr.max_residual <= 1e-5);

  SymPoissonPair zero(SymTensorField(line, 2), Connection(line));
  auto tz = integrate_pw(zero.nabla(), vertical_lift(zero.theta()), s0, 1e-3, 100);
  for (const auto& s : tz.states) CHECK(s.x[0] == 0.5);
  CHECK(monitor_geodesic_residual(zero, tz).max_residual == 0.0);
  for (double v : monitor_speed_square(zero, tz)) CHECK(v == 0.0);
  CHECK_THROWS_AS(monitor_geodesic_residual(zero, integrate_pw(zero.nabla(), vertical_lift(zero.theta()), s0, 1e-3, 3)),
                  std::invalid_argument);
}

TEST_CASE("geodesics") {
  Chart c = plane();
  auto line = integrate_geodesic(Connection(c), {0.0, 1.0}, {2.0, -1.0}, 1e-2, 100);
  CHECK(line.states.back().x[0] == doctest::Approx(2.0));
  CHECK(line.states.back().x[1] == doctest::Approx(0.0));

  // ∇_x∂x = ∇_y∂y = (x∂x + y∂y)/(x² + y²): the rotation field is geodesic
  Connection three(c);
  Expr r2 = c.parse("x^2 + y^2").expr();
  for (int k = 0; k < 2; ++k) {
    three.set_gamma(k, 0, 0, Expr::var(k) / r2);
    three.set_gamma(k, 1, 1, Expr::var(k) / r2);
  }
  std::size_t steps = static_cast<std::size_t>(std::round(2 * kPi / 1e-3));
  auto circ = integrate_geodesic(three, {1.0, 0.0}, {0.0, 1.0}, 2 * kPi / steps, steps);
  double drift = 0;
  for (const auto& s : circ.states) drift = std::max(drift, std::abs(std::hypot(s.x[0], s.x[1]) - 1.0));
  CHECK(drift <= 1e-6);
  CHECK(circ.states.back().x[0] == doctest::Approx(1.0).epsilon(1e-6));
  double self = 0;
  for (double v : geodesic_self_residual(three, circ)) self = std::max(self, v);
  CHECK(self <= 1e-7);
}

TEST_CASE("local geodesic invariance") {
  Chart c3({"x", "y", "z"});
  auto h = heisenberg(c3);
  REQUIRE(is_symmetric_poisson(h).holds);
  auto rep = check_locally_geodesically_invariant(h, {{0.1, 0.2, -0.3}, {0.5, -0.7, 0.4}}, 1e-3, 1000);
  CHECK(rep.max_base_distance <= 1e-6);
  CHECK(rep.max_image_residual <= 1e-6);

  Chart c = plane();
  SymPoissonPair flat(SymTensorField::bivector(c, {{Expr(1.0), Expr()}, {Expr(), Expr(-1.0)}}), Connection(c));
  auto fr = check_locally_geodesically_invariant(flat, {{0.0, 0.0}, {1.0, 2.0}}, 1e-3, 500);
  CHECK(fr.max_base_distance <= 1e-12);
  CHECK(fr.max_image_residual <= 1e-12);
  SymPoissonPair zero(SymTensorField(c, 2), Connection(c));
  CHECK_THROWS_AS(check_locally_geodesically_invariant(zero, {{0.0, 0.0}, {1.0, 2.0}}, 1e-3, 10),
                  std::invalid_argument);
}

TEST_CASE("Newtonian reduction") {
  Chart line({"x"});
  auto g = SymFormField::matrix(line, {{Expr(1.0)}});
  Expr f = line.parse("0.5*x^2").expr();
  std::size_t steps = static_cast<std::size_t>(std::round(2 * kPi / 1e-3));
  double dt = 2 * kPi / steps;
  auto tr = run_newtonian(g, f, {1.0}, {0.0}, dt, steps);
  double err = 0;
  for (std::size_t i = 0; i <= steps; ++i) err = std::max(err, std::abs(tr.states[i].x[0] - std::cos(tr.time(i))));
  CHECK(err <= 1e-6);
  CHECK(tr.drift("energy") <= 1e-7);

  auto coarse = [&](std::size_t n) {
    auto t = run_newtonian(g, f, {1.0}, {0.0}, 2 * kPi / n, n);
    double e = 0;
    for (std::size_t i = 0; i <= n; ++i) e = std::max(e, std::abs(t.states[i].x[0] - std::cos(t.time(i))));
    return e;
  };
  // dt ≈ 0.1 and 0.05
  CHECK(coarse(63) / coarse(126) >= 12.0);

  Chart c = plane();
  auto free = run_newtonian(SymFormField::matrix(c, {{Expr(1.0), Expr()}, {Expr(), Expr(1.0)}}), Expr(), {0, 0},
                            {1.0, -2.0}, 1e-2, 100);
  CHECK(free.states.back().x[0] == doctest::Approx(1.0));
  CHECK(free.states.back().x[1] == doctest::Approx(-2.0));
}

TEST_CASE("blow-up keeps the partial trajectory") {
  Chart line({"x"});
  PhaseField cubic{line, line.parse("x^3").expr() * momentum(line, 0)};
  try {
    integrate_pw(Connection(line), cubic, {{1.0}, {0.0}}, 0.05, 1000);
    FAIL("expected BlowUp");
  } catch (const BlowUp& e) {
    CHECK(e.step() > 0);
    CHECK(e.partial().states.size() == e.step());
  }
  PhaseField log{line, line.parse("ln(x)").expr() * momentum(line, 0)};
  CHECK_THROWS_AS(integrate_pw(Connection(line), log, {{0.5}, {0.0}}, 0.05, 1000), BlowUp);
}

TEST_CASE("CSV export") {
  Chart c = plane();
  auto h = vertical_lift(SymTensorField::bivector(c, {{Expr(1.0), Expr()}, {Expr(), Expr(1.0)}}));
  auto run = [&] {
    std::ostringstream os;
    write_csv(os, integrate_pw(Connection(c), h, {{0.1, 0.2}, {1.0 / 3, 0.7}}, 1e-2, 5));
    return os.str();
  };
  std::string a = run(), b = run();
  CHECK(a == b);
  std::istringstream is(a);
  std::string header, row;
  std::getline(is, header);
  CHECK(header == "t,x1,x2,p1,p2,H,v1,v2");
  std::getline(is, row);
  CHECK(row.find("0.33333333333333331") != std::string::npos);
  int rows = 1;
  while (std::getline(is, row)) ++rows;
  CHECK(rows == 6);
}
