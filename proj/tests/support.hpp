// Shared helpers for the unit and acceptance tests: random generators and small oracles.
#pragma once

#include <cmath>
#include <random>
#include <vector>

#include "spg/geometry.hpp"

namespace spg::testing {

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : g_(seed) {}
  double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(g_); }
  int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(g_); }
  std::mt19937_64& engine() { return g_; }

 private:
  std::mt19937_64 g_;
};

// Random polynomial of total degree <= deg with coefficients in [-1,1].
inline Expr random_poly(Rng& rng, int n, int deg, int terms = 4) {
  Expr sum;
  for (int t = 0; t < terms; ++t) {
    Expr mono(std::round(rng.uniform(-1, 1) * 8) / 4);
    int d = rng.integer(0, deg);
    for (int s = 0; s < d; ++s) mono = mono * Expr::var(rng.integer(0, n - 1));
    sum = sum + mono;
  }
  return sum;
}

// Random smooth expression mixing polynomials with exp/sin/cos.
inline Expr random_smooth(Rng& rng, int n) {
  Expr p = random_poly(rng, n, 2, 3);
  switch (rng.integer(0, 3)) {
    case 0:
      return p;
    case 1:
      return p * exp(Expr(0.5) * random_poly(rng, n, 1, 2));
    case 2:
      return p + sin(random_poly(rng, n, 2, 2));
    default:
      return p * cos(random_poly(rng, n, 1, 2)) + random_poly(rng, n, 2, 2);
  }
}

inline SymTensorField random_vector(Rng& rng, const Chart& c, int deg = 2) {
  std::vector<Expr> v;
  for (int i = 0; i < c.n(); ++i) v.push_back(random_poly(rng, c.n(), deg, 3));
  return SymTensorField::vector(c, v);
}

inline SymFormField random_covector(Rng& rng, const Chart& c, int deg = 2) {
  std::vector<Expr> v;
  for (int i = 0; i < c.n(); ++i) v.push_back(random_poly(rng, c.n(), deg, 3));
  return SymFormField::covector(c, v);
}

inline SymTensorField random_multivector(Rng& rng, const Chart& c, int r, int deg = 2) {
  return SymTensorField::generate(c, r, [&](const std::vector<int>&) { return random_poly(rng, c.n(), deg, 3); });
}

inline SymFormField random_form(Rng& rng, const Chart& c, int r, int deg = 2) {
  return SymFormField::generate(c, r, [&](const std::vector<int>&) { return random_poly(rng, c.n(), deg, 3); });
}

// Random torsion-free connection with polynomial symbols.
inline Connection random_tf_connection(Rng& rng, const Chart& c, int deg = 1) {
  Connection nabla(c);
  for (int k = 0; k < c.n(); ++k)
    for (int i = 0; i < c.n(); ++i)
      for (int j = i; j < c.n(); ++j) nabla.set_symmetric(k, i, j, random_poly(rng, c.n(), deg, 2));
  return nabla;
}

inline double max_abs_diff(const std::vector<double>& a, const std::vector<double>& b) {
  double m = 0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

inline double max_abs(const std::vector<double>& a) {
  double m = 0;
  for (double v : a) m = std::max(m, std::abs(v));
  return m;
}

// Relative deviation between two component arrays evaluated at the chart samples.
inline double rel_deviation(const SymArray& a, const SymArray& b, const Samples& s) {
  double worst = 0;
  for (const auto& x : s) {
    auto va = a.eval(x), vb = b.eval(x);
    double scale = std::max(max_abs(va), max_abs(vb));
    worst = std::max(worst, max_abs_diff(va, vb) / (1.0 + scale));
  }
  return worst;
}

}  // namespace spg::testing
