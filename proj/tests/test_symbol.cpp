#include <array>
#include <complex>
#include <random>

#include "catch2/catch_amalgamated.hpp"
#include "kreinosc/symbol.hpp"

using namespace kreinosc;

namespace {

std::mt19937_64 rng(771202u);

double uniform(double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

cplx random_cplx(double scale = 1.0) {
  return {uniform(-scale, scale), uniform(-scale, scale)};
}

std::array<double, kNumVars> random_point(double scale = 0.7) {
  std::array<double, kNumVars> v{};
  for (auto& c : v) c = uniform(-scale, scale);
  return v;
}

// A generic symbol with two exponential blocks and mixed monomials.
Symbol sample_symbol() {
  QuadForm q1;
  q1.c0 = cplx(0.1, -0.2);
  q1.lin[var_p(1)] = cplx(0.3, 0.4);
  q1.add_cross(var_x(0), var_x(0), cplx(-0.5, 0.0));
  q1.add_cross(var_p(0), var_x(1), cplx(0.0, 0.25));

  PolyMap m1;
  Mono a{};
  a[var_x(1)] = 2;
  m1[a] = cplx(1.0, 0.5);
  Mono b{};
  b[var_p(0)] = 1;
  b[var_x(2)] = 1;
  m1[b] = cplx(-0.7, 0.0);

  QuadForm q2;
  q2.lin[var_x(3)] = cplx(0.0, 1.0);

  PolyMap m2;
  m2[Mono{}] = cplx(0.0, -2.0);

  return Symbol::gaussian(m1, q1) + Symbol::gaussian(m2, q2);
}

}  // namespace

TEST_CASE("polynomial arithmetic expands products", "[symbol]") {
  Symbol s = Symbol::x_upper(1) + cplx(2.0) * Symbol::p_upper(0);
  Symbol sq = s * s;

  PolyMap expect;
  Mono xx{}, xp{}, pp{};
  xx[var_x(1)] = 2;
  xp[var_p(0)] = 1;
  xp[var_x(1)] = 1;
  pp[var_p(0)] = 2;
  expect[xx] = 1.0;
  expect[xp] = 4.0;
  expect[pp] = 4.0;

  CHECK(symbol_equal(sq, Symbol::from_poly(expect)));
  CHECK(sq.degree() == 2);
  CHECK(sq.is_polynomial());
}

TEST_CASE("lowered components carry the metric sign", "[symbol]") {
  CHECK(symbol_equal(Symbol::p_lowered(0), cplx(-1.0) * Symbol::p_upper(0)));
  for (int i = 1; i < 4; ++i) {
    CHECK(symbol_equal(Symbol::p_lowered(i), Symbol::p_upper(i)));
    CHECK(symbol_equal(Symbol::x_lowered(i), Symbol::x_upper(i)));
  }
  CHECK(symbol_equal(Symbol::x_lowered(0), cplx(-1.0) * Symbol::x_upper(0)));
}

TEST_CASE("differentiation matches finite differences", "[symbol]") {
  const Symbol f = sample_symbol();
  const double h = 1e-5;
  for (int slot = 0; slot < kNumVars; ++slot) {
    const Symbol df = f.derivative(slot);
    for (int trial = 0; trial < 4; ++trial) {
      auto v = random_point();
      auto vp = v, vm = v;
      vp[slot] += h;
      vm[slot] -= h;
      const cplx numeric = (f.evaluate(vp) - f.evaluate(vm)) / (2.0 * h);
      CHECK(std::abs(df.evaluate(v) - numeric) < 5e-7);
    }
  }
}

TEST_CASE("derivative of a pure Gaussian pulls down the exponent", "[symbol]") {
  QuadForm q;
  q.add_cross(var_x(1), var_x(1), cplx(-1.0, 0.0));
  const Symbol g = Symbol::exponential(q);

  Symbol expect = cplx(-2.0) * (Symbol::x_upper(1) * g);
  CHECK(symbol_equal(g.derivative(var_x(1)), expect));
}

TEST_CASE("conjugation conjugates evaluations on real points", "[symbol]") {
  const Symbol f = sample_symbol();
  const Symbol fc = f.conjugated();
  for (int trial = 0; trial < 6; ++trial) {
    auto v = random_point();
    CHECK(std::abs(fc.evaluate(v) - std::conj(f.evaluate(v))) < 1e-12);
  }
}

TEST_CASE("affine substitution agrees with composed evaluation", "[symbol]") {
  const Symbol f = sample_symbol();

  std::array<std::array<cplx, kNumVars>, kNumVars> A{};
  std::array<cplx, kNumVars> c{};
  for (int i = 0; i < kNumVars; ++i) {
    A[i][i] = cplx(uniform(0.5, 1.5), 0.0);
    c[i] = random_cplx(0.3);
  }
  // A few off-diagonal couplings.
  A[var_p(0)][var_x(0)] = cplx(0.2, 0.1);
  A[var_x(2)][var_p(1)] = cplx(-0.4, 0.0);

  const Symbol g = f.substitute_affine(A, c);
  for (int trial = 0; trial < 6; ++trial) {
    auto v = random_point();
    std::array<cplx, kNumVars> w{};
    for (int i = 0; i < kNumVars; ++i) {
      w[i] = c[i];
      for (int j = 0; j < kNumVars; ++j) w[i] += A[i][j] * v[j];
    }
    std::array<cplx, kNumVars> vc{};
    for (int i = 0; i < kNumVars; ++i) vc[i] = v[i];
    CHECK(std::abs(g.evaluate(vc) - f.evaluate(w)) < 1e-10);
  }
}

TEST_CASE("shift and scale are special cases of substitution", "[symbol]") {
  const Symbol f = sample_symbol();

  std::array<cplx, kNumVars> shift{};
  shift[var_p(2)] = cplx(0.4, 0.0);
  shift[var_x(0)] = cplx(0.0, -0.3);
  const Symbol fs = f.shift_vars(shift);

  std::array<double, kNumVars> scale{};
  for (int i = 0; i < kNumVars; ++i) scale[i] = 1.0;
  scale[var_p(1)] = 2.0;
  const Symbol fr = f.scale_vars(scale);

  for (int trial = 0; trial < 4; ++trial) {
    auto v = random_point();
    std::array<cplx, kNumVars> w{};
    for (int i = 0; i < kNumVars; ++i) w[i] = v[i] + shift[i];
    std::array<cplx, kNumVars> vc{};
    for (int i = 0; i < kNumVars; ++i) vc[i] = v[i];
    CHECK(std::abs(fs.evaluate(vc) - f.evaluate(w)) < 1e-11);

    auto u = v;
    u[var_p(1)] *= 2.0;
    std::array<cplx, kNumVars> uc{};
    for (int i = 0; i < kNumVars; ++i) uc[i] = u[i];
    CHECK(std::abs(fr.evaluate(vc) - f.evaluate(uc)) < 1e-11);
  }
}

TEST_CASE("canonicalization merges blocks and cancels terms", "[symbol]") {
  QuadForm q;
  q.lin[var_p(3)] = cplx(0.0, 1.0);

  PolyMap ma, mb;
  Mono x1{};
  x1[var_x(1)] = 1;
  ma[x1] = cplx(2.0);
  Mono p2{};
  p2[var_p(2)] = 1;
  mb[p2] = cplx(3.0);

  Symbol s = Symbol::gaussian(ma, q) + Symbol::gaussian(mb, q);
  CHECK(s.blocks.size() == 1);
  CHECK(s.blocks[0].terms.size() == 2);

  Symbol z = s - s;
  CHECK(z.is_zero());
  CHECK(symbol_distance(s, s) == 0.0);
}

TEST_CASE("string form is canonical across construction orders", "[symbol]") {
  Symbol a = Symbol::x_upper(1) + cplx(1.5) * Symbol::p_upper(1);
  Symbol b = cplx(1.5) * Symbol::p_upper(1) + Symbol::x_upper(1);
  CHECK(a.to_string() == b.to_string());
  CHECK(a.to_string() == "x1 + 1.5*p1");

  QuadForm q;
  q.add_cross(var_x(0), var_x(0), cplx(-0.5, 0.0));
  Symbol g = Symbol::exponential(q);
  CHECK(g.to_string() == "exp(-0.5*x0^2)");
}

TEST_CASE("exponential evaluation matches the exponent polynomial", "[symbol]") {
  QuadForm q;
  q.c0 = cplx(0.2, -0.1);
  q.lin[var_x(2)] = cplx(-0.3, 0.6);
  q.add_cross(var_p(1), var_x(1), cplx(0.15, 0.0));
  const Symbol g = Symbol::exponential(q);
  for (int trial = 0; trial < 5; ++trial) {
    auto v = random_point();
    std::array<cplx, kNumVars> vc{};
    for (int i = 0; i < kNumVars; ++i) vc[i] = v[i];
    CHECK(std::abs(g.evaluate(vc) - std::exp(q.evaluate(vc))) < 1e-12);
  }
}

TEST_CASE("pruning drops small coefficients only", "[symbol]") {
  Symbol s = Symbol::x_upper(0) + cplx(1e-18) * Symbol::p_upper(0);
  Symbol p = s.pruned(1e-14);
  CHECK(symbol_equal(p, Symbol::x_upper(0)));
  CHECK(p.blocks[0].terms.size() == 1);
}
