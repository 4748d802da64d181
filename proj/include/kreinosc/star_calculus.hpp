#pragma once
// Star-product calculus on phase-space symbols.
//
// The twisted convolution algebra is realized through polynomial-coefficient
// differential operators acting on Symbol. left_star_action(G) is the
// operator "G * .", right_star_action(G) is ". * G"; both are finite sums
// because G is polynomial. Left actions compose covariantly, right actions
// contravariantly, and their difference (the tilde action) is a vector
// field for every generator in generator_table().
//
// Index bookkeeping: all derivative multi-indices and coefficients below are
// stored against the upper-index variables p^mu, x^mu. Contractions with a
// lowered index on p or x carry the metric sign through kMetricDiag.

#include <array>
#include <cmath>
#include <complex>
#include <cstdint>
#include <functional>
#include <map>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "kreinosc/checks.hpp"
#include "kreinosc/minkowski.hpp"
#include "kreinosc/symbol.hpp"

namespace kreinosc {

// ---------------------------------------------------------------------------
// PolyDiffOp: sum of terms  coeff * v^mono * d^dpow / dv^dpow,
// normal ordered (all multiplications stand left of all derivatives).

struct DTerm {
  cplx coeff{0.0, 0.0};
  Mono mono{};  // multiply by product of v_slot^mono[slot]
  Mono dpow{};  // then apply product of d/dv_slot^dpow[slot] first
};

namespace detail {

inline bool mono_less(const Mono& a, const Mono& b) {
  for (int i = 0; i < kNumVars; ++i) {
    if (a[i] != b[i]) return a[i] < b[i];
  }
  return false;
}

inline bool dterm_key_less(const DTerm& a, const DTerm& b) {
  if (a.dpow != b.dpow) return mono_less(a.dpow, b.dpow);
  return mono_less(a.mono, b.mono);
}

inline double binom(int n, int k) {
  double r = 1.0;
  for (int j = 1; j <= k; ++j) r *= double(n - k + j) / double(j);
  return r;
}

inline double falling(int n, int k) {
  double r = 1.0;
  for (int j = 0; j < k; ++j) r *= double(n - j);
  return r;
}

inline cplx pow_minus_i(int k) {
  switch (k & 3) {
    case 0: return {1.0, 0.0};
    case 1: return {0.0, -1.0};
    case 2: return {-1.0, 0.0};
    default: return {0.0, 1.0};
  }
}

}  // namespace detail

class PolyDiffOp {
 public:
  std::vector<DTerm> terms;

  PolyDiffOp() = default;

  static PolyDiffOp zero() { return {}; }

  static PolyDiffOp identity(cplx c = cplx(1.0, 0.0)) {
    PolyDiffOp op;
    op.terms.push_back(DTerm{c, Mono{}, Mono{}});
    return op;
  }

  // Multiplication by a polynomial symbol.
  static PolyDiffOp mult(const Symbol& g) {
    PolyDiffOp op;
    for (const auto& [m, c] : g.poly_map()) op.terms.push_back(DTerm{c, m, Mono{}});
    op.canonicalize();
    return op;
  }

  static PolyDiffOp deriv(int slot, cplx c = cplx(1.0, 0.0)) {
    PolyDiffOp op;
    DTerm t;
    t.coeff = c;
    t.dpow[slot] = 1;
    op.terms.push_back(t);
    return op;
  }

  bool is_zero() const { return terms.empty(); }

  PolyDiffOp& operator+=(const PolyDiffOp& o) {
    terms.insert(terms.end(), o.terms.begin(), o.terms.end());
    canonicalize();
    return *this;
  }

  friend PolyDiffOp operator+(PolyDiffOp a, const PolyDiffOp& b) {
    a += b;
    return a;
  }

  friend PolyDiffOp operator*(cplx c, PolyDiffOp a) {
    for (auto& t : a.terms) t.coeff *= c;
    return a;
  }

  friend PolyDiffOp operator-(PolyDiffOp a, const PolyDiffOp& b) {
    return a + cplx(-1.0, 0.0) * b;
  }

  // Operator composition A o B, re-expressed in normal order via
  //   d^a (v^m f) = sum_{k<=min(a,m)} binom(a,k) falling(m,k) v^{m-k} d^{a-k} f
  // applied slot by slot.
  friend PolyDiffOp operator*(const PolyDiffOp& A, const PolyDiffOp& B) {
    PolyDiffOp out;
    for (const auto& ta : A.terms) {
      for (const auto& tb : B.terms) {
        Mono kmax;
        for (int i = 0; i < kNumVars; ++i)
          kmax[i] = std::min(ta.dpow[i], tb.mono[i]);
        Mono k{};
        for (;;) {
          double factor = 1.0;
          for (int i = 0; i < kNumVars; ++i) {
            if (k[i]) factor *= detail::binom(ta.dpow[i], k[i]) * detail::falling(tb.mono[i], k[i]);
          }
          DTerm t;
          t.coeff = ta.coeff * tb.coeff * factor;
          for (int i = 0; i < kNumVars; ++i) {
            t.mono[i] = std::uint8_t(ta.mono[i] + tb.mono[i] - k[i]);
            t.dpow[i] = std::uint8_t(ta.dpow[i] - k[i] + tb.dpow[i]);
          }
          out.terms.push_back(t);

          int slot = 0;
          while (slot < kNumVars && k[slot] == kmax[slot]) {
            k[slot] = 0;
            ++slot;
          }
          if (slot == kNumVars) break;
          ++k[slot];
        }
      }
    }
    out.canonicalize();
    return out;
  }

  friend PolyDiffOp commutator(const PolyDiffOp& A, const PolyDiffOp& B) {
    return A * B - B * A;
  }

  Symbol apply(const Symbol& phi) const {
    // Derivatives of phi are shared between terms with equal dpow.
    std::map<Mono, Symbol, bool (*)(const Mono&, const Mono&)> cache(detail::mono_less);
    Symbol out = Symbol::zero();
    for (const auto& t : terms) {
      auto it = cache.find(t.dpow);
      if (it == cache.end()) it = cache.emplace(t.dpow, phi.derivative(t.dpow)).first;
      out += it->second.times_monomial(t.mono, t.coeff);
    }
    out.canonicalize();
    return out;
  }

  void canonicalize(double drop_tol = 0.0) {
    std::sort(terms.begin(), terms.end(), detail::dterm_key_less);
    std::vector<DTerm> merged;
    for (const auto& t : terms) {
      if (!merged.empty() && merged.back().mono == t.mono && merged.back().dpow == t.dpow) {
        merged.back().coeff += t.coeff;
      } else {
        merged.push_back(t);
      }
    }
    terms.clear();
    for (const auto& t : merged) {
      if (std::abs(t.coeff) > drop_tol) terms.push_back(t);
    }
  }

  double max_abs_coeff() const {
    double m = 0.0;
    for (const auto& t : terms) m = std::max(m, std::abs(t.coeff));
    return m;
  }

  std::string to_string() const {
    if (terms.empty()) return "0";
    std::string s;
    bool first = true;
    for (const auto& t : terms) {
      if (!first) s += " + ";
      first = false;
      s += detail::format_coeff(t.coeff);
      std::string m = detail::format_mono(t.mono);
      if (!m.empty()) s += "*" + m;
      for (int i = 0; i < kNumVars; ++i) {
        for (int r = 0; r < t.dpow[i]; ++r) s += std::string("*d_") + detail::var_name(i);
      }
    }
    return s;
  }
};

inline double op_distance(const PolyDiffOp& a, const PolyDiffOp& b) {
  PolyDiffOp d = a - b;
  d.canonicalize();
  return d.max_abs_coeff();
}

inline bool op_equal(const PolyDiffOp& a, const PolyDiffOp& b, double tol = 1e-12) {
  return op_distance(a, b) <= tol;
}

// ---------------------------------------------------------------------------
// Star actions. With the twist D = sum_mu ( d/dp_mu (x) d/dx^mu
//                                         - d/dx_mu (x) d/dp^mu )
// acting on (G, phi) pairs, G * phi = sum_k (-i)^k / k! D^k(G, phi)-contracted,
// and phi * G puts phi in the first slot. The lowered derivative on slot mu
// contributes kMetricDiag[mu] relative to the stored upper-index one.

namespace detail {

inline PolyMap poly_derivative_map(const PolyMap& g, int slot) {
  PolyMap out;
  for (const auto& [m, c] : g) {
    if (m[slot] == 0) continue;
    Mono md = m;
    md[slot] -= 1;
    out[md] += c * double(m[slot]);
  }
  return out;
}

// d^a/dp^a d^b/dx^b applied to g, with a, b multi-indices over mu = 0..3.
inline PolyMap poly_multi_derivative(const PolyMap& g, const std::array<int, 4>& a,
                                     const std::array<int, 4>& b) {
  PolyMap cur = g;
  for (int mu = 0; mu < 4; ++mu) {
    for (int r = 0; r < a[mu] && !cur.empty(); ++r) cur = poly_derivative_map(cur, var_p(mu));
    for (int r = 0; r < b[mu] && !cur.empty(); ++r) cur = poly_derivative_map(cur, var_x(mu));
  }
  return cur;
}

inline void enumerate_multi4(int max_total, std::vector<std::array<int, 4>>& out) {
  for (int t = 0; t <= max_total; ++t) {
    for (int i0 = 0; i0 <= t; ++i0)
      for (int i1 = 0; i1 + i0 <= t; ++i1)
        for (int i2 = 0; i2 + i1 + i0 <= t; ++i2)
          out.push_back({i0, i1, i2, t - i0 - i1 - i2});
  }
}

inline double multi_factorial(const std::array<int, 4>& a) {
  double r = 1.0;
  for (int mu = 0; mu < 4; ++mu)
    for (int j = 2; j <= a[mu]; ++j) r *= double(j);
  return r;
}

inline int multi_total(const std::array<int, 4>& a) { return a[0] + a[1] + a[2] + a[3]; }

inline double metric_sign_power(const std::array<int, 4>& a, const std::array<int, 4>& b) {
  // Product over mu of kMetricDiag[mu]^(a_mu + b_mu); only mu = 0 matters.
  return ((a[0] + b[0]) % 2 == 0) ? 1.0 : -1.0;
}

}  // namespace detail

enum class StarSide { Left, Right };

// hbar_eff rescales the twist (one power per derivative pairing); the
// physical algebra sits at hbar_eff = 1.
inline PolyDiffOp star_action(const Symbol& G, StarSide side, double hbar_eff = 1.0) {
  if (!G.is_polynomial())
    throw std::invalid_argument("star_action: generator symbol must be polynomial");
  const PolyMap g = G.poly_map();
  int deg = 0;
  for (const auto& [m, c] : g) deg = std::max(deg, mono_degree(m));

  std::vector<std::array<int, 4>> multis;
  detail::enumerate_multi4(deg, multis);

  PolyDiffOp op;
  for (const auto& a : multis) {
    const int ta = detail::multi_total(a);
    if (ta > deg) continue;
    for (const auto& b : multis) {
      const int tb = detail::multi_total(b);
      if (ta + tb > deg) continue;

      PolyMap gd;
      if (side == StarSide::Left) {
        // (d_p^a d_x^b G) with lowered indices on G's derivatives.
        gd = detail::poly_multi_derivative(g, a, b);
      } else {
        // (d_x^a d_p^b G) with plain upper-index derivatives on G.
        gd = detail::poly_multi_derivative(g, b, a);
      }
      if (gd.empty()) continue;

      cplx factor = detail::pow_minus_i(ta + tb);
      if (tb % 2) factor = -factor;
      factor /= detail::multi_factorial(a) * detail::multi_factorial(b);
      factor *= std::pow(hbar_eff, ta + tb);
      const double sgn = detail::metric_sign_power(a, b);

      Mono dpow{};
      if (side == StarSide::Left) {
        // Lowered derivatives landed on G: fold their metric signs into the
        // coefficient; target derivatives are plain d_x^a d_p^b.
        factor *= sgn;
        for (int mu = 0; mu < 4; ++mu) {
          dpow[var_x(mu)] = std::uint8_t(a[mu]);
          dpow[var_p(mu)] = std::uint8_t(b[mu]);
        }
      } else {
        // Lowered derivatives land on the target: d_p^a d_x^b with signs.
        factor *= sgn;
        for (int mu = 0; mu < 4; ++mu) {
          dpow[var_p(mu)] = std::uint8_t(a[mu]);
          dpow[var_x(mu)] = std::uint8_t(b[mu]);
        }
      }

      for (const auto& [m, c] : gd) op.terms.push_back(DTerm{c * factor, m, dpow});
    }
  }
  op.canonicalize();
  return op;
}

inline PolyDiffOp left_star_action(const Symbol& G, double hbar_eff = 1.0) {
  return star_action(G, StarSide::Left, hbar_eff);
}

inline PolyDiffOp right_star_action(const Symbol& G, double hbar_eff = 1.0) {
  return star_action(G, StarSide::Right, hbar_eff);
}

// The tilde action G* . - . *G; a pure vector field for every H_R(1,3)
// generator (zeroth- and second-order pieces of left and right cancel).
inline PolyDiffOp tilde_action(const Symbol& G, double hbar_eff = 1.0) {
  return left_star_action(G, hbar_eff) - right_star_action(G, hbar_eff);
}

inline Symbol star_apply(const Symbol& G, const Symbol& phi, StarSide side,
                         double hbar_eff = 1.0) {
  return star_action(G, side, hbar_eff).apply(phi);
}

// Star product of two polynomial symbols.
inline Symbol star(const Symbol& a, const Symbol& b, double hbar_eff = 1.0) {
  return star_apply(a, b, StarSide::Left, hbar_eff);
}

// Flow-side bracket: moyal_bracket(G, rho) = (rho*G - G*rho) / 2i drives
// d rho/ds = moyal_bracket(G, rho) along the flow generated by G.
inline Symbol moyal_bracket(const Symbol& G, const Symbol& rho, double hbar_eff = 1.0) {
  Symbol d = star_apply(G, rho, StarSide::Right, hbar_eff) -
             star_apply(G, rho, StarSide::Left, hbar_eff);
  Symbol out = cplx(0.0, -0.5) * d;  // 1/(2i) = -i/2
  out.canonicalize();
  return out;
}

// Poisson bracket with metric-contracted pairing:
// {a,b} = sum_mu eta^{mumu} ( d_{x^mu}a d_{p^mu}b - d_{p^mu}a d_{x^mu}b ).
inline Symbol poisson_bracket(const Symbol& a, const Symbol& b) {
  Symbol out = Symbol::zero();
  for (int mu = 0; mu < 4; ++mu) {
    const double s = kMetricDiag[mu];
    out += cplx(s, 0.0) * (a.derivative(var_x(mu)) * b.derivative(var_p(mu)));
    out += cplx(-s, 0.0) * (a.derivative(var_p(mu)) * b.derivative(var_x(mu)));
  }
  out.canonicalize();
  return out;
}

// ---------------------------------------------------------------------------
// Canonical operator pairs acting on symbols from the left/right.

inline PolyDiffOp xhat_left(int mu) {
  return PolyDiffOp::mult(Symbol::x_lowered(mu)) + PolyDiffOp::deriv(var_p(mu), cplx(0.0, 1.0));
}

inline PolyDiffOp phat_left(int mu) {
  return PolyDiffOp::mult(Symbol::p_lowered(mu)) + PolyDiffOp::deriv(var_x(mu), cplx(0.0, -1.0));
}

inline PolyDiffOp xhat_right(int mu) {
  return PolyDiffOp::mult(Symbol::x_lowered(mu)) + PolyDiffOp::deriv(var_p(mu), cplx(0.0, -1.0));
}

inline PolyDiffOp phat_right(int mu) {
  return PolyDiffOp::mult(Symbol::p_lowered(mu)) + PolyDiffOp::deriv(var_x(mu), cplx(0.0, 1.0));
}

// Lowering / raising pair: annihilation carries an upper index,
// creation (the eta-adjoint) a lower one.
inline PolyDiffOp annihilation_left(int mu) {
  return cplx(kMetricDiag[mu], 0.0) * (xhat_left(mu) + cplx(0.0, 1.0) * phat_left(mu));
}

inline PolyDiffOp creation_left(int mu) {
  return xhat_left(mu) - cplx(0.0, 1.0) * phat_left(mu);
}

// Mode-summed level operator (1/4) sum_mu creation_mu annihilation^mu.
inline PolyDiffOp number_action() {
  PolyDiffOp n;
  for (int mu = 0; mu < 4; ++mu) n += creation_left(mu) * annihilation_left(mu);
  return cplx(0.25, 0.0) * n;
}

// ---------------------------------------------------------------------------
// Generator table: the fourteen flow generators of the group (plus the
// central phase). g is the multiplicative symbol, star its left action,
// tilde the induced vector field.

struct GeneratorInfo {
  std::string name;
  Symbol g;
  PolyDiffOp star;
  PolyDiffOp tilde;
};

inline GeneratorInfo make_generator(std::string name, const Symbol& g) {
  GeneratorInfo info;
  info.name = std::move(name);
  info.g = g;
  info.star = left_star_action(g);
  info.tilde = tilde_action(g);
  return info;
}

// Order: theta, then -x^0..-x^3 (g = p_mu), then p^0..p^3 (g = x_mu),
// then the six w^{mu nu} with mu < nu (g = x_mu p_nu - x_nu p_mu).
inline std::vector<GeneratorInfo> generator_table() {
  std::vector<GeneratorInfo> table;
  table.push_back(make_generator("theta", Symbol::constant(1.0)));
  for (int mu = 0; mu < 4; ++mu)
    table.push_back(make_generator("-x^" + std::to_string(mu), Symbol::p_lowered(mu)));
  for (int mu = 0; mu < 4; ++mu)
    table.push_back(make_generator("p^" + std::to_string(mu), Symbol::x_lowered(mu)));
  for (int mu = 0; mu < 4; ++mu) {
    for (int nu = mu + 1; nu < 4; ++nu) {
      Symbol g = Symbol::x_lowered(mu) * Symbol::p_lowered(nu) -
                 Symbol::x_lowered(nu) * Symbol::p_lowered(mu);
      table.push_back(make_generator("w^{" + std::to_string(mu) + std::to_string(nu) + "}", g));
    }
  }
  return table;
}

// Aggregated residuals for the closure of the generator table under the star
// commutator, reported in the same shape as the matrix-side algebra suite.
// The central element theta commutes with everything and its vector field
// vanishes; translations close on theta; rotations/boosts rotate the
// translations and close on themselves with metric-weighted coefficients.
inline std::vector<IdentityCheck> verify_generator_table() {
  struct Key {
    int kind;  // 0 theta, 1 g = p_mu, 2 g = x_mu, 3 g = x_mu p_nu - x_nu p_mu
    int mu = 0;
    int nu = 0;
  };
  std::vector<Key> keys;
  keys.push_back({0});
  for (int mu = 0; mu < 4; ++mu) keys.push_back({1, mu});
  for (int mu = 0; mu < 4; ++mu) keys.push_back({2, mu});
  for (int mu = 0; mu < 4; ++mu)
    for (int nu = mu + 1; nu < 4; ++nu) keys.push_back({3, mu, nu});

  const auto eta = [](int a, int b) { return a == b ? kMetricDiag[a] : 0.0; };
  const auto J = [](int a, int b) {
    return Symbol::x_lowered(a) * Symbol::p_lowered(b) -
           Symbol::x_lowered(b) * Symbol::p_lowered(a);
  };
  const std::function<Symbol(const Key&, const Key&)> combo = [&](const Key& A,
                                                                  const Key& B) -> Symbol {
    const cplx twoi(0.0, 2.0);
    if (A.kind == 0 || B.kind == 0) return Symbol::zero();
    if (A.kind == 2 && B.kind == 1) return cplx(eta(A.mu, B.mu)) * twoi * Symbol::constant(1.0);
    if (A.kind == 1 && B.kind == 2) return cplx(-1.0) * combo(B, A);
    if (A.kind == B.kind && A.kind != 3) return Symbol::zero();
    if (A.kind == 3 && B.kind == 2)
      return twoi * (cplx(eta(A.mu, B.mu)) * Symbol::x_lowered(A.nu) -
                     cplx(eta(A.nu, B.mu)) * Symbol::x_lowered(A.mu));
    if (A.kind == 3 && B.kind == 1)
      return twoi * (cplx(eta(A.mu, B.mu)) * Symbol::p_lowered(A.nu) -
                     cplx(eta(A.nu, B.mu)) * Symbol::p_lowered(A.mu));
    if (A.kind != 3 && B.kind == 3) return cplx(-1.0) * combo(B, A);
    return twoi * (cplx(eta(A.nu, B.nu)) * J(A.mu, B.mu) + cplx(eta(A.mu, B.mu)) * J(A.nu, B.nu) -
                   cplx(eta(A.mu, B.nu)) * J(A.nu, B.mu) - cplx(eta(A.nu, B.mu)) * J(A.mu, B.nu));
  };

  const auto table = generator_table();
  double symbols = 0.0, stars = 0.0, tildes = 0.0, mixed = 0.0;
  for (std::size_t i = 0; i < table.size(); ++i) {
    for (std::size_t j = 0; j < table.size(); ++j) {
      const Symbol expect = combo(keys[i], keys[j]);
      symbols = std::max(symbols,
                         symbol_distance(star(table[i].g, table[j].g) - star(table[j].g, table[i].g),
                                         expect));
      stars = std::max(stars, op_distance(commutator(table[i].star, table[j].star),
                                          left_star_action(expect)));
      tildes = std::max(tildes, op_distance(commutator(table[i].tilde, table[j].tilde),
                                            tilde_action(expect)));
      mixed = std::max(mixed, op_distance(commutator(PolyDiffOp::mult(table[i].g), table[j].tilde),
                                          PolyDiffOp::mult(expect)));
    }
  }

  std::vector<IdentityCheck> out;
  out.push_back({"tilde action of the central generator vanishes", 0,
                 op_distance(table[0].tilde, PolyDiffOp::zero())});
  out.push_back({"star commutators of generator symbols close on the algebra", 0, symbols});
  out.push_back({"left star actions represent the algebra", 0, stars});
  out.push_back({"tilde vector fields close with the same structure constants", 0, tildes});
  out.push_back({"mixed brackets [mult(G), tilde(H)] = mult([G, H])", 0, mixed});
  return out;
}

// ---------------------------------------------------------------------------
// Finite flows.

// One translation factor in x: phi -> phi(p, x + x'/2) * exp(i <x',p> / 2).
inline Symbol translation_flow_x(const Symbol& phi, const FourVector& xp) {
  std::array<cplx, kNumVars> shift{};
  for (int mu = 0; mu < 4; ++mu) shift[var_x(mu)] = cplx(0.5 * xp[mu], 0.0);
  Symbol out = phi.shift_vars(shift);

  QuadForm q;
  for (int mu = 0; mu < 4; ++mu) q.lin[var_p(mu)] = cplx(0.0, 0.5 * xp.lower(mu));
  out = out * Symbol::exponential(q);
  out.canonicalize();
  return out;
}

// One translation factor in p: phi -> phi(p + p'/2, x) * exp(-i <p',x> / 2).
inline Symbol translation_flow_p(const Symbol& phi, const FourVector& pp) {
  std::array<cplx, kNumVars> shift{};
  for (int mu = 0; mu < 4; ++mu) shift[var_p(mu)] = cplx(0.5 * pp[mu], 0.0);
  Symbol out = phi.shift_vars(shift);

  QuadForm q;
  for (int mu = 0; mu < 4; ++mu) q.lin[var_x(mu)] = cplx(0.0, -0.5 * pp.lower(mu));
  out = out * Symbol::exponential(q);
  out.canonicalize();
  return out;
}

// Composite translation flow, p-factor after x-factor.
inline Symbol translation_flow(const Symbol& phi, const FourVector& pp, const FourVector& xp) {
  return translation_flow_p(translation_flow_x(phi, xp), pp);
}

// Left regular shift by a group translation (p_A, x_A): equals the composite
// flow at doubled, negated parameters times the phase exp(-i <p_A, x_A>)
// produced when the two factors are reassembled into a single group element.
inline Symbol left_group_shift(const Symbol& phi, const FourVector& pA, const FourVector& xA) {
  FourVector mp, mx;
  for (int mu = 0; mu < 4; ++mu) {
    mp[mu] = -2.0 * pA[mu];
    mx[mu] = -2.0 * xA[mu];
  }
  Symbol out = translation_flow(phi, mp, mx);
  const double ph = -mdot(pA, xA);
  out = cplx(std::cos(ph), std::sin(ph)) * out;
  out.canonicalize();
  return out;
}

// ---------------------------------------------------------------------------
// Schroedinger flow: phi(s) = exp(-i (s/2) G*) phi.

namespace detail {

// For linear G = c + sum g_x[mu] x^mu + sum g_p[mu] p^mu the left action
// splits into commuting multiplication and constant-shift parts, so the
// exponential is exact: shift p^mu by (s/2) eta^mumu g_x[mu], shift x^mu by
// -(s/2) eta^mumu g_p[mu], then multiply by exp(-i (s/2) G(v)).
inline Symbol schrodinger_flow_linear(const Symbol& phi, const Symbol& G, double s) {
  std::array<cplx, 4> gx{}, gp{};
  cplx c0{0.0, 0.0};
  for (const auto& [m, c] : G.poly_map()) {
    const int d = mono_degree(m);
    if (d == 0) {
      c0 = c;
      continue;
    }
    for (int mu = 0; mu < 4; ++mu) {
      if (m[var_p(mu)] == 1 && d == 1) gp[mu] = c;
      if (m[var_x(mu)] == 1 && d == 1) gx[mu] = c;
    }
  }

  std::array<cplx, kNumVars> shift{};
  for (int mu = 0; mu < 4; ++mu) {
    shift[var_p(mu)] = 0.5 * s * kMetricDiag[mu] * gx[mu];
    shift[var_x(mu)] = -0.5 * s * kMetricDiag[mu] * gp[mu];
  }
  Symbol out = phi.shift_vars(shift);

  QuadForm q;
  const cplx mihs(0.0, -0.5 * s);
  q.c0 = mihs * c0;
  for (int mu = 0; mu < 4; ++mu) {
    q.lin[var_p(mu)] = mihs * gp[mu];
    q.lin[var_x(mu)] = mihs * gx[mu];
  }
  out = out * Symbol::exponential(q);
  out.canonicalize();
  return out;
}

}  // namespace detail

struct SchrodingerOptions {
  int steps = 0;          // 0: require a closed-form or eigenfunction path
  int max_terms = 60;     // series terms per step
  double series_tol = 1e-14;
};

// Detects star-eigenfunctions: if G * phi = lambda phi within tol returns
// true and stores lambda.
inline bool star_eigenvalue(const Symbol& G, const Symbol& phi, cplx& lambda,
                            double tol = 1e-10) {
  Symbol r = star_apply(G, phi, StarSide::Left);
  Symbol pc = phi;
  pc.canonicalize();
  if (pc.is_zero()) return false;

  // Ratio taken at the largest coefficient of phi.
  cplx best_phi{0.0, 0.0};
  const ExpBlock* best_block = nullptr;
  const Term* best_term = nullptr;
  for (const auto& blk : pc.blocks) {
    for (const auto& t : blk.terms) {
      if (std::abs(t.coeff) > std::abs(best_phi)) {
        best_phi = t.coeff;
        best_block = &blk;
        best_term = &t;
      }
    }
  }
  if (!best_block) return false;

  cplx r_coeff{0.0, 0.0};
  for (const auto& blk : r.blocks) {
    if (blk.q.distance(best_block->q) > 1e-9) continue;
    for (const auto& t : blk.terms) {
      if (t.mono == best_term->mono) r_coeff = t.coeff;
    }
  }
  lambda = r_coeff / best_phi;

  Symbol resid = r - lambda * pc;
  resid.canonicalize();
  const double scale = std::max(1.0, pc.max_abs_coeff() * std::abs(lambda));
  return resid.max_abs_coeff() <= tol * scale;
}

inline Symbol schrodinger_flow(const Symbol& phi, const Symbol& G, double s,
                               SchrodingerOptions opt = {}) {
  if (!G.is_polynomial())
    throw std::invalid_argument("schrodinger_flow: generator must be polynomial");
  if (s == 0.0) return phi;

  if (G.degree() <= 1) return detail::schrodinger_flow_linear(phi, G, s);

  cplx lambda;
  if (star_eigenvalue(G, phi, lambda)) {
    const cplx ph = std::exp(cplx(0.0, -0.5 * s) * lambda);
    Symbol out = ph * phi;
    out.canonicalize();
    return out;
  }

  if (opt.steps <= 0)
    throw std::invalid_argument(
        "schrodinger_flow: no closed form for this generator/state; set steps > 0");

  const PolyDiffOp L = left_star_action(G);
  const double h = s / double(opt.steps);
  Symbol cur = phi;
  for (int step = 0; step < opt.steps; ++step) {
    Symbol acc = cur;
    Symbol term = cur;
    const double ref = std::max(cur.max_abs_coeff(), 1.0);
    bool converged = false;
    for (int k = 1; k <= opt.max_terms; ++k) {
      term = L.apply(term);
      term = (cplx(0.0, -0.5 * h) / double(k)) * term;
      term.canonicalize();
      acc += term;
      if (term.max_abs_coeff() <= opt.series_tol * ref) {
        converged = true;
        break;
      }
    }
    if (!converged)
      throw std::runtime_error("schrodinger_flow: series did not converge; reduce step size");
    acc.canonicalize();
    cur = acc.pruned(1e-16);
  }
  return cur;
}

// ---------------------------------------------------------------------------
// Heisenberg flow: d alpha / ds = moyal_bracket(G, alpha).

struct HeisenbergOptions {
  int steps = 0;
  int max_terms = 60;
  double series_tol = 1e-14;
};

namespace detail {

// Quadratic generators close the flow on affine functions of the variables:
// vdot = M v + b with (M|b) read off from moyal_bracket(G, v_slot), and the
// exact flow map is the exponential of the augmented 9x9 system.
inline std::array<std::array<cplx, kNumVars + 1>, kNumVars + 1> augmented_flow_matrix(
    const Symbol& G) {
  std::array<std::array<cplx, kNumVars + 1>, kNumVars + 1> M{};
  for (int i = 0; i < kNumVars; ++i) {
    Symbol vdot = moyal_bracket(G, Symbol::variable(i));
    if (!vdot.is_polynomial() || vdot.degree() > 1)
      throw std::logic_error("augmented_flow_matrix: flow not affine");
    for (const auto& [m, c] : vdot.poly_map()) {
      const int d = mono_degree(m);
      if (d == 0) {
        M[i][kNumVars] += c;
      } else {
        for (int j = 0; j < kNumVars; ++j) {
          if (m[j] == 1) M[i][j] += c;
        }
      }
    }
  }
  return M;
}

inline std::array<std::array<cplx, kNumVars + 1>, kNumVars + 1> expm_small(
    std::array<std::array<cplx, kNumVars + 1>, kNumVars + 1> A) {
  constexpr int n = kNumVars + 1;
  double norm = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) norm = std::max(norm, std::abs(A[i][j]));
  int squarings = 0;
  while (norm > 0.05 && squarings < 60) {
    norm *= 0.5;
    ++squarings;
  }
  const double scale = std::ldexp(1.0, -squarings);
  for (auto& row : A)
    for (auto& v : row) v *= scale;

  std::array<std::array<cplx, n>, n> R{}, T{};
  for (int i = 0; i < n; ++i) R[i][i] = 1.0, T[i][i] = 1.0;
  for (int k = 1; k <= 24; ++k) {
    std::array<std::array<cplx, n>, n> U{};
    for (int i = 0; i < n; ++i)
      for (int l = 0; l < n; ++l) {
        if (T[i][l] == cplx(0.0, 0.0)) continue;
        for (int j = 0; j < n; ++j) U[i][j] += T[i][l] * A[l][j];
      }
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        T[i][j] = U[i][j] / double(k);
        R[i][j] += T[i][j];
      }
  }
  for (int sq = 0; sq < squarings; ++sq) {
    std::array<std::array<cplx, n>, n> U{};
    for (int i = 0; i < n; ++i)
      for (int l = 0; l < n; ++l) {
        if (R[i][l] == cplx(0.0, 0.0)) continue;
        for (int j = 0; j < n; ++j) U[i][j] += R[i][l] * R[l][j];
      }
    R = U;
  }
  return R;
}

}  // namespace detail

inline Symbol heisenberg_flow(const Symbol& alpha, const Symbol& G, double s,
                              HeisenbergOptions opt = {}) {
  if (!G.is_polynomial())
    throw std::invalid_argument("heisenberg_flow: generator must be polynomial");
  if (s == 0.0) return alpha;

  if (G.degree() <= 2) {
    auto M = detail::augmented_flow_matrix(G);
    for (auto& row : M)
      for (auto& v : row) v *= s;
    const auto F = detail::expm_small(M);
    std::array<std::array<cplx, kNumVars>, kNumVars> A{};
    std::array<cplx, kNumVars> c{};
    for (int i = 0; i < kNumVars; ++i) {
      for (int j = 0; j < kNumVars; ++j) A[i][j] = F[i][j];
      c[i] = F[i][kNumVars];
    }
    Symbol out = alpha.substitute_affine(A, c);
    out.canonicalize();
    return out;
  }

  if (opt.steps <= 0)
    throw std::invalid_argument(
        "heisenberg_flow: generator degree exceeds 2; set steps > 0 for series stepping");

  const double h = s / double(opt.steps);
  Symbol cur = alpha;
  for (int step = 0; step < opt.steps; ++step) {
    Symbol acc = cur;
    Symbol term = cur;
    const double ref = std::max(cur.max_abs_coeff(), 1.0);
    bool converged = false;
    for (int k = 1; k <= opt.max_terms; ++k) {
      term = moyal_bracket(G, term);
      term = (cplx(h, 0.0) / double(k)) * term;
      term.canonicalize();
      acc += term;
      if (term.max_abs_coeff() <= opt.series_tol * ref) {
        converged = true;
        break;
      }
    }
    if (!converged)
      throw std::runtime_error("heisenberg_flow: series did not converge; reduce step size");
    acc.canonicalize();
    cur = acc.pruned(1e-16);
  }
  return cur;
}

// ---------------------------------------------------------------------------
// Proper-time action on plane waves.

struct KleinGordonResult {
  Symbol plane_wave;
  cplx eigenvalue{0.0, 0.0};
  double residual = 0.0;
};

// phi_k(x) = exp(i (2 k_mu - p_mu) x^mu) is an eigenfunction of the left
// star action of p.p/(2m); the eigenvalue comes out of the application
// itself, not from a formula.
inline KleinGordonResult klein_gordon_check(const FourVector& k, double m) {
  if (m == 0.0) throw std::invalid_argument("klein_gordon_check: mass must be nonzero");

  QuadForm q;
  for (int mu = 0; mu < 4; ++mu) {
    q.lin[var_x(mu)] = cplx(0.0, 2.0 * k.lower(mu));
    q.add_cross(var_p(mu), var_x(mu), cplx(0.0, -kMetricDiag[mu]));
  }
  KleinGordonResult res;
  res.plane_wave = Symbol::exponential(q);

  PolyMap gm;
  for (int mu = 0; mu < 4; ++mu) {
    Mono mm{};
    mm[var_p(mu)] = 2;
    gm[mm] = cplx(kMetricDiag[mu] / (2.0 * m), 0.0);
  }
  const Symbol G = Symbol::from_poly(gm);

  Symbol r = star_apply(G, res.plane_wave, StarSide::Left);
  cplx lambda;
  if (!star_eigenvalue(G, res.plane_wave, lambda)) {
    // Still report the mismatch: take lambda from the constant term.
    lambda = 0.0;
  }
  res.eigenvalue = lambda;
  Symbol resid = r - lambda * res.plane_wave;
  resid.canonicalize();
  res.residual = resid.max_abs_coeff();
  return res;
}

// ---------------------------------------------------------------------------
// Regular representation of the oscillator algebra at central parameter
// varsigma (the value of the central element in this representation).

enum class RegularGenerator { Y, E, Central };

inline PolyDiffOp regular_rep_action(double varsigma, RegularGenerator which, int mu = 0) {
  if (varsigma == 0.0)
    throw std::invalid_argument("regular_rep_action: varsigma must be nonzero");
  if (mu < 0 || mu > 3) throw std::invalid_argument("regular_rep_action: index out of range");
  switch (which) {
    case RegularGenerator::Y:
      return PolyDiffOp::mult(cplx(varsigma, 0.0) * Symbol::x_lowered(mu)) +
             PolyDiffOp::deriv(var_p(mu), cplx(0.0, 1.0));
    case RegularGenerator::E:
      return PolyDiffOp::mult(cplx(varsigma, 0.0) * Symbol::p_lowered(mu)) +
             PolyDiffOp::deriv(var_x(mu), cplx(0.0, -1.0));
    case RegularGenerator::Central:
      return PolyDiffOp::identity(cplx(varsigma, 0.0));
  }
  throw std::logic_error("regular_rep_action: unreachable");
}

}  // namespace kreinosc

