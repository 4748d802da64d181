#pragma once
// Phase-space symbols over the eight real variables
//   slot 0..3 : p^0..p^3   (upper-index momentum components)
//   slot 4..7 : x^0..x^3   (upper-index position components)
// A Symbol is a finite sum of blocks  poly(v) * exp(Q(v))  where Q is a
// complex-coefficient polynomial of total degree <= 2.  The class is closed
// under addition, multiplication, differentiation, and affine substitution of
// the variables, which covers Gaussian wave functions, plane waves, and every
// flow this library evaluates in closed form.
//
// Canonical form: blocks with equal exponent merge, terms are sorted by
// exponent tuple, zero coefficients are dropped.  Equality checks compare
// canonical coefficients; the default tolerance for "equal" is 1e-12.

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstdint>
#include <cstdio>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "kreinosc/minkowski.hpp"

namespace kreinosc {

using cplx = std::complex<double>;
inline constexpr int kNumVars = 8;

inline constexpr int var_p(int mu) { return mu; }
inline constexpr int var_x(int mu) { return 4 + mu; }
inline constexpr bool is_x_slot(int slot) { return slot >= 4; }
inline constexpr int slot_mu(int slot) { return slot & 3; }

using Mono = std::array<std::uint8_t, kNumVars>;

inline int mono_degree(const Mono& m) {
  int d = 0;
  for (int i = 0; i < kNumVars; ++i) d += m[i];
  return d;
}

// Exponent polynomial Q(v) = c0 + sum_i l_i v_i + sum_{ij} M_ij v_i v_j with
// M stored symmetric, so the coefficient of v_i v_j (i != j) is 2 M_ij.
struct QuadForm {
  cplx c0{0.0, 0.0};
  std::array<cplx, kNumVars> lin{};
  std::array<std::array<cplx, kNumVars>, kNumVars> quad{};

  bool is_zero() const {
    if (c0 != cplx(0.0)) return false;
    for (int i = 0; i < kNumVars; ++i) {
      if (lin[i] != cplx(0.0)) return false;
      for (int j = 0; j < kNumVars; ++j)
        if (quad[i][j] != cplx(0.0)) return false;
    }
    return true;
  }

  void add(const QuadForm& o) {
    c0 += o.c0;
    for (int i = 0; i < kNumVars; ++i) {
      lin[i] += o.lin[i];
      for (int j = 0; j < kNumVars; ++j) quad[i][j] += o.quad[i][j];
    }
  }

  // Sets the coefficient of v_i v_j (splitting symmetrically for i != j).
  void add_cross(int i, int j, cplx coeff) {
    if (i == j) {
      quad[i][i] += coeff;
    } else {
      quad[i][j] += 0.5 * coeff;
      quad[j][i] += 0.5 * coeff;
    }
  }

  // d/dv_k Q as (constant, linear) pair: l_k + 2 sum_j M_kj v_j.
  cplx deriv_const(int k) const { return lin[k]; }
  cplx deriv_lin(int k, int j) const { return 2.0 * quad[k][j]; }

  template <typename Scalar>
  cplx evaluate(const std::array<Scalar, kNumVars>& v) const {
    cplx s = c0;
    for (int i = 0; i < kNumVars; ++i) {
      s += lin[i] * v[i];
      for (int j = 0; j < kNumVars; ++j) s += quad[i][j] * v[i] * v[j];
    }
    return s;
  }

  double distance(const QuadForm& o) const {
    double worst = std::abs(c0 - o.c0);
    for (int i = 0; i < kNumVars; ++i) {
      worst = std::max(worst, std::abs(lin[i] - o.lin[i]));
      for (int j = 0; j < kNumVars; ++j)
        worst = std::max(worst, std::abs(quad[i][j] - o.quad[i][j]));
    }
    return worst;
  }

  // Deterministic ordering for canonical block sort.
  int compare(const QuadForm& o) const {
    auto cmp = [](cplx a, cplx b) -> int {
      if (a.real() != b.real()) return a.real() < b.real() ? -1 : 1;
      if (a.imag() != b.imag()) return a.imag() < b.imag() ? -1 : 1;
      return 0;
    };
    if (int c = cmp(c0, o.c0)) return c;
    for (int i = 0; i < kNumVars; ++i)
      if (int c = cmp(lin[i], o.lin[i])) return c;
    for (int i = 0; i < kNumVars; ++i)
      for (int j = 0; j < kNumVars; ++j)
        if (int c = cmp(quad[i][j], o.quad[i][j])) return c;
    return 0;
  }
};

struct Term {
  cplx coeff{0.0, 0.0};
  Mono mono{};
};

struct ExpBlock {
  QuadForm q;
  std::vector<Term> terms;
};

using PolyMap = std::map<Mono, cplx>;

class Symbol {
 public:
  std::vector<ExpBlock> blocks;

  Symbol() = default;

  static Symbol zero() { return Symbol{}; }

  static Symbol constant(cplx c) {
    Symbol s;
    if (c != cplx(0.0)) {
      ExpBlock b;
      b.terms.push_back({c, Mono{}});
      s.blocks.push_back(std::move(b));
    }
    return s;
  }

  static Symbol variable(int slot, cplx coeff = 1.0) {
    Symbol s;
    ExpBlock b;
    Mono m{};
    m[slot] = 1;
    b.terms.push_back({coeff, m});
    s.blocks.push_back(std::move(b));
    return s;
  }

  // Upper-index component symbols and their metric-lowered counterparts.
  static Symbol p_upper(int mu) { return variable(var_p(mu)); }
  static Symbol x_upper(int mu) { return variable(var_x(mu)); }
  static Symbol p_lowered(int mu) { return variable(var_p(mu), kMetricDiag[(std::size_t)mu]); }
  static Symbol x_lowered(int mu) { return variable(var_x(mu), kMetricDiag[(std::size_t)mu]); }

  static Symbol from_poly(const PolyMap& poly) {
    Symbol s;
    ExpBlock b;
    for (const auto& [m, c] : poly)
      if (c != cplx(0.0)) b.terms.push_back({c, m});
    if (!b.terms.empty()) s.blocks.push_back(std::move(b));
    return s;
  }

  // poly * exp(Q).
  static Symbol gaussian(const PolyMap& poly, const QuadForm& q) {
    Symbol s = from_poly(poly);
    if (s.blocks.empty()) return s;
    s.blocks[0].q = q;
    return s;
  }

  static Symbol exponential(const QuadForm& q) { return gaussian({{Mono{}, cplx(1.0)}}, q); }

  bool is_zero() const { return blocks.empty(); }

  // True when the symbol is a plain polynomial (trivial exponent everywhere).
  bool is_polynomial() const {
    for (const auto& b : blocks)
      if (!b.q.is_zero()) return false;
    return true;
  }

  int degree() const {
    int d = 0;
    for (const auto& b : blocks)
      for (const auto& t : b.terms) d = std::max(d, mono_degree(t.mono));
    return d;
  }

  PolyMap poly_map() const {
    PolyMap m;
    for (const auto& b : blocks)
      for (const auto& t : b.terms) m[t.mono] += t.coeff;
    return m;
  }

  Symbol& operator+=(const Symbol& o) {
    blocks.insert(blocks.end(), o.blocks.begin(), o.blocks.end());
    canonicalize();
    return *this;
  }
  friend Symbol operator+(Symbol a, const Symbol& b) { return a += b; }
  friend Symbol operator-(Symbol a, const Symbol& b) { return a += (-1.0) * b; }

  friend Symbol operator*(cplx s, Symbol a) {
    if (s == cplx(0.0)) return Symbol{};
    for (auto& b : a.blocks)
      for (auto& t : b.terms) t.coeff *= s;
    return a;
  }

  friend Symbol operator*(const Symbol& a, const Symbol& b) {
    Symbol r;
    for (const auto& ba : a.blocks)
      for (const auto& bb : b.blocks) {
        ExpBlock nb;
        nb.q = ba.q;
        nb.q.add(bb.q);
        nb.terms.reserve(ba.terms.size() * bb.terms.size());
        for (const auto& ta : ba.terms)
          for (const auto& tb : bb.terms) {
            Term t;
            t.coeff = ta.coeff * tb.coeff;
            for (int i = 0; i < kNumVars; ++i)
              t.mono[i] = static_cast<std::uint8_t>(ta.mono[i] + tb.mono[i]);
            nb.terms.push_back(t);
          }
        r.blocks.push_back(std::move(nb));
      }
    r.canonicalize();
    return r;
  }

  Symbol times_monomial(const Mono& m, cplx c = 1.0) const {
    Symbol r = *this;
    for (auto& b : r.blocks)
      for (auto& t : b.terms) {
        t.coeff *= c;
        for (int i = 0; i < kNumVars; ++i)
          t.mono[i] = static_cast<std::uint8_t>(t.mono[i] + m[i]);
      }
    return r;
  }

  // d/dv_slot: product rule across polynomial factor and exponent.
  Symbol derivative(int slot) const {
    Symbol r;
    for (const auto& b : blocks) {
      ExpBlock nb;
      nb.q = b.q;
      for (const auto& t : b.terms) {
        if (t.mono[slot] > 0) {
          Term dt = t;
          dt.coeff *= static_cast<double>(t.mono[slot]);
          dt.mono[slot] = static_cast<std::uint8_t>(t.mono[slot] - 1);
          nb.terms.push_back(dt);
        }
        const cplx dc = b.q.deriv_const(slot);
        if (dc != cplx(0.0)) nb.terms.push_back({t.coeff * dc, t.mono});
        for (int j = 0; j < kNumVars; ++j) {
          const cplx dl = b.q.deriv_lin(slot, j);
          if (dl != cplx(0.0)) {
            Term nt = t;
            nt.coeff *= dl;
            nt.mono[j] = static_cast<std::uint8_t>(nt.mono[j] + 1);
            nb.terms.push_back(nt);
          }
        }
      }
      if (!nb.terms.empty()) r.blocks.push_back(std::move(nb));
    }
    r.canonicalize();
    return r;
  }

  Symbol derivative(const Mono& d) const {
    Symbol r = *this;
    for (int slot = 0; slot < kNumVars; ++slot)
      for (int k = 0; k < d[slot]; ++k) r = r.derivative(slot);
    return r;
  }

  // Complex conjugate as a function of real variables.
  Symbol conjugated() const {
    Symbol r = *this;
    for (auto& b : r.blocks) {
      b.q.c0 = std::conj(b.q.c0);
      for (int i = 0; i < kNumVars; ++i) {
        b.q.lin[i] = std::conj(b.q.lin[i]);
        for (int j = 0; j < kNumVars; ++j) b.q.quad[i][j] = std::conj(b.q.quad[i][j]);
      }
      for (auto& t : b.terms) t.coeff = std::conj(t.coeff);
    }
    r.canonicalize();
    return r;
  }

  // g(v) = f(A v + c) for diagonal A given as per-slot scales (the general
  // affine case with shifts is substitute_affine below).
  Symbol scale_vars(const std::array<double, kNumVars>& scale) const {
    std::array<std::array<cplx, kNumVars>, kNumVars> A{};
    for (int i = 0; i < kNumVars; ++i) A[i][i] = scale[i];
    return substitute_affine(A, {});
  }

  Symbol shift_vars(const std::array<cplx, kNumVars>& shift) const {
    std::array<std::array<cplx, kNumVars>, kNumVars> A{};
    for (int i = 0; i < kNumVars; ++i) A[i][i] = 1.0;
    return substitute_affine(A, shift);
  }

  Symbol substitute_affine(const std::array<std::array<cplx, kNumVars>, kNumVars>& A,
                           const std::array<cplx, kNumVars>& c) const {
    Symbol r;
    for (const auto& b : blocks) {
      ExpBlock nb;
      // Exponent: Q(Av + c).
      QuadForm& q = nb.q;
      q.c0 = b.q.c0;
      for (int i = 0; i < kNumVars; ++i) {
        q.c0 += b.q.lin[i] * c[i];
        for (int j = 0; j < kNumVars; ++j) q.c0 += b.q.quad[i][j] * c[i] * c[j];
      }
      for (int k = 0; k < kNumVars; ++k) {
        cplx lk = 0.0;
        for (int i = 0; i < kNumVars; ++i) {
          lk += b.q.lin[i] * A[i][k];
          for (int j = 0; j < kNumVars; ++j)
            lk += 2.0 * b.q.quad[i][j] * c[j] * A[i][k];
        }
        q.lin[k] = lk;
      }
      for (int k = 0; k < kNumVars; ++k)
        for (int l = 0; l < kNumVars; ++l) {
          cplx m = 0.0;
          for (int i = 0; i < kNumVars; ++i)
            for (int j = 0; j < kNumVars; ++j) m += A[i][k] * b.q.quad[i][j] * A[j][l];
          q.quad[k][l] = m;
        }
      // Polynomial factor: expand each monomial of the substituted variables.
      PolyMap acc;
      for (const auto& t : b.terms) {
        PolyMap cur;
        cur[Mono{}] = t.coeff;
        for (int slot = 0; slot < kNumVars; ++slot) {
          for (int rep = 0; rep < t.mono[slot]; ++rep) {
            PolyMap next;
            for (const auto& [m, cf] : cur) {
              if (c[slot] != cplx(0.0)) next[m] += cf * c[slot];
              for (int j = 0; j < kNumVars; ++j) {
                if (A[slot][j] == cplx(0.0)) continue;
                Mono nm = m;
                nm[j] = static_cast<std::uint8_t>(nm[j] + 1);
                next[nm] += cf * A[slot][j];
              }
            }
            cur = std::move(next);
          }
        }
        for (const auto& [m, cf] : cur) acc[m] += cf;
      }
      for (const auto& [m, cf] : acc)
        if (cf != cplx(0.0)) nb.terms.push_back({cf, m});
      if (!nb.terms.empty()) r.blocks.push_back(std::move(nb));
    }
    r.canonicalize();
    return r;
  }

  template <typename Scalar>
  cplx evaluate(const std::array<Scalar, kNumVars>& v) const {
    cplx total = 0.0;
    for (const auto& b : blocks) {
      cplx poly = 0.0;
      for (const auto& t : b.terms) {
        cplx m = t.coeff;
        for (int i = 0; i < kNumVars; ++i)
          for (int k = 0; k < t.mono[i]; ++k) m *= v[i];
        poly += m;
      }
      total += poly * std::exp(b.q.evaluate(v));
    }
    return total;
  }

  double max_abs_coeff() const {
    double worst = 0.0;
    for (const auto& b : blocks)
      for (const auto& t : b.terms) worst = std::max(worst, std::abs(t.coeff));
    return worst;
  }

  // Merges near-identical exponent blocks, sorts, and drops exact zeros.
  // Constant exponent parts fold into the coefficients so a phase or
  // normalization never splits an otherwise identical block.
  void canonicalize(double block_tol = 1e-12) {
    for (auto& b : blocks) {
      if (b.q.c0 != cplx(0.0)) {
        const cplx f = std::exp(b.q.c0);
        for (auto& t : b.terms) t.coeff *= f;
        b.q.c0 = cplx(0.0);
      }
    }
    std::vector<ExpBlock> merged;
    for (auto& b : blocks) {
      bool placed = false;
      for (auto& mb : merged)
        if (mb.q.distance(b.q) <= block_tol) {
          mb.terms.insert(mb.terms.end(), b.terms.begin(), b.terms.end());
          placed = true;
          break;
        }
      if (!placed) merged.push_back(std::move(b));
    }
    blocks.clear();
    for (auto& b : merged) {
      std::sort(b.terms.begin(), b.terms.end(),
                [](const Term& a, const Term& t) { return a.mono < t.mono; });
      std::vector<Term> out;
      for (const auto& t : b.terms) {
        if (!out.empty() && out.back().mono == t.mono)
          out.back().coeff += t.coeff;
        else
          out.push_back(t);
      }
      std::erase_if(out, [](const Term& t) { return t.coeff == cplx(0.0); });
      if (!out.empty()) {
        b.terms = std::move(out);
        blocks.push_back(std::move(b));
      }
    }
    std::sort(blocks.begin(), blocks.end(),
              [](const ExpBlock& a, const ExpBlock& b) { return a.q.compare(b.q) < 0; });
  }

  // Drops terms with |coeff| <= tol (used to clean numerically-built symbols).
  Symbol pruned(double tol) const {
    Symbol r = *this;
    for (auto& b : r.blocks)
      std::erase_if(b.terms, [tol](const Term& t) { return std::abs(t.coeff) <= tol; });
    std::erase_if(r.blocks, [](const ExpBlock& b) { return b.terms.empty(); });
    r.canonicalize();
    return r;
  }

  std::string to_string() const;
};

// Largest canonical coefficient of (a - b): zero iff the symbols agree.
inline double symbol_distance(const Symbol& a, const Symbol& b) {
  Symbol d = a - b;
  d.canonicalize();
  return d.max_abs_coeff();
}

inline bool symbol_equal(const Symbol& a, const Symbol& b, double tol = 1e-12) {
  return symbol_distance(a, b) <= tol;
}

namespace detail {

inline std::string format_real(double v) {
  if (v == 0.0) v = 0.0;  // normalize -0
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

inline std::string format_coeff(cplx c) {
  if (c.imag() == 0.0) return format_real(c.real());
  if (c.real() == 0.0) {
    if (c.imag() == 1.0) return "i";
    if (c.imag() == -1.0) return "-i";
    return format_real(c.imag()) + "i";
  }
  std::string s = "(" + format_real(c.real());
  s += c.imag() >= 0.0 ? "+" : "-";
  double ai = std::abs(c.imag());
  if (ai != 1.0) s += format_real(ai);
  s += "i)";
  return s;
}

inline std::string var_name(int slot) {
  static const char* names[kNumVars] = {"p0", "p1", "p2", "p3", "x0", "x1", "x2", "x3"};
  return names[slot];
}

inline std::string format_mono(const Mono& m) {
  std::string s;
  for (int i = 0; i < kNumVars; ++i) {
    if (m[i] == 0) continue;
    if (!s.empty()) s += "*";
    s += var_name(i);
    if (m[i] > 1) s += "^" + std::to_string(static_cast<int>(m[i]));
  }
  return s;
}

inline std::string format_quadform(const QuadForm& q) {
  std::string s;
  auto append = [&s](cplx c, const std::string& mono) {
    if (c == cplx(0.0)) return;
    std::string piece;
    if (mono.empty()) {
      piece = format_coeff(c);
    } else if (c == cplx(1.0)) {
      piece = mono;
    } else if (c == cplx(-1.0)) {
      piece = "-" + mono;
    } else {
      piece = format_coeff(c) + "*" + mono;
    }
    if (!s.empty() && piece[0] != '-') s += " + ";
    else if (!s.empty()) {
      s += " - ";
      piece = piece.substr(1);
    }
    s += piece;
  };
  append(q.c0, "");
  for (int i = 0; i < kNumVars; ++i) append(q.lin[i], var_name(i));
  for (int i = 0; i < kNumVars; ++i) {
    append(q.quad[i][i], var_name(i) + "^2");
    for (int j = i + 1; j < kNumVars; ++j)
      append(2.0 * q.quad[i][j], var_name(i) + "*" + var_name(j));
  }
  return s.empty() ? "0" : s;
}

}  // namespace detail

inline std::string Symbol::to_string() const {
  if (blocks.empty()) return "0";
  std::string s;
  for (const auto& b : blocks) {
    std::string body;
    for (const auto& t : b.terms) {
      std::string piece;
      std::string mono = detail::format_mono(t.mono);
      if (mono.empty()) {
        piece = detail::format_coeff(t.coeff);
      } else if (t.coeff == cplx(1.0)) {
        piece = mono;
      } else if (t.coeff == cplx(-1.0)) {
        piece = "-" + mono;
      } else {
        piece = detail::format_coeff(t.coeff) + "*" + mono;
      }
      if (!body.empty() && piece[0] != '-') body += " + ";
      else if (!body.empty()) {
        body += " - ";
        piece = piece.substr(1);
      }
      body += piece;
    }
    std::string block_str;
    if (b.q.is_zero()) {
      block_str = body;
    } else if (b.terms.size() == 1 && body == "1") {
      block_str = "exp(" + detail::format_quadform(b.q) + ")";
    } else {
      block_str = "(" + body + ")*exp(" + detail::format_quadform(b.q) + ")";
    }
    if (!s.empty()) s += " + ";
    s += block_str;
  }
  return s;
}

}  // namespace kreinosc
