#pragma once

// Finite-parameter realizations of the two contraction limits: the c ->
// infinity Galilean relabeling (p^i, e, x^i, t) with e = c p^0, t = x^0/c,
// and the k_x, k_p -> infinity classical rescaling x^c = x/k_x, p^c = p/k_p
// under which the star product carries 1/(k_x k_p) per derivative pairing.
// Limits are exhibited as fitted convergence rates at finite parameters;
// whatever holds exactly at finite parameters is checked as an identity.

#include <array>
#include <cmath>
#include <complex>
#include <limits>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "kreinosc/checks.hpp"
#include "kreinosc/minkowski.hpp"
#include "kreinosc/operators.hpp"
#include "kreinosc/star_calculus.hpp"
#include "kreinosc/symbol.hpp"

namespace kreinosc {

struct ContractionParams {
  double c = 1.0;    // speed-of-light scaling
  double chi = 1.0;  // finite companion of varsigma = c^2 chi
  double k_x = 1.0;  // classical contraction scales
  double k_p = 1.0;

  ContractionParams() = default;
  ContractionParams(double c_, double chi_, double kx_, double kp_)
      : c(c_), chi(chi_), k_x(kx_), k_p(kp_) {
    if (!(c > 0.0) || !(chi > 0.0) || !(k_x > 0.0) || !(k_p > 0.0))
      throw std::invalid_argument("ContractionParams: scales must be strictly positive");
  }

  double varsigma() const { return c * c * chi; }
  double lambda() const { return 1.0 / (k_x * k_p); }  // deformation per pairing
};

// State labels in the c -> infinity variables: spatial pairs unchanged,
// t = x^0/c and e = c p^0 of the normalized four-vector labels.
struct GalileanLabels {
  std::array<double, 3> p{};
  std::array<double, 3> x{};
  double t = 0.0;
  double e = 0.0;

  static GalileanLabels from_four_vectors(const FourVector& p4, const FourVector& x4,
                                          double c) {
    if (!(c > 0.0)) throw std::invalid_argument("GalileanLabels: c must be positive");
    GalileanLabels g;
    for (int i = 0; i < 3; ++i) {
      g.p[std::size_t(i)] = p4[i + 1];
      g.x[std::size_t(i)] = x4[i + 1];
    }
    g.t = x4[0] / c;
    g.e = c * p4[0];
    return g;
  }

  std::pair<FourVector, FourVector> to_four_vectors(double c) const {
    if (!(c > 0.0)) throw std::invalid_argument("GalileanLabels: c must be positive");
    FourVector p4{e / c, p[0], p[1], p[2]};
    FourVector x4{c * t, x[0], x[1], x[2]};
    return {p4, x4};
  }
};

// Coherent overlap <B|A> in Galilean labels: the phase is
// e_B t_A - t_B e_A + x_B.p_A - p_B.x_A (spatial dots) and the magnitude
// exponent -[(dx)^2 - c^2 (dt)^2 + (dp)^2 - (de)^2/c^2] / 2.
inline cplx galilean_overlap(const GalileanLabels& A, const GalileanLabels& B, double c) {
  if (!(c > 0.0)) throw std::invalid_argument("galilean_overlap: c must be positive");
  double dx2 = 0.0, dp2 = 0.0, spatial_phase = 0.0;
  for (std::size_t i = 0; i < 3; ++i) {
    const double dx = B.x[i] - A.x[i], dp = B.p[i] - A.p[i];
    dx2 += dx * dx;
    dp2 += dp * dp;
    spatial_phase += B.x[i] * A.p[i] - B.p[i] * A.x[i];
  }
  const double dt = B.t - A.t, de = B.e - A.e;
  const double damp =
      -0.5 * (dx2 + dp2) + 0.5 * c * c * dt * dt + 0.5 * de * de / (c * c);
  const double phase = B.e * A.t - B.t * A.e + spatial_phase;
  return std::exp(damp) * cplx(std::cos(phase), std::sin(phase));
}

namespace detail {

// Least-squares slope of ys against xs.
inline double linear_fit_slope(const std::vector<double>& xs, const std::vector<double>& ys) {
  if (xs.size() != ys.size() || xs.size() < 2)
    throw std::invalid_argument("linear_fit_slope: need two or more paired samples");
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= double(xs.size());
  my /= double(xs.size());
  double cov = 0.0, var = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    cov += (xs[i] - mx) * (ys[i] - my);
    var += (xs[i] - mx) * (xs[i] - mx);
  }
  if (var == 0.0) throw std::invalid_argument("linear_fit_slope: degenerate abscissae");
  return cov / var;
}

}  // namespace detail

struct GalileanOverlapRow {
  double c = 0.0;
  cplx overlap{0.0, 0.0};
  double log_magnitude = 0.0;
  double e_factor = 1.0;  // exp((de)^2 / 2c^2), -> 1
  double t_factor = 1.0;  // exp(c^2 (dt)^2 / 2), divergent unless dt = 0
};

struct GalileanOverlapScan {
  std::vector<GalileanOverlapRow> rows;
  // Fitted exponent of (e_factor - 1) against c on a log-log scale; NaN when
  // the labels share e. Converges to -2.
  double e_factor_exponent = std::numeric_limits<double>::quiet_NaN();
  // Fitted slope of log-magnitude against c^2; converges to (dt)^2 / 2.
  double logmag_slope_vs_c2 = std::numeric_limits<double>::quiet_NaN();
};

inline GalileanOverlapScan galilean_overlap_scan(const GalileanLabels& A,
                                                 const GalileanLabels& B,
                                                 const std::vector<double>& c_values) {
  if (c_values.empty())
    throw std::invalid_argument("galilean_overlap_scan: need at least one c value");
  GalileanOverlapScan scan;
  double dx2 = 0.0, dp2 = 0.0;
  for (std::size_t i = 0; i < 3; ++i) {
    dx2 += (B.x[i] - A.x[i]) * (B.x[i] - A.x[i]);
    dp2 += (B.p[i] - A.p[i]) * (B.p[i] - A.p[i]);
  }
  const double dt = B.t - A.t, de = B.e - A.e;

  std::vector<double> log_c, log_egap, c_sq, logmag;
  for (double c : c_values) {
    if (!(c > 0.0))
      throw std::invalid_argument("galilean_overlap_scan: c values must be positive");
    GalileanOverlapRow row;
    row.c = c;
    row.overlap = galilean_overlap(A, B, c);
    row.e_factor = std::exp(0.5 * de * de / (c * c));
    row.t_factor = std::exp(0.5 * c * c * dt * dt);
    row.log_magnitude =
        -0.5 * (dx2 + dp2) + 0.5 * c * c * dt * dt + 0.5 * de * de / (c * c);
    c_sq.push_back(c * c);
    logmag.push_back(row.log_magnitude);
    if (row.e_factor > 1.0) {
      log_c.push_back(std::log(c));
      log_egap.push_back(std::log(row.e_factor - 1.0));
    }
    scan.rows.push_back(row);
  }
  if (log_c.size() == c_values.size() && log_c.size() >= 2)
    scan.e_factor_exponent = detail::linear_fit_slope(log_c, log_egap);
  if (c_sq.size() >= 2) scan.logmag_slope_vs_c2 = detail::linear_fit_slope(c_sq, logmag);
  return scan;
}

// ---------------------------------------------------------------------------
// Generator actions in the Galilean variables. Slot var_p(0) carries e and
// slot var_x(0) carries t; the substitution x^0 = c t, p^0 = e/c maps each
// operator term by a pure power of c.

inline PolyDiffOp galilean_relabel(const PolyDiffOp& op, double c) {
  if (!(c > 0.0)) throw std::invalid_argument("galilean_relabel: c must be positive");
  PolyDiffOp out = op;
  for (auto& term : out.terms) {
    const int power = int(term.mono[var_x(0)]) - int(term.mono[var_p(0)]) -
                      int(term.dpow[var_x(0)]) + int(term.dpow[var_p(0)]);
    term.coeff *= std::pow(c, double(power));
  }
  out.canonicalize();
  return out;
}

namespace detail {

inline void require_spatial(int i, const char* who) {
  if (i < 1 || i > 3)
    throw std::invalid_argument(std::string(who) + ": boost index must be spatial (1..3)");
}

}  // namespace detail

inline Symbol boost_generator_symbol(int i) {
  detail::require_spatial(i, "boost_generator_symbol");
  Symbol s = Symbol::x_lowered(i) * Symbol::p_lowered(0) -
             Symbol::x_lowered(0) * Symbol::p_lowered(i);
  s.canonicalize();
  return s;
}

// (1/c) of the boost left action, relabeled to (e, t) variables.
inline PolyDiffOp galilean_boost_action(int i, double c) {
  detail::require_spatial(i, "galilean_boost_action");
  return galilean_relabel(cplx(1.0 / c, 0.0) * left_star_action(boost_generator_symbol(i)),
                          c);
}

// The c -> infinity limit of the boost action: t times p_i star.
inline PolyDiffOp galilean_boost_limit(int i) {
  detail::require_spatial(i, "galilean_boost_limit");
  return PolyDiffOp::mult(Symbol::variable(var_x(0))) * phat_left(i);
}

inline PolyDiffOp galilean_boost_tilde(int i, double c) {
  detail::require_spatial(i, "galilean_boost_tilde");
  return galilean_relabel(cplx(1.0 / c, 0.0) * tilde_action(boost_generator_symbol(i)), c);
}

// Limit of the boost vector field: -2i (t d_{x^i} + p_i d_e). The d_e part
// is kept; it matters on e-dependent (mixed-state) symbols.
inline PolyDiffOp galilean_boost_tilde_limit(int i) {
  detail::require_spatial(i, "galilean_boost_tilde_limit");
  return cplx(0.0, -2.0) *
         (PolyDiffOp::mult(Symbol::variable(var_x(0))) * PolyDiffOp::deriv(var_x(i)) +
          PolyDiffOp::mult(Symbol::variable(var_p(i))) * PolyDiffOp::deriv(var_p(0)));
}

// Time-translation action surviving the contraction: t - i d_e.
inline PolyDiffOp galilean_time_action() {
  return PolyDiffOp::mult(Symbol::variable(var_x(0))) +
         PolyDiffOp::deriv(var_p(0), cplx(0.0, -1.0));
}

// Probe with t, spatial-x, and spatial-p dependence and no e dependence;
// the contracted wavefunctions carry no e dependence.
inline Symbol default_galilean_probe() {
  Symbol s = Symbol::variable(var_x(1)) * Symbol::variable(var_x(1)) *
                 Symbol::variable(var_p(2)) +
             Symbol::variable(var_x(0)) * Symbol::variable(var_x(3)) +
             Symbol::variable(var_p(1)) * Symbol::variable(var_p(1)) *
                 Symbol::variable(var_p(1));
  s.canonicalize();
  return s;
}

struct GalileanGeneratorReport {
  double c = 0.0;
  // Max coefficient norm of (boost action at c minus limit action) applied
  // to the probe, and the same at 2c; the ratio converges to 4.
  double boost_residual = 0.0;
  double boost_residual_doubled = 0.0;
  double boost_ratio = 0.0;
  double tilde_residual = 0.0;
  double tilde_residual_doubled = 0.0;
  double tilde_ratio = 0.0;
  std::vector<IdentityCheck> checks;  // identities exact at finite c
};

inline GalileanGeneratorReport galilean_generator_limit(double c, const Symbol& probe) {
  if (!(c > 0.0))
    throw std::invalid_argument("galilean_generator_limit: c must be positive");
  GalileanGeneratorReport report;
  report.c = c;

  auto residual_at = [&probe](double cc, bool tilde) {
    double worst = 0.0;
    for (int i = 1; i <= 3; ++i) {
      const PolyDiffOp finite =
          tilde ? galilean_boost_tilde(i, cc) : galilean_boost_action(i, cc);
      const PolyDiffOp limit =
          tilde ? galilean_boost_tilde_limit(i) : galilean_boost_limit(i);
      Symbol gap = finite.apply(probe) - limit.apply(probe);
      gap.canonicalize();
      worst = std::max(worst, gap.max_abs_coeff());
    }
    return worst;
  };
  report.boost_residual = residual_at(c, false);
  report.boost_residual_doubled = residual_at(2.0 * c, false);
  report.boost_ratio = report.boost_residual / report.boost_residual_doubled;
  report.tilde_residual = residual_at(c, true);
  report.tilde_residual_doubled = residual_at(2.0 * c, true);
  report.tilde_ratio = report.tilde_residual / report.tilde_residual_doubled;

  // [tildeG_beta_i, G_p_j star] = -2i delta_ij (t - i d_e), exact as
  // operators (the p-translation left action is x_j star).
  double worst = 0.0;
  for (int i = 1; i <= 3; ++i)
    for (int j = 1; j <= 3; ++j) {
      PolyDiffOp lhs = commutator(galilean_boost_tilde_limit(i), xhat_left(j));
      PolyDiffOp rhs = (i == j) ? cplx(0.0, -2.0) * galilean_time_action()
                                : PolyDiffOp::zero();
      worst = std::max(worst, op_distance(lhs, rhs));
    }
  report.checks.push_back(
      {"[tildeG_beta_i, x_j star] = -2i delta_ij (t - i d_e)", 0, worst});

  // With the boost limit acting on the e-independent sector, the partner
  // commutator closes on plain multiplication by t.
  worst = 0.0;
  for (int i = 1; i <= 3; ++i)
    for (int j = 1; j <= 3; ++j) {
      PolyDiffOp lhs = commutator(galilean_boost_limit(i), tilde_action(Symbol::x_lowered(j)));
      PolyDiffOp rhs = (i == j)
                           ? cplx(0.0, -2.0) * PolyDiffOp::mult(Symbol::variable(var_x(0)))
                           : PolyDiffOp::zero();
      worst = std::max(worst, op_distance(lhs, rhs));
    }
  report.checks.push_back(
      {"[G_beta_i limit, tildeG_p_j] = -2i delta_ij t (no-e sector)", 0, worst});

  // Free-particle time flow: with G_t = p_i p^i / 2m the quantum Poisson
  // bracket gives dx_j/dt = p_j/m and dp_j/dt = 0 exactly.
  const double mass = 2.0;
  Symbol g_t = Symbol::zero();
  for (int i = 1; i <= 3; ++i) g_t += Symbol::variable(var_p(i)) * Symbol::variable(var_p(i));
  g_t = cplx(1.0 / (2.0 * mass), 0.0) * g_t;
  g_t.canonicalize();
  const PolyDiffOp g_t_star = left_star_action(g_t);
  worst = 0.0;
  for (int j = 1; j <= 3; ++j) {
    PolyDiffOp x_rate = cplx(0.0, -0.5) * commutator(xhat_left(j), g_t_star);
    PolyDiffOp p_rate = cplx(0.0, -0.5) * commutator(phat_left(j), g_t_star);
    worst = std::max(worst, op_distance(x_rate, left_star_action(cplx(1.0 / mass, 0.0) *
                                                                 Symbol::p_lowered(j))));
    worst = std::max(worst, op_distance(p_rate, PolyDiffOp::zero()));
  }
  report.checks.push_back(
      {"(1/2i)[x_j star, G_t star] = p_j/m star and p_j star is static", 0, worst});

  // The spatial pairs are untouched by the relabeling and close the
  // three-dimensional Heisenberg algebra on the nose.
  worst = 0.0;
  for (int i = 1; i <= 3; ++i) {
    worst = std::max(worst, op_distance(galilean_relabel(xhat_left(i), c), xhat_left(i)));
    worst = std::max(worst, op_distance(galilean_relabel(phat_left(i), c), phat_left(i)));
    for (int j = 1; j <= 3; ++j) {
      PolyDiffOp xp = commutator(xhat_left(i), phat_left(j));
      PolyDiffOp target =
          (i == j) ? PolyDiffOp::identity(cplx(0.0, 2.0)) : PolyDiffOp::zero();
      worst = std::max(worst, op_distance(xp, target));
      worst = std::max(worst, op_distance(commutator(xhat_left(i), xhat_left(j)),
                                          PolyDiffOp::zero()));
      worst = std::max(worst, op_distance(commutator(phat_left(i), phat_left(j)),
                                          PolyDiffOp::zero()));
    }
  }
  report.checks.push_back(
      {"spatial actions unchanged; [x_i star, p_j star] = 2i delta_ij", 0, worst});

  return report;
}

inline GalileanGeneratorReport galilean_generator_limit(double c) {
  return galilean_generator_limit(c, default_galilean_probe());
}

// ---------------------------------------------------------------------------
// Classical contraction: symbols in the rescaled variables with deformation
// lambda = 1/(k_x k_p) per derivative pairing.

struct ClassicalLimitRow {
  double k_x = 0.0;
  double k_p = 0.0;
  double star_gap = 0.0;     // ||alpha star beta - alpha beta||
  double bracket_gap = 0.0;  // ||(quantum Poisson bracket) - Poisson bracket||
};

struct ClassicalLimitScan {
  std::vector<ClassicalLimitRow> rows;
  double star_slope = 0.0;     // log-log fit against k_x k_p; -> -1
  double bracket_slope = 0.0;  // -> -2
  std::vector<IdentityCheck> checks;
};

// Cubic pair whose star product carries corrections at every order lambda^1..3
// while the bracket correction is the pure lambda^2 tail, so the two fitted
// rates separate cleanly.
inline std::pair<Symbol, Symbol> default_classical_pair() {
  Symbol alpha = Symbol::variable(var_x(1)) * Symbol::variable(var_x(1)) *
                     Symbol::variable(var_x(1)) +
                 Symbol::variable(var_x(2)) * Symbol::variable(var_p(1)) *
                     Symbol::variable(var_p(1));
  Symbol beta = Symbol::variable(var_p(1)) * Symbol::variable(var_p(1)) *
                    Symbol::variable(var_p(1)) +
                Symbol::variable(var_x(1)) * Symbol::variable(var_x(2)) *
                    Symbol::variable(var_p(2));
  alpha.canonicalize();
  beta.canonicalize();
  return {alpha, beta};
}

// Quantum Poisson bracket at deformation lambda: [alpha, beta]_star / (2 i
// lambda), normalized so it converges to the classical Poisson bracket (the
// effective Planck constant of the rescaled representation is 2 lambda).
inline Symbol quantum_poisson_bracket(const Symbol& alpha, const Symbol& beta,
                                      double lambda) {
  if (!(lambda > 0.0))
    throw std::invalid_argument("quantum_poisson_bracket: lambda must be positive");
  Symbol d = star(alpha, beta, lambda) - star(beta, alpha, lambda);
  Symbol out = cplx(0.0, -0.5 / lambda) * d;
  out.canonicalize();
  return out;
}

inline ClassicalLimitScan classical_limit_scan(
    const Symbol& alpha, const Symbol& beta,
    const std::vector<std::pair<double, double>>& k_values) {
  if (!alpha.is_polynomial() || !beta.is_polynomial())
    throw std::invalid_argument("classical_limit_scan: alpha and beta must be polynomial");
  if (k_values.size() < 2)
    throw std::invalid_argument("classical_limit_scan: need two or more k pairs");

  ClassicalLimitScan scan;
  Symbol pointwise = alpha * beta;
  pointwise.canonicalize();
  const Symbol classical = poisson_bracket(alpha, beta);

  std::vector<double> log_k, log_star, log_bracket;
  bool star_fits = true, bracket_fits = true;
  for (const auto& [kx, kp] : k_values) {
    if (!(kx > 0.0) || !(kp > 0.0))
      throw std::invalid_argument("classical_limit_scan: k values must be positive");
    const double lambda = 1.0 / (kx * kp);
    ClassicalLimitRow row;
    row.k_x = kx;
    row.k_p = kp;
    row.star_gap = symbol_distance(star(alpha, beta, lambda), pointwise);
    row.bracket_gap = symbol_distance(quantum_poisson_bracket(alpha, beta, lambda), classical);
    scan.rows.push_back(row);
    log_k.push_back(std::log(kx * kp));
    if (row.star_gap > 0.0) log_star.push_back(std::log(row.star_gap));
    else star_fits = false;
    if (row.bracket_gap > 0.0) log_bracket.push_back(std::log(row.bracket_gap));
    else bracket_fits = false;
  }
  scan.star_slope = star_fits ? detail::linear_fit_slope(log_k, log_star)
                              : std::numeric_limits<double>::quiet_NaN();
  scan.bracket_slope = bracket_fits ? detail::linear_fit_slope(log_k, log_bracket)
                                    : std::numeric_limits<double>::quiet_NaN();

  // Exact identities at the first scan point.
  const double lambda = 1.0 / (k_values.front().first * k_values.front().second);

  double worst = 0.0;
  for (int mu = 0; mu < 4; ++mu)
    for (int nu = 0; nu < 4; ++nu) {
      PolyDiffOp lhs = commutator(left_star_action(Symbol::x_lowered(mu), lambda),
                                  left_star_action(Symbol::p_lowered(nu), lambda));
      PolyDiffOp rhs = (mu == nu)
                           ? PolyDiffOp::identity(cplx(0.0, 2.0 * lambda * metric(mu, mu)))
                           : PolyDiffOp::zero();
      worst = std::max(worst, op_distance(lhs, rhs));
    }
  scan.checks.push_back(
      {"[x_mu star, p_nu star] = 2i eta_mu_nu / (k_x k_p)", 0, worst});

  // Hamilton equations in the contracted variables, exact on symbols:
  // {x_mu, G_tau} = p_mu / m and {p_mu, G_tau} = 0 for G_tau = p.p / 2m.
  const double mass = 2.0;
  Symbol g_tau = Symbol::zero();
  for (int mu = 0; mu < 4; ++mu)
    g_tau += cplx(metric(mu, mu), 0.0) *
             (Symbol::variable(var_p(mu)) * Symbol::variable(var_p(mu)));
  g_tau = cplx(1.0 / (2.0 * mass), 0.0) * g_tau;
  g_tau.canonicalize();
  worst = 0.0;
  for (int mu = 0; mu < 4; ++mu) {
    worst = std::max(worst,
                     symbol_distance(poisson_bracket(Symbol::x_lowered(mu), g_tau),
                                     cplx(1.0 / mass, 0.0) * Symbol::p_lowered(mu)));
    worst = std::max(worst, symbol_distance(poisson_bracket(Symbol::p_lowered(mu), g_tau),
                                            Symbol::zero()));
  }
  scan.checks.push_back({"{x_mu, G_tau} = p_mu/m and {p_mu, G_tau} = 0", 0, worst});

  // The quantum Poisson bracket of the flow generators already equals the
  // classical one at finite k (generators are at most quadratic).
  worst = 0.0;
  for (int mu = 0; mu < 4; ++mu) {
    worst = std::max(worst,
                     symbol_distance(quantum_poisson_bracket(Symbol::x_lowered(mu), g_tau,
                                                             lambda),
                                     poisson_bracket(Symbol::x_lowered(mu), g_tau)));
  }
  scan.checks.push_back(
      {"quantum Poisson bracket is classical on the Hamilton flow", 0, worst});

  // Vector fields of the generator table divided by lambda are independent
  // of the contraction scales.
  const double lambda_alt = lambda / 7.0;
  worst = 0.0;
  std::vector<Symbol> generators;
  for (int mu = 0; mu < 4; ++mu) {
    generators.push_back(Symbol::x_lowered(mu));
    generators.push_back(Symbol::p_lowered(mu));
  }
  for (int mu = 0; mu < 4; ++mu)
    for (int nu = mu + 1; nu < 4; ++nu)
      generators.push_back(Symbol::x_lowered(mu) * Symbol::p_lowered(nu) -
                           Symbol::x_lowered(nu) * Symbol::p_lowered(mu));
  for (auto& g : generators) {
    g.canonicalize();
    PolyDiffOp a = cplx(1.0 / lambda, 0.0) * tilde_action(g, lambda);
    PolyDiffOp b = cplx(1.0 / lambda_alt, 0.0) * tilde_action(g, lambda_alt);
    worst = std::max(worst, op_distance(a, b));
  }
  scan.checks.push_back(
      {"tilde vector fields over lambda are independent of k_x k_p", 0, worst});

  return scan;
}

// ---------------------------------------------------------------------------
// Coherent-state separation under the classical rescaling: labels grow as
// (k_p p^c, k_x x^c), so distinct labels decouple unless the separation is
// timelike-dominated, where the Gaussian factor grows instead.

struct CoherentSeparationRow {
  double k_x = 0.0;
  double k_p = 0.0;
  double exponent = 0.0;  // Gaussian exponent s with magnitude e^{-s}
  double magnitude = 0.0;
};

struct CoherentSeparationScan {
  std::vector<CoherentSeparationRow> rows;
  bool monotone_decay = false;  // magnitudes strictly decreasing toward zero
  bool growth_flagged = false;  // diagnostic: some magnitude exceeds one
};

inline CoherentSeparationScan coherent_separation_scan(
    const FourVector& pA, const FourVector& xA, const FourVector& pB, const FourVector& xB,
    const std::vector<std::pair<double, double>>& k_values) {
  if (k_values.empty())
    throw std::invalid_argument("coherent_separation_scan: need at least one k pair");
  CoherentSeparationScan scan;
  for (const auto& [kx, kp] : k_values) {
    if (!(kx > 0.0) || !(kp > 0.0))
      throw std::invalid_argument("coherent_separation_scan: k values must be positive");
    CoherentSeparationRow row;
    row.k_x = kx;
    row.k_p = kp;
    FourVector dp, dx;
    for (int mu = 0; mu < 4; ++mu) {
      dp[mu] = kp * (pB[mu] - pA[mu]);
      dx[mu] = kx * (xB[mu] - xA[mu]);
    }
    row.exponent = 0.5 * (minkowski_square(dx) + minkowski_square(dp));
    FourVector pa, xa, pb, xb;
    for (int mu = 0; mu < 4; ++mu) {
      pa[mu] = kp * pA[mu];
      xa[mu] = kx * xA[mu];
      pb[mu] = kp * pB[mu];
      xb[mu] = kx * xB[mu];
    }
    row.magnitude = std::abs(coherent_overlap(pa, xa, pb, xb));
    scan.rows.push_back(row);
  }
  scan.monotone_decay = scan.rows.size() >= 2;
  for (std::size_t i = 0; i + 1 < scan.rows.size(); ++i)
    if (!(scan.rows[i + 1].magnitude < scan.rows[i].magnitude)) scan.monotone_decay = false;
  for (const auto& row : scan.rows)
    if (row.magnitude > 1.0) scan.growth_flagged = true;
  return scan;
}

}  // namespace kreinosc
