#pragma once

// Numerical side of the phase-space picture: Fock wavefunctions built by
// ladder action on the invariant Gaussian, the indefinite integral inner
// product with its 0-component argument flip and measure factors, the flat
// (divergent) alternative, and the one-dimensional divergence demo.
//
// Wavefunctions spanned by the Fock basis factor per mu into functions of
// the single pair (p^mu, x^mu), so 8D integrals reduce to products of 2D
// quadratures; non-factorizable symbols fall back to a capped tensor grid.

#include <array>
#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <stdexcept>
#include <utility>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include "kreinosc/fock_basis.hpp"
#include "kreinosc/star_calculus.hpp"
#include "kreinosc/symbol.hpp"

namespace kreinosc {

// Nodes and weights for integral_{-inf}^{inf} e^{-t^2} f(t) dt, by
// diagonalizing the Jacobi matrix of the Hermite recurrence.
inline std::pair<std::vector<double>, std::vector<double>> gauss_hermite(int n) {
  if (n < 1) throw std::invalid_argument("gauss_hermite: need at least one node");
  Eigen::MatrixXd J = Eigen::MatrixXd::Zero(n, n);
  for (int k = 1; k < n; ++k) {
    const double b = std::sqrt(0.5 * k);
    J(k, k - 1) = b;
    J(k - 1, k) = b;
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(J);
  std::vector<double> t(static_cast<std::size_t>(n)), w(static_cast<std::size_t>(n));
  const double total = std::sqrt(std::numbers::pi_v<double>);
  for (int i = 0; i < n; ++i) {
    t[static_cast<std::size_t>(i)] = es.eigenvalues()(i);
    const double v0 = es.eigenvectors()(0, i);
    w[static_cast<std::size_t>(i)] = total * v0 * v0;
  }
  return {std::move(t), std::move(w)};
}

// Nodes and weights for integral_a^b f(t) dt.
inline std::pair<std::vector<double>, std::vector<double>> gauss_legendre(int n, double a,
                                                                          double b) {
  if (n < 1) throw std::invalid_argument("gauss_legendre: need at least one node");
  Eigen::MatrixXd J = Eigen::MatrixXd::Zero(n, n);
  for (int k = 1; k < n; ++k) {
    const double off = k / std::sqrt(4.0 * k * k - 1.0);
    J(k, k - 1) = off;
    J(k - 1, k) = off;
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(J);
  std::vector<double> t(static_cast<std::size_t>(n)), w(static_cast<std::size_t>(n));
  const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
  for (int i = 0; i < n; ++i) {
    t[static_cast<std::size_t>(i)] = mid + half * es.eigenvalues()(i);
    const double v0 = es.eigenvectors()(0, i);
    w[static_cast<std::size_t>(i)] = 2.0 * half * v0 * v0;
  }
  return {std::move(t), std::move(w)};
}

struct QuadratureGrid {
  int nodes = 48;
  int tensor_cap = 12;  // per-axis bound for the 8D fallback grid
  std::vector<double> t;
  std::vector<double> w_scaled;  // w * e^{t^2}, bounded modified weights

  explicit QuadratureGrid(int nodes_per_axis = 48) : nodes(nodes_per_axis) {
    auto [tt, ww] = gauss_hermite(nodes);
    t = std::move(tt);
    w_scaled.resize(t.size());
    for (std::size_t i = 0; i < t.size(); ++i)
      w_scaled[i] = ww[i] * std::exp(t[i] * t[i]);
  }
};

// Fixed-order pairwise summation (binary combine ladder).
class PairwiseAccumulator {
 public:
  void add(cplx v) {
    std::size_t k = 0;
    while (k < slots_.size() && occupied_[k]) {
      v += slots_[k];
      occupied_[k] = false;
      ++k;
    }
    if (k == slots_.size()) {
      slots_.push_back(v);
      occupied_.push_back(true);
    } else {
      slots_[k] = v;
      occupied_[k] = true;
    }
  }

  cplx total() const {
    cplx s(0.0, 0.0);
    for (std::size_t k = 0; k < slots_.size(); ++k)
      if (occupied_[k]) s += slots_[k];
    return s;
  }

 private:
  std::vector<cplx> slots_;
  std::vector<bool> occupied_;
};

// The Lorentz-invariant Gaussian exp(-(p.p + x.x)/2) with Minkowski squares.
inline Symbol vacuum_wavefunction() {
  QuadForm q;
  for (int mu = 0; mu < 4; ++mu) {
    q.quad[var_p(mu)][var_p(mu)] = cplx(-0.5 * metric(mu, mu), 0.0);
    q.quad[var_x(mu)][var_x(mu)] = cplx(-0.5 * metric(mu, mu), 0.0);
  }
  return Symbol::exponential(q);
}

// phi_n built by the creation action on the vacuum wavefunction with the
// Fock normalization 1/(2^{|n|} sqrt(prod n_mu!)).
inline Symbol fock_wavefunction(const FockIndex& n) {
  Symbol phi = vacuum_wavefunction();
  double norm = 1.0;
  for (int mu = 0; mu < 4; ++mu) {
    if (n[mu] == 0) continue;
    const PolyDiffOp raise = creation_left(mu);
    for (int k = 1; k <= n[mu]; ++k) {
      phi = raise.apply(phi);
      norm *= 2.0 * std::sqrt(double(k));
    }
  }
  phi = cplx(1.0 / norm, 0.0) * phi;
  phi.canonicalize();
  return phi;
}

// Wavefunction of the coherent state labeled (p_A, x_A).
inline Symbol coherent_wavefunction(const FourVector& pA, const FourVector& xA) {
  QuadForm q;
  for (int mu = 0; mu < 4; ++mu) {
    const double eta = metric(mu, mu);
    q.quad[var_p(mu)][var_p(mu)] = cplx(-0.5 * eta, 0.0);
    q.quad[var_x(mu)][var_x(mu)] = cplx(-0.5 * eta, 0.0);
    q.lin[var_x(mu)] = cplx(xA.lower(mu), pA.lower(mu));
    q.lin[var_p(mu)] = cplx(pA.lower(mu), -xA.lower(mu));
  }
  q.c0 = cplx(-0.5 * (minkowski_square(xA) + minkowski_square(pA)), 0.0);
  Symbol s = Symbol::exponential(q);
  s.canonicalize();
  return s;
}

namespace detail {

// True when the exponent couples variables only within a single mu pair.
inline bool block_factorizes(const QuadForm& q) {
  for (int s = 0; s < kNumVars; ++s)
    for (int t = s + 1; t < kNumVars; ++t)
      if (q.quad[s][t] != cplx(0.0) && slot_mu(s) != slot_mu(t)) return false;
  return true;
}

// Moment table M(a, b) = integral e^{q2(u,v)} u^a v^b du dv over the plane
// for the (p^mu, x^mu) pair, via compensated Gauss-Hermite nodes.
inline Eigen::MatrixXcd pair_moments(const QuadForm& q, int mu, int amax, int bmax,
                                     const QuadratureGrid& grid) {
  const int sp = var_p(mu), sx = var_x(mu);
  const cplx qa = q.quad[sp][sp], qb = q.quad[sx][sx];
  const cplx qc = q.quad[sp][sx] + q.quad[sx][sp];
  const cplx la = q.lin[sp], lb = q.lin[sx];

  const std::size_t n = grid.t.size();
  std::vector<cplx> factor(n * n);
  for (std::size_t i = 0; i < n; ++i) {
    const double u = grid.t[i];
    for (std::size_t j = 0; j < n; ++j) {
      const double v = grid.t[j];
      const cplx expo = qa * (u * u) + qb * (v * v) + qc * (u * v) + la * u + lb * v;
      factor[i * n + j] = grid.w_scaled[i] * grid.w_scaled[j] * std::exp(expo);
    }
  }

  Eigen::MatrixXd upow(n, amax + 1), vpow(n, bmax + 1);
  for (std::size_t i = 0; i < n; ++i) {
    upow(i, 0) = 1.0;
    for (int a = 1; a <= amax; ++a) upow(i, a) = upow(i, a - 1) * grid.t[i];
    vpow(i, 0) = 1.0;
    for (int b = 1; b <= bmax; ++b) vpow(i, b) = vpow(i, b - 1) * grid.t[i];
  }

  Eigen::MatrixXcd M(amax + 1, bmax + 1);
  for (int a = 0; a <= amax; ++a)
    for (int b = 0; b <= bmax; ++b) {
      PairwiseAccumulator acc;
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) acc.add(factor[i * n + j] * upow(i, a) * vpow(j, b));
      M(a, b) = acc.total();
    }
  return M;
}

inline cplx integrate_block_factorized(const ExpBlock& block, const QuadratureGrid& grid) {
  std::array<int, kNumVars> pmax{};
  for (const auto& term : block.terms)
    for (int s = 0; s < kNumVars; ++s) pmax[s] = std::max(pmax[s], int(term.mono[s]));

  std::array<Eigen::MatrixXcd, 4> moments;
  for (int mu = 0; mu < 4; ++mu)
    moments[static_cast<std::size_t>(mu)] =
        pair_moments(block.q, mu, pmax[var_p(mu)], pmax[var_x(mu)], grid);

  PairwiseAccumulator acc;
  for (const auto& term : block.terms) {
    cplx v = term.coeff;
    for (int mu = 0; mu < 4; ++mu)
      v *= moments[static_cast<std::size_t>(mu)](term.mono[var_p(mu)], term.mono[var_x(mu)]);
    acc.add(v);
  }
  return std::exp(block.q.c0) * acc.total();
}

// Full 8D tensor-grid evaluation with per-axis Gauss-Hermite compensation.
inline cplx integrate_tensor(const Symbol& integrand, const QuadratureGrid& grid) {
  const int n = std::min(grid.nodes, grid.tensor_cap);
  auto [t, w] = gauss_hermite(n);
  std::vector<double> wmod(t.size());
  for (std::size_t i = 0; i < t.size(); ++i) wmod[i] = w[i] * std::exp(t[i] * t[i]);

  PairwiseAccumulator acc;
  std::array<int, kNumVars> idx{};
  std::array<double, kNumVars> v{};
  while (true) {
    double weight = 1.0;
    for (int s = 0; s < kNumVars; ++s) {
      v[s] = t[static_cast<std::size_t>(idx[s])];
      weight *= wmod[static_cast<std::size_t>(idx[s])];
    }
    acc.add(weight * integrand.evaluate(v));
    int s = 0;
    while (s < kNumVars && ++idx[s] == n) idx[s++] = 0;
    if (s == kNumVars) break;
  }
  return acc.total();
}

inline constexpr double kInvPi4 = 1.0 / (std::numbers::pi_v<double> * std::numbers::pi_v<double> *
                                         std::numbers::pi_v<double> * std::numbers::pi_v<double>);

}  // namespace detail

// Evaluation route for the 8D integrals: kAuto picks the per-pair factorized
// path whenever every exponential block decouples across the four (p, x)
// pairs and falls back to the full tensor grid otherwise.
enum class QuadPath { kAuto, kFactorized, kTensor };

// (1/pi^4) integral of conj(psi)(p^i, x^i, -p^0, -x^0) e^{-(x0^2+p0^2)}
// times phi(p, x) e^{-(x0^2+p0^2)} over all eight variables.
inline cplx krein_integral_inner(const Symbol& psi, const Symbol& phi,
                                 const QuadratureGrid& grid,
                                 QuadPath path = QuadPath::kAuto) {
  std::array<double, kNumVars> flip;
  flip.fill(1.0);
  flip[var_p(0)] = -1.0;
  flip[var_x(0)] = -1.0;
  Symbol integrand = psi.conjugated().scale_vars(flip) * phi;

  QuadForm measure;
  measure.quad[var_p(0)][var_p(0)] = cplx(-2.0, 0.0);
  measure.quad[var_x(0)][var_x(0)] = cplx(-2.0, 0.0);
  integrand = integrand * Symbol::exponential(measure);
  integrand.canonicalize();

  bool factorizes = true;
  for (const auto& block : integrand.blocks)
    factorizes = factorizes && detail::block_factorizes(block.q);
  if (path == QuadPath::kFactorized && !factorizes)
    throw std::invalid_argument("krein_integral_inner: integrand couples distinct pairs");
  if (path == QuadPath::kTensor) factorizes = false;

  cplx total(0.0, 0.0);
  if (factorizes) {
    PairwiseAccumulator acc;
    for (const auto& block : integrand.blocks)
      acc.add(detail::integrate_block_factorized(block, grid));
    total = acc.total();
  } else {
    total = detail::integrate_tensor(integrand, grid);
  }
  if (!std::isfinite(std::abs(total)))
    throw std::runtime_error("krein_integral_inner: integrand overflow");
  return detail::kInvPi4 * total;
}

struct UnitaryInnerResult {
  bool divergent = false;
  cplx value{0.0, 0.0};  // last partial integral; the answer when convergent
  std::vector<std::pair<double, cplx>> partials;  // (cutoff R, partial integral)
};

namespace detail {

inline cplx gl_block_factorized(const ExpBlock& block, int nodes, double cutoff) {
  std::array<int, kNumVars> pmax{};
  for (const auto& term : block.terms)
    for (int s = 0; s < kNumVars; ++s) pmax[s] = std::max(pmax[s], int(term.mono[s]));

  auto [t, w] = gauss_legendre(nodes, -cutoff, cutoff);
  const std::size_t n = t.size();

  std::array<Eigen::MatrixXcd, 4> moments;
  for (int mu = 0; mu < 4; ++mu) {
    const int sp = var_p(mu), sx = var_x(mu);
    const cplx qa = block.q.quad[sp][sp], qb = block.q.quad[sx][sx];
    const cplx qc = block.q.quad[sp][sx] + block.q.quad[sx][sp];
    const cplx la = block.q.lin[sp], lb = block.q.lin[sx];
    const int amax = pmax[sp], bmax = pmax[sx];
    Eigen::MatrixXcd M(amax + 1, bmax + 1);
    for (int a = 0; a <= amax; ++a)
      for (int b = 0; b <= bmax; ++b) {
        PairwiseAccumulator acc;
        for (std::size_t i = 0; i < n; ++i)
          for (std::size_t j = 0; j < n; ++j) {
            const double u = t[i], v = t[j];
            const cplx expo = qa * (u * u) + qb * (v * v) + qc * (u * v) + la * u + lb * v;
            acc.add(w[i] * w[j] * std::exp(expo) * std::pow(u, a) * std::pow(v, b));
          }
        M(a, b) = acc.total();
      }
    moments[static_cast<std::size_t>(mu)] = std::move(M);
  }

  PairwiseAccumulator acc;
  for (const auto& term : block.terms) {
    cplx v = term.coeff;
    for (int mu = 0; mu < 4; ++mu)
      v *= moments[static_cast<std::size_t>(mu)](term.mono[var_p(mu)], term.mono[var_x(mu)]);
    acc.add(v);
  }
  return std::exp(block.q.c0) * acc.total();
}

inline cplx gl_tensor(const Symbol& integrand, int nodes, double cutoff) {
  auto [t, w] = gauss_legendre(nodes, -cutoff, cutoff);
  const int n = nodes;
  PairwiseAccumulator acc;
  std::array<int, kNumVars> idx{};
  std::array<double, kNumVars> v{};
  while (true) {
    double weight = 1.0;
    for (int s = 0; s < kNumVars; ++s) {
      v[s] = t[static_cast<std::size_t>(idx[s])];
      weight *= w[static_cast<std::size_t>(idx[s])];
    }
    acc.add(weight * integrand.evaluate(v));
    int s = 0;
    while (s < kNumVars && ++idx[s] == n) idx[s++] = 0;
    if (s == kNumVars) break;
  }
  return acc.total();
}

}  // namespace detail

// Flat-measure inner product (1/pi^4) integral conj(psi) phi over nested
// hypercube cutoffs.  For the covariant Fock class this diverges; the
// partial-integral series is the diagnostic.
inline UnitaryInnerResult unitary_integral_inner(const Symbol& psi, const Symbol& phi,
                                                 const QuadratureGrid& grid) {
  Symbol integrand = psi.conjugated() * phi;
  integrand.canonicalize();

  bool factorizes = true;
  for (const auto& block : integrand.blocks)
    factorizes = factorizes && detail::block_factorizes(block.q);

  UnitaryInnerResult result;
  const std::array<double, 4> cutoffs{2.0, 4.0, 6.0, 8.0};
  for (double cutoff : cutoffs) {
    cplx val(0.0, 0.0);
    if (factorizes) {
      PairwiseAccumulator acc;
      for (const auto& block : integrand.blocks)
        acc.add(detail::gl_block_factorized(block, grid.nodes, cutoff));
      val = acc.total();
    } else {
      val = detail::gl_tensor(integrand, std::min(grid.nodes, grid.tensor_cap), cutoff);
    }
    result.partials.emplace_back(cutoff, detail::kInvPi4 * val);
  }

  bool growing = true;
  for (std::size_t k = 0; k + 1 < result.partials.size(); ++k)
    growing = growing && std::abs(result.partials[k + 1].second) >
                             10.0 * std::abs(result.partials[k].second);
  result.divergent = growing;
  result.value = result.partials.back().second;
  return result;
}

namespace detail {

inline double adaptive_simpson(double a, double b, double fa, double fm, double fb, double whole,
                               double tol, int depth, double (*f)(double)) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
  const double flm = f(lm), frm = f(rm);
  const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  const double delta = left + right - whole;
  if (depth <= 0 || std::abs(delta) <= 15.0 * tol) return left + right + delta / 15.0;
  return adaptive_simpson(a, m, fa, flm, fm, left, 0.5 * tol, depth - 1, f) +
         adaptive_simpson(m, b, fm, frm, fb, right, 0.5 * tol, depth - 1, f);
}

inline double rho_integrand(double r) {
  const double d = 1.0 - r * r;
  return 1.0 / (d * d);
}

}  // namespace detail

// I(rho_cut) = integral_{-rho_cut}^{rho_cut} d rho / (1 - rho^2)^2, the
// radial factor whose cutoff growth tracks the flat-measure divergence.
inline double rho_integral_demo(double rho_cut) {
  if (!(rho_cut >= 0.0 && rho_cut < 1.0))
    throw std::invalid_argument("rho_integral_demo: need 0 <= rho_cut < 1");
  if (rho_cut == 0.0) return 0.0;
  const double a = 0.0, b = rho_cut;
  const double fa = detail::rho_integrand(a), fb = detail::rho_integrand(b);
  const double fm = detail::rho_integrand(0.5 * (a + b));
  const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  const double tol = 1e-10 * std::max(1.0, std::abs(whole));
  const double half =
      detail::adaptive_simpson(a, b, fa, fm, fb, whole, tol, 60, detail::rho_integrand);
  return 2.0 * half;
}

}  // namespace kreinosc
