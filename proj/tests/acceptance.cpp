// Acceptance gate: twelve go/no-go checks over the whole toolkit, one line
// of output per criterion. Exits nonzero if any criterion fails.
//
// argv[1] must be the path to the CLI binary; the determinism criterion runs
// it repeatedly and byte-compares the reports.

#include <chrono>
#include <cmath>
#include <complex>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "kreinosc/contraction.hpp"
#include "kreinosc/fock_basis.hpp"
#include "kreinosc/operators.hpp"
#include "kreinosc/quadrature.hpp"
#include "kreinosc/star_calculus.hpp"

using namespace kreinosc;

namespace {

int failures = 0;

void report(int idx, const std::string& name, bool ok, const std::string& detail) {
  std::printf("%s  criterion %2d: %s  [%s]\n", ok ? "PASS" : "FAIL", idx, name.c_str(),
              detail.c_str());
  if (!ok) ++failures;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

double vector_guarded_max(const Eigen::VectorXcd& v, const TruncatedBasis& basis, int guard) {
  const std::int64_t gdim = guarded_dim(basis, guard);
  double worst = 0.0;
  for (std::int64_t i = 0; i < gdim; ++i) worst = std::max(worst, std::abs(v(i)));
  return worst;
}

// 1. Indefinite orthonormality of the Fock basis, in exact arithmetic.
void criterion_1() {
  const auto t0 = std::chrono::steady_clock::now();
  const auto basis = make_basis(6);
  bool exact = true;
  for (std::int64_t i = 0; i < basis->size() && exact; ++i) {
    const KreinVector vi = KreinVector::basis_state(basis, basis->index(i));
    for (std::int64_t k = 0; k < basis->size(); ++k) {
      const cplx inner = krein_inner(vi, KreinVector::basis_state(basis, basis->index(k)));
      const cplx expect =
          (i == k) ? cplx(basis->index(i).parity_sign(), 0.0) : cplx(0.0, 0.0);
      if (inner != expect) {
        exact = false;
        break;
      }
    }
  }
  const double dt = seconds_since(t0);
  report(1, "indefinite orthonormality, all pairs with total <= 6, exact", exact && dt < 1.0,
         "dim=210, " + fmt(dt) + "s");
}

// 2. Matrix Lie-algebra suite at N_max = 8 on guarded subspaces.
void criterion_2() {
  const auto t0 = std::chrono::steady_clock::now();
  const auto checks = verify_algebra(make_basis(8));
  double worst = 0.0;
  for (const auto& c : checks) worst = std::max(worst, c.max_residual);
  const double dt = seconds_since(t0);
  report(2, "operator algebra residuals at N_max=8 <= 1e-10", worst <= 1e-10 && dt < 10.0,
         "worst=" + fmt(worst) + ", " + fmt(dt) + "s");
}

// 3. Oscillator invariant spectrum 4(n+2) with binomial multiplicities.
void criterion_3() {
  const auto basis = make_basis(6);
  const Eigen::VectorXcd eig = guarded_spectrum(oscillator_invariant(basis), 2);
  std::vector<std::int64_t> counts(5, 0);
  double dev = 0.0, imag = 0.0;
  for (Eigen::Index i = 0; i < eig.size(); ++i) {
    long n = std::lround(eig(i).real() / 4.0 - 2.0);
    if (n < 0) n = 0;
    if (n > 4) n = 4;
    counts[static_cast<std::size_t>(n)]++;
    dev = std::max(dev, std::abs(eig(i).real() - 4.0 * (double(n) + 2.0)));
    imag = std::max(imag, std::abs(eig(i).imag()));
  }
  bool mult_ok = true;
  for (int n = 0; n <= 4; ++n) mult_ok = mult_ok && counts[size_t(n)] == binomial(n + 3, 3);
  report(3, "spectrum 4(n+2) on levels n<=4, multiplicity C(n+3,3)",
         dev <= 1e-9 && imag <= 1e-10 && mult_ok,
         "dev=" + fmt(dev) + ", imag=" + fmt(imag) + (mult_ok ? ", mult ok" : ", mult BAD"));
}

// 4. Pseudo-unitarity of boosts and displacements at N_max = 12.
void criterion_4() {
  const auto basis = make_basis(12);
  double worst = 0.0;
  for (double rapidity : {0.1, 0.2})
    worst = std::max(worst, pseudo_unitarity_defect(lorentz_flow(basis, 0, 1, rapidity), 4));
  const FourVector p(0.3, -0.5, 0.0, 0.2), x(0.0, 0.4, -0.25, 0.5);
  worst = std::max(worst, pseudo_unitarity_defect(weyl_displacement(basis, p, x), 4));
  report(4, "boosts and displacements eta-unitary at N_max=12, guard 4", worst <= 1e-8,
         "worst defect=" + fmt(worst));
}

// 5. Coherent-state contract: eigenrelation, expectations, overlap formula.
void criterion_5() {
  const auto basis = make_basis(16);
  const FourVector p(0.2, -0.3, 0.1, 0.4), x(0.3, 0.2, -0.4, 0.1);
  const KreinVector cs = coherent_state(basis, p, x);
  const LadderOps lad = ladder_ops(basis);
  const CanonicalPairs cp = position_momentum(basis);

  double eig_dev = 0.0, expect_dev = 0.0;
  const cplx norm = krein_inner(cs, cs);
  for (int mu = 0; mu < 4; ++mu) {
    const cplx eig = 2.0 * cplx(x[mu], p[mu]);
    eig_dev = std::max(
        eig_dev, vector_guarded_max(
                     lad.lower[size_t(mu)].apply(cs).coeffs() - eig * cs.coeffs(), *basis, 1));
    const cplx xv = krein_inner(cs, cp.X[size_t(mu)].apply(cs)) / norm;
    const cplx pv = krein_inner(cs, cp.P[size_t(mu)].apply(cs)) / norm;
    expect_dev = std::max(expect_dev, std::abs(xv - cplx(2.0 * x.lower(mu), 0.0)));
    expect_dev = std::max(expect_dev, std::abs(pv - cplx(2.0 * p.lower(mu), 0.0)));
  }

  const FourVector pB(0.0, 0.25, -0.5, 0.1), xB(0.5, 0.0, 0.3, -0.2);
  const cplx closed = coherent_overlap(p, x, pB, xB);
  const cplx summed = krein_inner(coherent_state(basis, pB, xB), cs);
  const double overlap_dev = std::abs(closed - summed);

  report(5, "coherent eigenrelation, expectations 2x/2p, overlap formula",
         eig_dev <= 1e-8 && expect_dev <= 1e-8 && overlap_dev <= 1e-8,
         "eig=" + fmt(eig_dev) + ", expect=" + fmt(expect_dev) + ", overlap=" +
             fmt(overlap_dev));
}

// 6. Quadrature reproduces the algebraic inner product on all pairs <= 4.
void criterion_6() {
  const auto t0 = std::chrono::steady_clock::now();
  const auto basis = make_basis(4);
  const QuadratureGrid grid(48);
  std::vector<Symbol> waves;
  for (std::int64_t i = 0; i < basis->size(); ++i)
    waves.push_back(fock_wavefunction(basis->index(i)));
  double worst = 0.0;
  for (std::int64_t i = 0; i < basis->size(); ++i) {
    for (std::int64_t k = 0; k < basis->size(); ++k) {
      const cplx expect =
          (i == k) ? cplx(basis->index(i).parity_sign(), 0.0) : cplx(0.0, 0.0);
      worst = std::max(worst, std::abs(krein_integral_inner(waves[size_t(i)],
                                                            waves[size_t(k)], grid) -
                                       expect));
    }
  }
  const double dt = seconds_since(t0);
  report(6, "phase-space quadrature matches algebra on all pairs with total <= 4",
         worst <= 1e-8 && dt < 60.0, "dim=70, worst=" + fmt(worst) + ", " + fmt(dt) + "s");
}

// 7. Hamilton flow and the plane-wave eigenrelation are float-exact.
void criterion_7() {
  const double m = 2.0, tau = 3.0;
  PolyMap g;
  for (int mu = 0; mu < 4; ++mu) {
    Mono mm{};
    mm[var_p(mu)] = 2;
    g[mm] = cplx(kMetricDiag[mu] / (2.0 * m), 0.0);
  }
  const Symbol G = Symbol::from_poly(g);
  double flow = 0.0;
  for (int mu = 0; mu < 4; ++mu) {
    const Symbol xe = Symbol::x_lowered(mu) + cplx(tau / m) * Symbol::p_lowered(mu);
    flow = std::max(flow, symbol_distance(heisenberg_flow(Symbol::x_lowered(mu), G, tau), xe));
    flow = std::max(flow, symbol_distance(heisenberg_flow(Symbol::p_lowered(mu), G, tau),
                                          Symbol::p_lowered(mu)));
  }
  const KleinGordonResult kg = klein_gordon_check(FourVector{m / 2.0, 0.0, 0.0, 0.0}, m);
  const bool ok = flow == 0.0 && kg.residual == 0.0 &&
                  kg.eigenvalue == cplx(-m / 2.0, 0.0);
  report(7, "free Hamilton flow and plane-wave eigenvalue -m/2, float-exact", ok,
         "flow=" + fmt(flow) + ", kg resid=" + fmt(kg.residual) + ", eig re=" +
             fmt(kg.eigenvalue.real()));
}

// 8. The fifteen-generator table closes exactly; the central vector field is 0.
void criterion_8() {
  const auto checks = verify_generator_table();
  double worst = 0.0;
  for (const auto& c : checks) worst = std::max(worst, c.max_residual);
  report(8, "generator-table commutators and structure constants, float-exact",
         checks.size() == 5 && worst == 0.0, "worst=" + fmt(worst));
}

// 9. Galilean contraction rates.
void criterion_9() {
  GalileanLabels A, B, C;
  B.e = 1.0;
  B.x[0] = 0.4;
  B.p[1] = -0.3;
  C.t = 0.3;
  C.x[1] = 0.2;
  const GalileanOverlapScan escan = galilean_overlap_scan(A, B, {4.0, 8.0, 16.0, 32.0});
  const GalileanOverlapScan tscan = galilean_overlap_scan(A, C, {1.0, 2.0, 4.0, 8.0});
  const GalileanGeneratorReport gen = galilean_generator_limit(100.0);

  const bool exp_ok = std::abs(escan.e_factor_exponent - (-2.0)) <= 0.05 * 2.0;
  const double slope_expected = 0.5 * 0.3 * 0.3;
  const bool slope_ok =
      std::abs(tscan.logmag_slope_vs_c2 - slope_expected) <= 0.01 * slope_expected;
  const bool ratio_ok = std::abs(gen.boost_ratio - 4.0) <= 0.05 * 4.0 &&
                        std::abs(gen.tilde_ratio - 4.0) <= 0.05 * 4.0;
  report(9, "Galilean rates: energy exponent -2, slope dt^2/2, residual ratio 4",
         exp_ok && slope_ok && ratio_ok,
         "exp=" + fmt(escan.e_factor_exponent) + ", slope=" + fmt(tscan.logmag_slope_vs_c2) +
             ", ratios=" + fmt(gen.boost_ratio) + "/" + fmt(gen.tilde_ratio));
}

// 10. Classical contraction rates and exact Hamilton identities.
void criterion_10() {
  const auto [alpha, beta] = default_classical_pair();
  std::vector<std::pair<double, double>> ks;
  for (double target : {1e2, 1e3, 1e4, 1e5}) {
    const double side = std::sqrt(target);
    ks.emplace_back(side, side);
  }
  const ClassicalLimitScan scan = classical_limit_scan(alpha, beta, ks);
  double worst = 0.0;
  for (const auto& c : scan.checks) worst = std::max(worst, c.max_residual);
  const bool ok = std::abs(scan.star_slope - (-1.0)) <= 0.02 &&
                  std::abs(scan.bracket_slope - (-2.0)) <= 0.04 && worst == 0.0;
  report(10, "classical rates: star slope -1, bracket slope -2, exact Hamilton",
         ok, "star=" + fmt(scan.star_slope) + ", bracket=" + fmt(scan.bracket_slope) +
                 ", checks=" + fmt(worst));
}

// 11. Flat-measure divergence and the regulated angular integral.
void criterion_11() {
  const QuadratureGrid grid(48);
  const Symbol phi0 = vacuum_wavefunction();
  const UnitaryInnerResult flat = unitary_integral_inner(phi0, phi0, grid);
  bool growth = flat.divergent && flat.partials.size() >= 2;
  for (std::size_t i = 1; i < flat.partials.size(); ++i)
    growth = growth && std::abs(flat.partials[i].second) >
                           10.0 * std::abs(flat.partials[i - 1].second);

  const double I09 = rho_integral_demo(0.9);
  const bool i_ok = std::abs(I09 - 6.2090) <= 1e-4;
  const double rho = 1.0 - 1e-4;
  const double scaled = (1.0 - rho) * rho_integral_demo(rho);
  const bool tail_ok = std::abs(scaled - 0.5) <= 0.01 * 0.5;
  report(11, "flat norm grows >10x per cutoff; I(0.9)=6.2090; (1-rho)I -> 1/2",
         growth && i_ok && tail_ok,
         "I(0.9)=" + fmt(I09) + ", scaled=" + fmt(scaled));
}

// 12. Byte-identical CLI reports across repeated runs.
void criterion_12(const std::string& cli) {
  const std::vector<std::string> configs = {
      "verify-algebra --nmax 4",
      "spectrum --nmax 5 --levels 3",
      "spectrum --nmax 5 --levels 3 --format csv",
      "inner-table --nmax 2 --quadrature --nodes 32",
      "overlap",
      "evolve",
      "contract --mode galilean",
      "contract --mode classical --format csv",
      "divergence",
  };
  bool identical = true;
  std::string culprit;
  for (const auto& cfg : configs) {
    std::string payloads[2];
    for (int run = 0; run < 2; ++run) {
      const std::string path = "acceptance_cli_run.tmp";
      const std::string cmd = cli + " " + cfg + " > " + path + " 2>&1";
      // Nonzero status also catches a bad CLI path: the shell's "not found"
      // message would otherwise land in the file and compare byte-identical.
      if (std::system(cmd.c_str()) != 0) {
        identical = false;
        culprit = cfg + " (nonzero exit)";
        break;
      }
      std::ifstream f(path, std::ios::binary);
      std::ostringstream ss;
      ss << f.rdbuf();
      payloads[run] = ss.str();
    }
    std::remove("acceptance_cli_run.tmp");
    if (!identical) break;
    if (payloads[0].empty() || payloads[0] != payloads[1]) {
      identical = false;
      culprit = cfg;
      break;
    }
  }
  report(12, "CLI reports byte-identical across repeated runs",
         identical, identical ? std::to_string(configs.size()) + " configs" : culprit);
}

}  // namespace

int main(int argc, char** argv) {
  if (argc < 2) {
    std::fprintf(stderr, "usage: acceptance <path-to-cli>\n");
    return 2;
  }
  criterion_1();
  criterion_2();
  criterion_3();
  criterion_4();
  criterion_5();
  criterion_6();
  criterion_7();
  criterion_8();
  criterion_9();
  criterion_10();
  criterion_11();
  criterion_12(argv[1]);
  if (failures > 0) {
    std::printf("%d criterion(s) failed\n", failures);
    return 1;
  }
  std::printf("all 12 criteria passed\n");
  return 0;
}
