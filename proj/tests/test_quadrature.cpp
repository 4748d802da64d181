#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <complex>
#include <numbers>
#include <random>
#include <vector>

#include "kreinosc/operators.hpp"
#include "kreinosc/quadrature.hpp"

using namespace kreinosc;

namespace {

std::mt19937_64 rng(550127u);

double uniform(double lo, double hi) {
  std::uniform_real_distribution<double> d(lo, hi);
  return d(rng);
}

FourVector random_label(double scale) {
  return {uniform(-scale, scale), uniform(-scale, scale), uniform(-scale, scale),
          uniform(-scale, scale)};
}

// prod_mu (x_mu - i p_mu)^{n_mu} / sqrt(n_mu!) times the vacuum Gaussian,
// assembled by plain symbol multiplication (no ladder operators involved).
Symbol direct_fock_wavefunction(const FockIndex& n) {
  Symbol s = vacuum_wavefunction();
  double norm = 1.0;
  for (int mu = 0; mu < 4; ++mu) {
    const Symbol factor = Symbol::x_lowered(mu) + cplx(0.0, -1.0) * Symbol::p_lowered(mu);
    for (int k = 1; k <= n[mu]; ++k) {
      s = factor * s;
      norm *= std::sqrt(double(k));
    }
  }
  s = cplx(1.0 / norm, 0.0) * s;
  s.canonicalize();
  return s;
}

// All Fock indices with total <= cap, in basis order.
std::vector<FockIndex> indices_up_to(int cap) {
  auto basis = make_basis(cap);
  return basis->indices();
}

const double kSqrtPi = std::sqrt(std::numbers::pi_v<double>);

}  // namespace

TEST_CASE("gauss hermite and legendre rules integrate monomials", "[quadrature]") {
  auto [t, w] = gauss_hermite(20);
  double m0 = 0.0, m2 = 0.0, m4 = 0.0, m1 = 0.0;
  for (std::size_t i = 0; i < t.size(); ++i) {
    m0 += w[i];
    m1 += w[i] * t[i];
    m2 += w[i] * t[i] * t[i];
    m4 += w[i] * t[i] * t[i] * t[i] * t[i];
  }
  CHECK(std::abs(m0 - kSqrtPi) < 1e-13);
  CHECK(std::abs(m1) < 1e-14);
  CHECK(std::abs(m2 - 0.5 * kSqrtPi) < 1e-13);
  CHECK(std::abs(m4 - 0.75 * kSqrtPi) < 1e-13);

  auto [s, v] = gauss_legendre(16, 0.0, 2.0);
  double p3 = 0.0, p0 = 0.0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    p0 += v[i];
    p3 += v[i] * s[i] * s[i] * s[i];
  }
  CHECK(std::abs(p0 - 2.0) < 1e-13);
  CHECK(std::abs(p3 - 4.0) < 1e-13);

  CHECK_THROWS_AS(gauss_hermite(0), std::invalid_argument);
  CHECK_THROWS_AS(gauss_legendre(0, 0.0, 1.0), std::invalid_argument);
}

TEST_CASE("fock wavefunctions match the direct polynomial form", "[quadrature]") {
  const Symbol vacuum = fock_wavefunction(FockIndex(0, 0, 0, 0));
  CHECK(symbol_equal(vacuum, vacuum_wavefunction(), 1e-14));

  // The vacuum exponent carries the Minkowski signs: +1/2 on the time pair.
  std::array<double, kNumVars> point{};
  point[var_x(0)] = 1.5;
  CHECK(std::abs(vacuum.evaluate(point) - cplx(std::exp(1.125), 0.0)) < 1e-12);

  const FockIndex cases[] = {FockIndex(0, 1, 0, 0), FockIndex(1, 0, 0, 0), FockIndex(0, 2, 0, 0),
                             FockIndex(1, 2, 0, 1), FockIndex(2, 0, 1, 1)};
  for (const FockIndex& n : cases) {
    const Symbol built = fock_wavefunction(n);
    const Symbol direct = direct_fock_wavefunction(n);
    INFO("n = (" << n[0] << ";" << n[1] << "," << n[2] << "," << n[3] << ") distance "
                 << symbol_distance(built, direct));
    CHECK(symbol_equal(built, direct, 1e-12));
  }
}

TEST_CASE("krein integral reproduces the algebraic inner product", "[quadrature]") {
  QuadratureGrid grid(48);

  const Symbol phi0 = fock_wavefunction(FockIndex(0, 0, 0, 0));
  CHECK(std::abs(krein_integral_inner(phi0, phi0, grid) - cplx(1.0, 0.0)) < 1e-10);

  const Symbol phi_t = fock_wavefunction(FockIndex(1, 0, 0, 0));
  CHECK(std::abs(krein_integral_inner(phi_t, phi_t, grid) - cplx(-1.0, 0.0)) < 1e-8);

  const Symbol phi_x = fock_wavefunction(FockIndex(0, 1, 0, 0));
  const Symbol phi_y = fock_wavefunction(FockIndex(0, 0, 1, 0));
  CHECK(std::abs(krein_integral_inner(phi_x, phi_y, grid)) < 1e-10);

  // Unit-level sweep over a small block of pairs; the full level-4 table is
  // the acceptance suite's job.
  QuadratureGrid coarse(32);
  const auto idx = indices_up_to(2);
  std::vector<Symbol> waves;
  waves.reserve(idx.size());
  for (const auto& n : idx) waves.push_back(fock_wavefunction(n));
  for (std::size_t i = 0; i < idx.size(); ++i)
    for (std::size_t j = 0; j < idx.size(); ++j) {
      const cplx got = krein_integral_inner(waves[i], waves[j], coarse);
      const cplx want =
          (i == j) ? cplx(double(idx[i].parity_sign()), 0.0) : cplx(0.0, 0.0);
      INFO("pair " << i << "," << j);
      CHECK(std::abs(got - want) < 1e-8);
    }
}

TEST_CASE("creation operator has the ladder matrix elements under the integral",
          "[quadrature]") {
  QuadratureGrid grid(48);
  const PolyDiffOp raise0 = creation_left(0);

  const Symbol phi0 = fock_wavefunction(FockIndex(0, 0, 0, 0));
  const Symbol phi1 = fock_wavefunction(FockIndex(1, 0, 0, 0));
  const Symbol phi2 = fock_wavefunction(FockIndex(2, 0, 0, 0));

  // <m| adag_0 |n>_eta = (-1)^{m_0} 2 sqrt(n_0 + 1) on m = n + e_0.
  CHECK(std::abs(krein_integral_inner(phi1, raise0.apply(phi0), grid) - cplx(-2.0, 0.0)) <
        1e-8);
  CHECK(std::abs(krein_integral_inner(phi2, raise0.apply(phi1), grid) -
                 cplx(2.0 * std::sqrt(2.0), 0.0)) < 1e-8);

  const PolyDiffOp raise1 = creation_left(1);
  const Symbol chi1 = fock_wavefunction(FockIndex(0, 1, 0, 0));
  const Symbol chi2 = fock_wavefunction(FockIndex(0, 2, 0, 0));
  CHECK(std::abs(krein_integral_inner(chi2, raise1.apply(chi1), grid) -
                 cplx(2.0 * std::sqrt(2.0), 0.0)) < 1e-8);
}

TEST_CASE("generator actions are eta hermitian under the integral", "[quadrature]") {
  QuadratureGrid grid(40);

  Symbol psi = fock_wavefunction(FockIndex(0, 1, 0, 0)) +
               cplx(0.3, -0.2) * fock_wavefunction(FockIndex(1, 0, 1, 0));
  Symbol phi = fock_wavefunction(FockIndex(0, 0, 0, 0)) +
               cplx(-0.1, 0.4) * fock_wavefunction(FockIndex(2, 0, 0, 0)) +
               cplx(0.2, 0.0) * fock_wavefunction(FockIndex(0, 1, 1, 0));
  psi.canonicalize();
  phi.canonicalize();

  for (int mu = 0; mu < 4; ++mu) {
    const PolyDiffOp xl = xhat_left(mu);
    const PolyDiffOp pl = phat_left(mu);
    const cplx xlr = krein_integral_inner(xl.apply(psi), phi, grid);
    const cplx xrr = krein_integral_inner(psi, xl.apply(phi), grid);
    CHECK(std::abs(xlr - xrr) < 1e-8);
    const cplx plr = krein_integral_inner(pl.apply(psi), phi, grid);
    const cplx prr = krein_integral_inner(psi, pl.apply(phi), grid);
    CHECK(std::abs(plr - prr) < 1e-8);
  }
}

TEST_CASE("coherent wavefunction overlaps match the closed form", "[quadrature]") {
  QuadratureGrid grid(48);

  for (int trial = 0; trial < 3; ++trial) {
    const FourVector pA = random_label(0.5), xA = random_label(0.5);
    const FourVector pB = random_label(0.5), xB = random_label(0.5);
    const Symbol wA = coherent_wavefunction(pA, xA);
    const Symbol wB = coherent_wavefunction(pB, xB);

    const cplx integral = krein_integral_inner(wB, wA, grid);
    const cplx closed = coherent_overlap(pA, xA, pB, xB);
    INFO("trial " << trial << " |diff| " << std::abs(integral - closed));
    CHECK(std::abs(integral - closed) < 1e-6);

    CHECK(std::abs(krein_integral_inner(wA, wA, grid) - cplx(1.0, 0.0)) < 1e-6);
  }

  // Coherent wavefunction at the origin labels is the vacuum Gaussian.
  CHECK(symbol_equal(coherent_wavefunction(FourVector(), FourVector()), vacuum_wavefunction(),
                     1e-14));
}

TEST_CASE("factorized and tensor paths agree", "[quadrature]") {
  QuadratureGrid fine(6);

  const Symbol psi = fock_wavefunction(FockIndex(1, 1, 0, 0));
  const Symbol phi = fock_wavefunction(FockIndex(1, 1, 0, 0));
  const cplx fact = krein_integral_inner(psi, phi, fine);
  const cplx tensor = krein_integral_inner(psi, phi, fine, QuadPath::kTensor);
  CHECK(std::abs(fact - tensor) < 1e-12);
  CHECK(std::abs(fact - cplx(-1.0, 0.0)) < 1e-10);  // n_0 = 1 flips the sign

  // A within-pair cross term stays on the factorized path and has a known
  // Gaussian value: relative weight 1/sqrt(1 - c^2/4) on the coupled pair.
  QuadratureGrid grid(48);
  Symbol crossed = vacuum_wavefunction();
  QuadForm bump;
  bump.add_cross(var_p(1), var_x(1), cplx(0.3, 0.0));
  crossed = crossed * Symbol::exponential(bump);
  crossed.canonicalize();
  const cplx got = krein_integral_inner(vacuum_wavefunction(), crossed, grid);
  const double want = 1.0 / std::sqrt(1.0 - 0.25 * 0.3 * 0.3);
  CHECK(std::abs(got - cplx(want, 0.0)) < 1e-10);

  // Coupling different mu pairs forces the tensor fallback; the two routes
  // again agree.
  Symbol tangled = vacuum_wavefunction();
  QuadForm link;
  link.add_cross(var_x(1), var_x(2), cplx(0.2, 0.0));
  tangled = tangled * Symbol::exponential(link);
  tangled.canonicalize();
  const cplx via_auto = krein_integral_inner(vacuum_wavefunction(), tangled, fine);
  const cplx via_tensor = krein_integral_inner(vacuum_wavefunction(), tangled, fine,
                                               QuadPath::kTensor);
  CHECK(std::abs(via_auto - via_tensor) < 1e-14);
  CHECK_THROWS_AS(
      krein_integral_inner(vacuum_wavefunction(), tangled, fine, QuadPath::kFactorized),
      std::invalid_argument);
}

TEST_CASE("flat measure norm of the vacuum diverges with the cutoff", "[quadrature]") {
  QuadratureGrid grid(48);
  const Symbol phi0 = vacuum_wavefunction();

  const UnitaryInnerResult bad = unitary_integral_inner(phi0, phi0, grid);
  CHECK(bad.divergent);
  REQUIRE(bad.partials.size() == 4);
  for (std::size_t k = 0; k + 1 < bad.partials.size(); ++k) {
    CHECK(std::abs(bad.partials[k + 1].second) > 10.0 * std::abs(bad.partials[k].second));
  }

  // The log integrand grows like +T^2 along the time axis.
  std::array<double, kNumVars> point{};
  for (double T : {1.5, 2.5}) {
    point[var_x(0)] = T;
    const cplx val = phi0.evaluate(point);
    CHECK(std::abs(std::log(std::norm(val)) - T * T) < 1e-10);
  }

  // A Euclidean Gaussian stays finite and matches the closed form exactly
  // (the flat integral of e^{-t^2} per axis gives pi^4 over pi^4).
  QuadForm eq;
  for (int s = 0; s < kNumVars; ++s) eq.quad[s][s] = cplx(-0.5, 0.0);
  const Symbol euclid = Symbol::exponential(eq);
  const UnitaryInnerResult good = unitary_integral_inner(euclid, euclid, grid);
  CHECK(!good.divergent);
  CHECK(std::abs(good.value - cplx(1.0, 0.0)) < 1e-8);
  CHECK(std::abs(good.partials.back().second - good.partials[2].second) < 1e-8);
}

TEST_CASE("rho integral demo follows the antiderivative", "[quadrature]") {
  CHECK(rho_integral_demo(0.0) == 0.0);
  CHECK_THROWS_AS(rho_integral_demo(1.0), std::invalid_argument);
  CHECK_THROWS_AS(rho_integral_demo(1.5), std::invalid_argument);
  CHECK_THROWS_AS(rho_integral_demo(-0.1), std::invalid_argument);

  auto closed = [](double c) { return c / (1.0 - c * c) + std::atanh(c); };

  const double at09 = rho_integral_demo(0.9);
  CHECK(std::abs(at09 - 6.2090) < 1e-4);
  CHECK(std::abs(at09 - closed(0.9)) < 1e-8);

  for (int k = 2; k <= 6; ++k) {
    const double c = 1.0 - std::pow(10.0, -k);
    const double got = rho_integral_demo(c);
    CHECK(std::abs(got - closed(c)) < 1e-6 * closed(c));
  }

  const double near = 1.0 - 1e-4;
  CHECK(std::abs((1.0 - near) * rho_integral_demo(near) - 0.5) < 0.005);
}
