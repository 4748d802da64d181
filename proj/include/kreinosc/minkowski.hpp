#pragma once
// Minkowski four-vectors with signature (-,+,+,+) and the extended phase-space
// group over them: elements g = (p, x, theta, Lambda) with the composition law
//   g2 g1 = (p2 + L2 p1,  x2 + L2 x1,  th2 + th1 - <x2, L2 p1> + <p2, L2 x1>,  L2 L1)
// where <a,b> = eta_{mu nu} a^mu b^nu.  theta is the central phase coordinate;
// for pure translations its cross term is the antisymmetric cocycle
// -(x2.p1 - p2.x1).

#include <array>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <utility>

namespace kreinosc {

inline constexpr std::array<double, 4> kMetricDiag{-1.0, 1.0, 1.0, 1.0};

// eta_{mu nu} == eta^{mu nu} (diagonal, own inverse).
inline constexpr double metric(int mu, int nu) {
  return mu == nu ? kMetricDiag[static_cast<std::size_t>(mu)] : 0.0;
}

struct FourVector {
  // Upper-index components v^0..v^3.
  std::array<double, 4> c{0.0, 0.0, 0.0, 0.0};

  FourVector() = default;
  FourVector(double v0, double v1, double v2, double v3) : c{v0, v1, v2, v3} {}

  double operator[](int mu) const { return c[static_cast<std::size_t>(mu)]; }
  double& operator[](int mu) { return c[static_cast<std::size_t>(mu)]; }

  // Lower-index component v_mu = eta_{mu nu} v^nu.
  double lower(int mu) const { return kMetricDiag[static_cast<std::size_t>(mu)] * c[static_cast<std::size_t>(mu)]; }

  FourVector operator+(const FourVector& o) const {
    return {c[0] + o.c[0], c[1] + o.c[1], c[2] + o.c[2], c[3] + o.c[3]};
  }
  FourVector operator-(const FourVector& o) const {
    return {c[0] - o.c[0], c[1] - o.c[1], c[2] - o.c[2], c[3] - o.c[3]};
  }
  FourVector operator-() const { return {-c[0], -c[1], -c[2], -c[3]}; }
  friend FourVector operator*(double s, const FourVector& v) {
    return {s * v.c[0], s * v.c[1], s * v.c[2], s * v.c[3]};
  }
};

// Minkowski inner product a_mu b^mu.
inline double mdot(const FourVector& a, const FourVector& b) {
  return -a[0] * b[0] + a[1] * b[1] + a[2] * b[2] + a[3] * b[3];
}

inline double minkowski_square(const FourVector& a) { return mdot(a, a); }

struct LorentzMatrix {
  // m[mu][nu] = Lambda^mu_nu acting on upper components.
  std::array<std::array<double, 4>, 4> m{};

  static LorentzMatrix identity() {
    LorentzMatrix L;
    for (int i = 0; i < 4; ++i) L.m[i][i] = 1.0;
    return L;
  }

  FourVector apply(const FourVector& v) const {
    FourVector r;
    for (int mu = 0; mu < 4; ++mu) {
      double s = 0.0;
      for (int nu = 0; nu < 4; ++nu) s += m[mu][nu] * v[nu];
      r[mu] = s;
    }
    return r;
  }

  LorentzMatrix operator*(const LorentzMatrix& o) const {
    LorentzMatrix r;
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j) {
        double s = 0.0;
        for (int k = 0; k < 4; ++k) s += m[i][k] * o.m[k][j];
        r.m[i][j] = s;
      }
    return r;
  }

  // For Lambda in O(1,3): Lambda^{-1} = eta Lambda^T eta.
  LorentzMatrix inverse() const {
    LorentzMatrix r;
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j)
        r.m[i][j] = kMetricDiag[static_cast<std::size_t>(i)] * m[j][i] *
                    kMetricDiag[static_cast<std::size_t>(j)];
    return r;
  }

  // max |(Lambda^T eta Lambda - eta)_{mu nu}|; zero iff metric-preserving.
  double metric_defect() const {
    double worst = 0.0;
    for (int mu = 0; mu < 4; ++mu)
      for (int nu = 0; nu < 4; ++nu) {
        double s = 0.0;
        for (int rho = 0; rho < 4; ++rho)
          s += m[rho][mu] * kMetricDiag[static_cast<std::size_t>(rho)] * m[rho][nu];
        s -= metric(mu, nu);
        worst = std::max(worst, std::abs(s));
      }
    return worst;
  }
};

// Boost along spatial axis (1..3) with the given rapidity.
inline LorentzMatrix boost(int axis, double rapidity) {
  if (axis < 1 || axis > 3) throw std::invalid_argument("boost: axis must be 1..3");
  LorentzMatrix L = LorentzMatrix::identity();
  const double ch = std::cosh(rapidity), sh = std::sinh(rapidity);
  L.m[0][0] = ch;
  L.m[0][axis] = sh;
  L.m[axis][0] = sh;
  L.m[axis][axis] = ch;
  return L;
}

// Rotation in the (i,j) spatial plane, i,j in 1..3, i != j.
inline LorentzMatrix rotation(int i, int j, double angle) {
  if (i < 1 || i > 3 || j < 1 || j > 3 || i == j)
    throw std::invalid_argument("rotation: need distinct spatial axes");
  LorentzMatrix L = LorentzMatrix::identity();
  const double c = std::cos(angle), s = std::sin(angle);
  L.m[i][i] = c;
  L.m[j][j] = c;
  L.m[i][j] = -s;
  L.m[j][i] = s;
  return L;
}

struct GroupElement {
  FourVector p;
  FourVector x;
  double theta = 0.0;
  LorentzMatrix Lambda = LorentzMatrix::identity();

  static GroupElement identity() { return GroupElement{}; }

  static GroupElement translation(const FourVector& p, const FourVector& x, double theta = 0.0) {
    return GroupElement{p, x, theta, LorentzMatrix::identity()};
  }
};

// Group law; left factor acts first on the right factor's vectors.
inline GroupElement compose(const GroupElement& g2, const GroupElement& g1) {
  GroupElement r;
  const FourVector Lp = g2.Lambda.apply(g1.p);
  const FourVector Lx = g2.Lambda.apply(g1.x);
  r.p = g2.p + Lp;
  r.x = g2.x + Lx;
  r.theta = g2.theta + g1.theta - mdot(g2.x, Lp) + mdot(g2.p, Lx);
  r.Lambda = g2.Lambda * g1.Lambda;
  return r;
}

// Unique two-sided inverse under compose().  The cocycle contribution cancels
// because mdot is symmetric and Lorentz-invariant, so only theta flips sign.
inline GroupElement inverse(const GroupElement& g) {
  GroupElement r;
  r.Lambda = g.Lambda.inverse();
  r.p = -r.Lambda.apply(g.p);
  r.x = -r.Lambda.apply(g.x);
  r.theta = -g.theta;
  return r;
}

// Scaling-parameter normalization of phase-space labels.  For s > 0 the labels
// rescale directly; for s < 0 position and momentum swap roles with a sign.
// Returns the normalized pair (p, x).  s == 0 has no normalized form.
inline std::pair<FourVector, FourVector> normalize_representation(const FourVector& p,
                                                                  const FourVector& x,
                                                                  double varsigma) {
  if (varsigma == 0.0)
    throw std::invalid_argument("normalize_representation: varsigma must be nonzero");
  if (varsigma > 0.0) {
    const double r = std::sqrt(varsigma);
    return {r * p, r * x};
  }
  const double r = std::sqrt(-varsigma);
  return {-r * x, -r * p};
}

}  // namespace kreinosc
