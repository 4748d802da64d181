#pragma once

// Truncated four-mode Fock basis carrying the indefinite inner product
// <m|n> = (-1)^{n0} delta_{mn}.  The basis is ordered by total degree and
// then lexicographically in (n0,n1,n2,n3), so the basis for a smaller
// N_max is always a prefix of the basis for a larger one.

#include <array>
#include <complex>
#include <cstdint>
#include <map>
#include <memory>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

namespace kreinosc {

using cplx = std::complex<double>;

struct FockIndex {
  std::array<int, 4> n{0, 0, 0, 0};

  FockIndex() = default;
  FockIndex(int n0, int n1, int n2, int n3) : n{n0, n1, n2, n3} {}

  int operator[](int mu) const { return n[static_cast<std::size_t>(mu)]; }
  int& operator[](int mu) { return n[static_cast<std::size_t>(mu)]; }

  int total() const { return n[0] + n[1] + n[2] + n[3]; }
  int parity_sign() const { return (n[0] % 2 == 0) ? 1 : -1; }

  bool operator==(const FockIndex& o) const { return n == o.n; }
  bool operator!=(const FockIndex& o) const { return n != o.n; }

  // Total-degree-then-lex order; this is the basis order everywhere.
  bool operator<(const FockIndex& o) const {
    const int ta = total();
    const int tb = o.total();
    if (ta != tb) return ta < tb;
    return n < o.n;
  }
};

inline std::int64_t binomial(int n, int k) {
  if (k < 0 || k > n) return 0;
  if (k > n - k) k = n - k;
  std::int64_t r = 1;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

// Number of FockIndex with total <= N_max: C(N_max+4, 4).
inline std::int64_t basis_dimension(int n_max) {
  if (n_max < 0) throw std::invalid_argument("basis_dimension: N_max must be nonnegative");
  return binomial(n_max + 4, 4);
}

struct KreinSignature {
  std::int64_t negative = 0;  // basis vectors with norm -1 (n0 odd)
  std::int64_t positive = 0;  // basis vectors with norm +1 (n0 even)
};

class TruncatedBasis {
 public:
  explicit TruncatedBasis(int n_max) : n_max_(n_max) {
    if (n_max < 0) throw std::invalid_argument("TruncatedBasis: N_max must be nonnegative");
    indices_.reserve(static_cast<std::size_t>(basis_dimension(n_max)));
    level_offset_.reserve(static_cast<std::size_t>(n_max) + 2);
    for (int level = 0; level <= n_max; ++level) {
      level_offset_.push_back(static_cast<std::int64_t>(indices_.size()));
      for (int n0 = 0; n0 <= level; ++n0)
        for (int n1 = 0; n1 <= level - n0; ++n1)
          for (int n2 = 0; n2 <= level - n0 - n1; ++n2)
            indices_.emplace_back(n0, n1, n2, level - n0 - n1 - n2);
    }
    level_offset_.push_back(static_cast<std::int64_t>(indices_.size()));
    for (std::size_t i = 0; i < indices_.size(); ++i)
      position_[indices_[i]] = static_cast<std::int64_t>(i);
  }

  int n_max() const { return n_max_; }
  std::int64_t size() const { return static_cast<std::int64_t>(indices_.size()); }

  const FockIndex& index(std::int64_t pos) const {
    return indices_[static_cast<std::size_t>(pos)];
  }
  const std::vector<FockIndex>& indices() const { return indices_; }

  bool contains(const FockIndex& idx) const { return position_.count(idx) != 0; }

  std::int64_t position(const FockIndex& idx) const {
    auto it = position_.find(idx);
    if (it == position_.end())
      throw std::out_of_range("TruncatedBasis::position: index outside truncation");
    return it->second;
  }

  // First basis position of total degree `level`; level n_max()+1 gives size().
  std::int64_t level_offset(int level) const {
    if (level < 0 || level > n_max_ + 1)
      throw std::out_of_range("TruncatedBasis::level_offset: level outside truncation");
    return level_offset_[static_cast<std::size_t>(level)];
  }

  KreinSignature signature() const {
    KreinSignature s;
    for (const auto& idx : indices_) (idx.parity_sign() < 0 ? s.negative : s.positive)++;
    return s;
  }

 private:
  int n_max_;
  std::vector<FockIndex> indices_;
  std::vector<std::int64_t> level_offset_;
  std::map<FockIndex, std::int64_t> position_;
};

using BasisPtr = std::shared_ptr<const TruncatedBasis>;

inline BasisPtr make_basis(int n_max) { return std::make_shared<TruncatedBasis>(n_max); }

inline KreinSignature signature(const TruncatedBasis& basis) { return basis.signature(); }

// State vector over a TruncatedBasis.  Norms may be negative or zero; no
// normalization is ever imposed.
class KreinVector {
 public:
  explicit KreinVector(BasisPtr basis)
      : basis_(std::move(basis)),
        coeffs_(Eigen::VectorXcd::Zero(basis_->size())) {}

  KreinVector(BasisPtr basis, Eigen::VectorXcd coeffs)
      : basis_(std::move(basis)), coeffs_(std::move(coeffs)) {
    if (coeffs_.size() != basis_->size())
      throw std::invalid_argument("KreinVector: coefficient count does not match basis size");
  }

  static KreinVector basis_state(BasisPtr basis, const FockIndex& idx) {
    KreinVector v(std::move(basis));
    v.coeffs_(v.basis_->position(idx)) = cplx(1.0, 0.0);
    return v;
  }

  const BasisPtr& basis() const { return basis_; }
  const Eigen::VectorXcd& coeffs() const { return coeffs_; }
  Eigen::VectorXcd& coeffs() { return coeffs_; }

  cplx operator[](const FockIndex& idx) const { return coeffs_(basis_->position(idx)); }
  cplx& operator[](const FockIndex& idx) { return coeffs_(basis_->position(idx)); }

 private:
  BasisPtr basis_;
  Eigen::VectorXcd coeffs_;
};

inline void require_same_basis(const KreinVector& a, const KreinVector& b, const char* who) {
  const auto& ba = *a.basis();
  const auto& bb = *b.basis();
  if (&ba != &bb && ba.n_max() != bb.n_max())
    throw std::invalid_argument(std::string(who) + ": vectors live on different bases");
}

// Indefinite inner product: conjugate-linear in the first slot.
inline cplx krein_inner(const KreinVector& psi, const KreinVector& phi) {
  require_same_basis(psi, phi, "krein_inner");
  const auto& basis = *psi.basis();
  cplx acc(0.0, 0.0);
  for (std::int64_t i = 0; i < basis.size(); ++i) {
    const double sign = basis.index(i).parity_sign();
    acc += sign * std::conj(psi.coeffs()(i)) * phi.coeffs()(i);
  }
  return acc;
}

inline cplx euclidean_inner(const KreinVector& psi, const KreinVector& phi) {
  require_same_basis(psi, phi, "euclidean_inner");
  return psi.coeffs().dot(phi.coeffs());
}

}  // namespace kreinosc
