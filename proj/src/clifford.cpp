#include "jspec/clifford.hpp"

#include <bit>
#include <string>

#include "jspec/joint_spectrum.hpp"

namespace jspec {

namespace {

void require_same_m(int a, int b, const char* what) {
  if (a != b) {
    throw Error(ErrorCode::GeneratorCountMismatch,
                std::string(what) + ": generator counts differ (" + std::to_string(a) +
                    " vs " + std::to_string(b) + ")");
  }
}

void require_valid_m(int m) {
  if (m < 0 || m > kMaxGenerators) {
    throw Error(ErrorCode::InvalidArgument,
                "generator count must lie in [0, " + std::to_string(kMaxGenerators) + "]");
  }
}

std::uint32_t blade_count(int m) { return std::uint32_t{1} << m; }

int reversion_sign(std::uint32_t mask) {
  const int k = std::popcount(mask);
  return ((k * (k + 1) / 2) % 2 == 0) ? 1 : -1;
}

// Sign of e_S e_T after normal ordering: one factor -1 per transposition
// needed to merge the sorted generator lists, one per squared generator.
int product_sign(std::uint32_t s, std::uint32_t t) {
  int swaps = 0;
  for (std::uint32_t rest = t; rest != 0; rest &= rest - 1) {
    const int j = std::countr_zero(rest);
    swaps += std::popcount(s >> (j + 1));
  }
  swaps += std::popcount(s & t);
  return (swaps % 2 == 0) ? 1 : -1;
}

}  // namespace

BasisBlade BasisBlade::generator(int j, int m) {
  require_valid_m(m);
  if (j < 1 || j > m) {
    throw Error(ErrorCode::InvalidArgument,
                "generator index " + std::to_string(j) + " outside 1.." + std::to_string(m));
  }
  return {std::uint32_t{1} << (j - 1), m};
}

BasisBlade BasisBlade::from_indices(const std::vector<int>& generators, int m) {
  BasisBlade out = scalar(m);
  for (int j : generators) out.mask |= generator(j, m).mask;
  return out;
}

int BasisBlade::grade() const { return std::popcount(mask); }

BladeProduct blade_product(const BasisBlade& s, const BasisBlade& t) {
  require_same_m(s.m, t.m, "blade_product");
  return {product_sign(s.mask, t.mask), BasisBlade{s.mask ^ t.mask, s.m}};
}

// ---------------------------------------------------------------------------

CliffordElement::CliffordElement(int m) : m_(m) { require_valid_m(m); }

double CliffordElement::coefficient(const BasisBlade& blade) const {
  require_same_m(m_, blade.m, "CliffordElement::coefficient");
  auto it = coeffs_.find(blade.mask);
  return it == coeffs_.end() ? 0.0 : it->second;
}

void CliffordElement::set(const BasisBlade& blade, double value) {
  require_same_m(m_, blade.m, "CliffordElement::set");
  if (value == 0.0) {
    coeffs_.erase(blade.mask);
  } else {
    coeffs_[blade.mask] = value;
  }
}

CliffordElement CliffordElement::operator*(const CliffordElement& rhs) const {
  require_same_m(m_, rhs.m_, "CliffordElement::operator*");
  std::map<std::uint32_t, double> acc;
  for (const auto& [s, a] : coeffs_) {
    for (const auto& [t, b] : rhs.coeffs_) {
      acc[s ^ t] += product_sign(s, t) * a * b;
    }
  }
  CliffordElement out(m_);
  for (const auto& [mask, v] : acc) out.set({mask, m_}, v);
  return out;
}

double element_inner_product(const CliffordElement& a, const CliffordElement& b) {
  require_same_m(a.m(), b.m(), "element_inner_product");
  double sum = 0.0;
  for (const auto& [mask, v] : a.coefficients()) {
    auto it = b.coefficients().find(mask);
    if (it != b.coefficients().end()) sum += v * it->second;
  }
  return sum;
}

// ---------------------------------------------------------------------------

CliffordVector::CliffordVector(Eigen::Index n, int m) : n_(n), m_(m) {
  require_valid_m(m);
  if (n <= 0) throw Error(ErrorCode::InvalidArgument, "CliffordVector: n must be positive");
}

ComplexVector CliffordVector::component(const BasisBlade& blade) const {
  require_same_m(m_, blade.m, "CliffordVector::component");
  auto it = components_.find(blade.mask);
  return it == components_.end() ? ComplexVector::Zero(n_) : it->second;
}

void CliffordVector::set(const BasisBlade& blade, const ComplexVector& x) {
  require_same_m(m_, blade.m, "CliffordVector::set");
  if (x.size() != n_) {
    throw Error(ErrorCode::DimensionMismatch, "CliffordVector::set: component has wrong length");
  }
  if (x.isZero(0.0)) {
    components_.erase(blade.mask);
  } else {
    components_[blade.mask] = x;
  }
}

void CliffordVector::accumulate(std::uint32_t mask, const ComplexVector& x) {
  auto [it, inserted] = components_.try_emplace(mask, x);
  if (!inserted) it->second += x;
}

double CliffordVector::norm() const {
  double sq = 0.0;
  for (const auto& [mask, x] : components_) sq += x.squaredNorm();
  return std::sqrt(sq);
}

ComplexVector CliffordVector::flatten() const {
  ComplexVector flat = ComplexVector::Zero(n_ * blade_count(m_));
  for (const auto& [mask, x] : components_) flat.segment(mask * n_, n_) = x;
  return flat;
}

CliffordVector CliffordVector::unflatten(const ComplexVector& flat, Eigen::Index n, int m) {
  CliffordVector out(n, m);
  if (flat.size() != n * static_cast<Eigen::Index>(blade_count(m))) {
    throw Error(ErrorCode::DimensionMismatch, "unflatten: length is not 2^m * n");
  }
  for (std::uint32_t mask = 0; mask < blade_count(m); ++mask) {
    out.set({mask, m}, flat.segment(mask * n, n));
  }
  return out;
}

// ---------------------------------------------------------------------------

CliffordOperator::CliffordOperator(Eigen::Index n, int m) : n_(n), m_(m) {
  require_valid_m(m);
  if (n <= 0) throw Error(ErrorCode::InvalidArgument, "CliffordOperator: n must be positive");
}

ComplexMatrix CliffordOperator::block(const BasisBlade& blade) const {
  require_same_m(m_, blade.m, "CliffordOperator::block");
  auto it = blocks_.find(blade.mask);
  return it == blocks_.end() ? ComplexMatrix::Zero(n_, n_) : it->second;
}

void CliffordOperator::set(const BasisBlade& blade, const ComplexMatrix& a) {
  require_same_m(m_, blade.m, "CliffordOperator::set");
  if (a.rows() != n_ || a.cols() != n_) {
    throw Error(ErrorCode::DimensionMismatch, "CliffordOperator::set: block is not n x n");
  }
  if (a.isZero(0.0)) {
    blocks_.erase(blade.mask);
  } else {
    blocks_[blade.mask] = a;
  }
}

void CliffordOperator::accumulate(std::uint32_t mask, const ComplexMatrix& a) {
  auto [it, inserted] = blocks_.try_emplace(mask, a);
  if (!inserted) it->second += a;
}

CliffordOperator CliffordOperator::adjoint() const {
  CliffordOperator out(n_, m_);
  for (const auto& [mask, a] : blocks_) {
    out.blocks_[mask] = static_cast<double>(reversion_sign(mask)) * a.adjoint();
  }
  return out;
}

CliffordOperator CliffordOperator::operator*(const CliffordOperator& rhs) const {
  require_same_m(m_, rhs.m_, "CliffordOperator::operator*");
  if (n_ != rhs.n_) {
    throw Error(ErrorCode::DimensionMismatch, "CliffordOperator::operator*: n differs");
  }
  CliffordOperator out(n_, m_);
  for (const auto& [s, a] : blocks_) {
    for (const auto& [t, b] : rhs.blocks_) {
      out.accumulate(s ^ t, static_cast<double>(product_sign(s, t)) * (a * b));
    }
  }
  return out;
}

CliffordOperator CliffordOperator::identity(Eigen::Index n, int m) {
  CliffordOperator out(n, m);
  out.set(BasisBlade::scalar(m), ComplexMatrix::Identity(n, n));
  return out;
}

CliffordVector operator_apply(const CliffordOperator& a, const CliffordVector& x) {
  require_same_m(a.m(), x.m(), "operator_apply");
  if (a.n() != x.n()) {
    throw Error(ErrorCode::DimensionMismatch, "operator_apply: operator and vector differ in n");
  }
  CliffordVector out(x.n(), x.m());
  for (const auto& [s, block] : a.blocks()) {
    for (const auto& [t, xt] : x.components()) {
      out.accumulate(s ^ t, static_cast<double>(product_sign(s, t)) * (block * xt));
    }
  }
  return out;
}

CliffordOperator cliff(const MatrixTuple& tuple) {
  const int m = static_cast<int>(tuple.m());
  CliffordOperator out(tuple.n(), m);
  const Complex i_unit(0.0, 1.0);
  for (int j = 1; j <= m; ++j) {
    out.set(BasisBlade::generator(j, m), i_unit * tuple[j - 1]);
  }
  return out;
}

ComplexMatrix materialize(const CliffordOperator& a, std::size_t limit) {
  const Eigen::Index n = a.n();
  const std::uint32_t blades = blade_count(a.m());
  const std::size_t dim = static_cast<std::size_t>(n) * blades;
  if (dim > limit) {
    throw Error(ErrorCode::CapacityExceeded,
                "materialize: dimension 2^m*n = " + std::to_string(dim) +
                    " exceeds limit " + std::to_string(limit));
  }
  ComplexMatrix out = ComplexMatrix::Zero(static_cast<Eigen::Index>(dim),
                                          static_cast<Eigen::Index>(dim));
  // Column block T maps to row block S xor T.
  for (const auto& [s, block] : a.blocks()) {
    for (std::uint32_t t = 0; t < blades; ++t) {
      const std::uint32_t r = s ^ t;
      out.block(r * n, t * n, n, n) += static_cast<double>(product_sign(s, t)) * block;
    }
  }
  return out;
}

double clifford_frobenius_norm(const CliffordOperator& a) {
  double sq = 0.0;
  for (const auto& [mask, block] : a.blocks()) sq += block.squaredNorm();
  return std::sqrt(std::ldexp(sq, a.m()));
}

double materialized_frobenius_norm(const CliffordOperator& a, std::size_t limit) {
  return materialize(a, limit).norm();
}

Complex clifford_trace(const CliffordOperator& a) {
  auto it = a.blocks().find(0);
  if (it == a.blocks().end()) return Complex(0.0, 0.0);
  return std::ldexp(1.0, a.m()) * it->second.trace();
}

}  // namespace jspec
