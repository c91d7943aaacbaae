#pragma once

// Clifford algebra R_(m) with generators e_1..e_m, e_i e_j = -e_j e_i (i != j),
// e_i^2 = -1, and operators on C^n (x) R_(m).

#include <cstdint>
#include <map>
#include <vector>

#include "jspec/matrix_core.hpp"

namespace jspec {

class MatrixTuple;

inline constexpr int kMaxGenerators = 30;
inline constexpr std::size_t kDefaultMaterializeLimit = 4096;

// Basis blade e_S. Bit (j-1) of mask is set iff generator e_j is in S.
struct BasisBlade {
  std::uint32_t mask = 0;
  int m = 0;

  static BasisBlade scalar(int m) { return {0, m}; }
  // 1-based generator index, as in e_1..e_m.
  static BasisBlade generator(int j, int m);
  static BasisBlade from_indices(const std::vector<int>& generators, int m);

  int grade() const;
  bool is_scalar() const { return mask == 0; }

  friend bool operator==(const BasisBlade&, const BasisBlade&) = default;
};

struct BladeProduct {
  int sign;  // +1 or -1
  BasisBlade blade;
};

// e_S e_T = sign * e_{S xor T}
BladeProduct blade_product(const BasisBlade& s, const BasisBlade& t);

// Element of R_(m) with real coefficients. Zero coefficients are not stored.
class CliffordElement {
 public:
  explicit CliffordElement(int m);

  int m() const { return m_; }
  double coefficient(const BasisBlade& blade) const;
  void set(const BasisBlade& blade, double value);
  const std::map<std::uint32_t, double>& coefficients() const { return coeffs_; }

  CliffordElement operator*(const CliffordElement& rhs) const;

 private:
  int m_;
  std::map<std::uint32_t, double> coeffs_;
};

double element_inner_product(const CliffordElement& a, const CliffordElement& b);

// sum_S x_S (x) e_S with x_S in C^n.
class CliffordVector {
 public:
  CliffordVector(Eigen::Index n, int m);

  Eigen::Index n() const { return n_; }
  int m() const { return m_; }

  // Zero vector when the blade has no stored component.
  ComplexVector component(const BasisBlade& blade) const;
  void set(const BasisBlade& blade, const ComplexVector& x);
  void accumulate(std::uint32_t mask, const ComplexVector& x);
  const std::map<std::uint32_t, ComplexVector>& components() const { return components_; }

  double norm() const;
  // Coordinates in the basis {standard basis of C^n} (x) {e_S}, blade-major
  // in increasing mask order: index = mask * n + i.
  ComplexVector flatten() const;
  static CliffordVector unflatten(const ComplexVector& flat, Eigen::Index n, int m);

 private:
  Eigen::Index n_;
  int m_;
  std::map<std::uint32_t, ComplexVector> components_;
};

// sum_S A_S (x) e_S with A_S in M_n.
class CliffordOperator {
 public:
  CliffordOperator(Eigen::Index n, int m);

  Eigen::Index n() const { return n_; }
  int m() const { return m_; }

  ComplexMatrix block(const BasisBlade& blade) const;
  void set(const BasisBlade& blade, const ComplexMatrix& a);
  void accumulate(std::uint32_t mask, const ComplexMatrix& a);
  const std::map<std::uint32_t, ComplexMatrix>& blocks() const { return blocks_; }

  // Adjoint with respect to the tensor inner product: (A_S (x) e_S)^* = A_S^* (x) conj(e_S),
  // where conj(e_S) = (-1)^{|S|(|S|+1)/2} e_S.
  CliffordOperator adjoint() const;
  CliffordOperator operator*(const CliffordOperator& rhs) const;

  static CliffordOperator identity(Eigen::Index n, int m);

 private:
  Eigen::Index n_;
  int m_;
  std::map<std::uint32_t, ComplexMatrix> blocks_;
};

CliffordVector operator_apply(const CliffordOperator& a, const CliffordVector& x);

// i * sum_j A^(j) (x) e_j
CliffordOperator cliff(const MatrixTuple& tuple);

// Dense (2^m n) x (2^m n) matrix in the flatten() basis.
ComplexMatrix materialize(const CliffordOperator& a,
                          std::size_t limit = kDefaultMaterializeLimit);

// Frobenius norm from the block structure: every block appears 2^m times
// in the materialized matrix up to sign, so ||A||_F^2 = 2^m sum_S ||A_S||_F^2.
// Needs no materialization.
double clifford_frobenius_norm(const CliffordOperator& a);

// Frobenius norm of materialize(a); subject to the capacity limit.
double materialized_frobenius_norm(const CliffordOperator& a,
                                   std::size_t limit = kDefaultMaterializeLimit);

// 2^m trace(A_phi); blocks on non-empty blades are traceless.
Complex clifford_trace(const CliffordOperator& a);

}  // namespace jspec
