#pragma once

#include <string>
#include <vector>

#include "jspec/matrix_core.hpp"
#include "jspec/random.hpp"

namespace jspec {

// An m-tuple of n x n complex matrices (A^(1), ..., A^(m)).
class MatrixTuple {
 public:
  MatrixTuple() = default;
  // Throws DimensionMismatch unless all matrices are square of one size n >= 1,
  // and InvalidArgument on non-finite entries or an empty tuple.
  explicit MatrixTuple(std::vector<ComplexMatrix> matrices);

  Eigen::Index n() const { return n_; }
  std::size_t m() const { return matrices_.size(); }

  const ComplexMatrix& operator[](std::size_t k) const { return matrices_[k]; }
  const std::vector<ComplexMatrix>& matrices() const { return matrices_; }

  // max_k ||A^(k)||_F
  double max_frobenius_norm() const;

  MatrixTuple operator+(const MatrixTuple& rhs) const;
  MatrixTuple operator-(const MatrixTuple& rhs) const;
  MatrixTuple scaled(Complex c) const;

 private:
  Eigen::Index n_ = 0;
  std::vector<ComplexMatrix> matrices_;
};

// Relative tolerances; every one is scale invariant.
struct Tolerances {
  // ||[A^(i), A^(j)]||_F <= commutation * max_k ||A^(k)||_F * max_l ||A^(l)||_F
  double commutation = 1e-8;
  // ||A A^* - A^* A||_F <= normality * ||A||_F^2
  double normality = 1e-8;
  // off-diagonal (or strictly lower) mass <= diagonalization * ||A^(k)||_F
  double diagonalization = 1e-7;
  // eigenvalues of the random combination closer than cluster * ||H||_F merge
  double cluster = 1e-8;
  double singularity = kSingularityThreshold;
  // eigenvector-matrix condition number above which a tuple is called defective
  double max_eigenvector_condition = 1e10;
  int max_retries = 20;
};

struct HypothesisReport {
  bool require_normal = false;
  bool require_nonsingular = false;

  double max_commutator_norm = 0.0;
  double commutation_threshold = 0.0;
  bool commuting = true;

  // max_k ||A A^* - A^* A||_F / ||A||_F^2 (0 for zero matrices)
  double max_relative_normality_defect = 0.0;
  bool normal = true;

  // min over k of sigma_min(A^(k)) and of sigma_min / sigma_max
  double min_singular_value = 0.0;
  double min_relative_singular_value = 0.0;
  bool nonsingular = true;

  bool ok() const;
  // "commutation check failed", ... or empty when ok().
  std::string failure_message() const;
};

// Diagnostic only; never throws. Commutation is always checked.
HypothesisReport check_hypotheses(const MatrixTuple& tuple, bool require_normal,
                                  bool require_nonsingular, const Tolerances& tol = {});

enum class TransformKind { unitary, general };

struct JointSpectrum {
  Eigen::Index n = 0;
  std::size_t m = 0;
  // Row j is the joint eigenvalue alpha_j = (alpha_j^(1), ..., alpha_j^(m)).
  ComplexMatrix eigenvalues;
  // Columns are joint eigenvectors: transform^{-1} A^(k) transform = diag(alpha^(k)).
  ComplexMatrix transform;
  TransformKind kind = TransformKind::unitary;
  // Rank-one projectors u_j u_j^*; unitary kind only.
  std::vector<ComplexMatrix> projectors;
  // max_k ||transform^{-1} A^(k) transform - diag(alpha^(k))||_F
  double residual = 0.0;
};

// Unitary joint diagonalization of a commuting normal tuple. Eigenvalue rows
// are in canonical order (lexicographic by coordinate, real part first).
// Throws NotCommuting, NotNormal, or DiagonalizationFailed.
JointSpectrum simultaneous_diagonalize(const MatrixTuple& tuple, Rng& rng,
                                       const Tolerances& tol = {});

// Joint diagonalization by a general invertible transform with unit-norm
// columns. Throws NotCommuting or NotDiagonalizable.
JointSpectrum diagonalize_general(const MatrixTuple& tuple, Rng& rng,
                                  const Tolerances& tol = {});

// Common Schur form of a commuting tuple: unitary^* B^(k) unitary is upper
// triangular for every k.
struct TriangularForm {
  // Row j holds the j-th diagonal entries; same order as the diagonal.
  ComplexMatrix eigenvalues;
  ComplexMatrix unitary;
  // max_k ||strictly lower part of unitary^* B^(k) unitary||_F
  double residual = 0.0;
};

// Throws NotCommuting or DiagonalizationFailed.
TriangularForm common_triangularize(const MatrixTuple& tuple, Rng& rng,
                                    const Tolerances& tol = {});

// Permutation that sorts the rows of an n x m eigenvalue matrix canonically.
// Coordinates are compared after quantizing to 1e-9 of the column's largest
// modulus so that rounding noise does not decide the order.
std::vector<Eigen::Index> canonical_order(const ComplexMatrix& eigenvalues);

}  // namespace jspec
