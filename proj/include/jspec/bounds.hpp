#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "jspec/assignment.hpp"
#include "jspec/birkhoff.hpp"
#include "jspec/joint_spectrum.hpp"

namespace jspec {

// Which relative Hoffman-Wielandt type bound to certify:
//   normal:         sum_k ||A_k^{-1} E_k||_F^2                      (both tuples normal)
//   remark:         n sum_k ||A_k^{-1}||^2 ||E_k||_F^2              (B arbitrary commuting)
//   diagonalizable: kappa(P)^2 kappa(Q)^2 sum_k ||A_k^{-1} E_k||_F^2
enum class BoundKind { normal, remark, diagonalizable };

std::string_view to_string(BoundKind kind);
// Accepts "normal", "remark", "diag" / "diagonalizable".
BoundKind parse_bound_kind(std::string_view text);

// Entry (j, l) = sum_k |(alpha_j^(k) - beta_l^(k)) / alpha_j^(k)|^2.
// alpha, beta: n x m, row j is a joint eigenvalue. Throws ZeroEigenvalue
// (naming j and k, 1-based) when |alpha_j^(k)| is at or below
// kSingularityThreshold times the largest modulus in column k.
RealMatrix relative_cost_matrix(const ComplexMatrix& alpha, const ComplexMatrix& beta);

// sum_k ||A_k^{-1} (B_k - A_k)||_F^2; throws SingularMatrix.
double normal_bound_rhs(const MatrixTuple& a, const MatrixTuple& b);
// n sum_k ||A_k^{-1}||^2 ||B_k - A_k||_F^2 with the operator norm on the inverse.
double remark_bound_rhs(const MatrixTuple& a, const MatrixTuple& b);
// kappa(P)^2 kappa(Q)^2 normal_bound_rhs(a, b).
double diag_bound_rhs(const MatrixTuple& a, const MatrixTuple& b, const ComplexMatrix& p,
                      const ComplexMatrix& q);

struct VerifyOptions {
  Tolerances tolerances;
  // holds <=> lhs <= rhs + verification_tolerance * (1 + rhs)
  double verification_tolerance = 1e-8;
};

struct BoundReport {
  BoundKind kind = BoundKind::normal;
  std::uint64_t seed = 0;

  Permutation permutation;  // 0-based; minimizes the cost sum
  double lhs = 0.0;
  double rhs = 0.0;
  double slack = 0.0;        // rhs - lhs
  double tolerance = 0.0;    // absolute slack allowance used for the verdict
  bool holds = false;

  // sum_k ||A_k^{-1} E_k||_F^2, reported for every kind.
  double relative_perturbation = 0.0;
  // Diagonalizable kind: condition numbers of the transforms actually used.
  // They are not minimized over all diagonalizers.
  double kappa_p = 1.0;
  double kappa_q = 1.0;

  HypothesisReport hypotheses_a;
  HypothesisReport hypotheses_b;
  ComplexMatrix alpha;  // n x m joint eigenvalues of A, canonical order
  ComplexMatrix beta;   // n x m joint eigenvalues of B
  double residual_a = 0.0;
  double residual_b = 0.0;

  // Overlap matrix of the orthonormal eigenbases that enter the proof and its
  // Birkhoff decomposition: (P_i, Q_j) for the normal kind, the normal pair
  // (M, N) built from the SVD of P Q^{-1} for the diagonalizable kind.
  // Absent for the remark kind, where B has no eigenbasis.
  std::optional<OverlapMatrix> overlap;
  std::optional<BirkhoffDecomposition> birkhoff;

  Tolerances tolerances_used;
  double verification_tolerance = 0.0;

  double sqrt_lhs() const;
  double sqrt_rhs() const;
};

// Checks and enforces the hypotheses of `kind`, computes both joint spectra,
// the optimal matching and the right-hand side. Deterministic given seed.
// Hypothesis failures throw Error with is_hypothesis_failure() true and a
// message naming the failed check.
BoundReport verify_bound(const MatrixTuple& a, const MatrixTuple& b, BoundKind kind,
                         std::uint64_t seed, const VerifyOptions& opts = {});

struct LemmaCheck {
  double lhs = 0.0;  // ||M Sigma N - Sigma||_F
  double rhs = 0.0;  // sigma_n ||M N - I||_F
  bool holds = false;  // lhs >= rhs - 1e-10
};

// sigma: diagonal of Sigma, non-increasing and non-negative. Throws NotNormal
// when M or N fails the normality tolerance, NotOrdered when sigma is not
// sorted or has a negative entry.
LemmaCheck lemma_sigma_check(const ComplexMatrix& m, const ComplexMatrix& n,
                             const RealVector& sigma, const Tolerances& tol = {});

}  // namespace jspec
