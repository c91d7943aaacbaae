#pragma once

#include <cstdint>
#include <utility>

#include "jspec/joint_spectrum.hpp"

namespace jspec {

struct GeneratorConfig {
  Eigen::Index n = 2;
  std::size_t m = 1;
  std::uint64_t seed = 0;
  // Eigenvalues are uniform in [-box, box]^2 with |z| >= min_modulus.
  double eigenvalue_min_modulus = 0.1;
  double eigenvalue_box = 2.0;
  double perturbation_scale = 0.0;
  // Upper bound on kappa(S) for diagonalizable tuples.
  double max_condition = 1e3;

  // Throws InvalidArgument on n < 1, m < 1, min_modulus >= box, etc.
  void validate() const;
};

// A tuple built as A^(k) = basis * diag(eigenvalues.col(k)) * basis^{-1}.
struct GeneratedTuple {
  MatrixTuple tuple;
  ComplexMatrix basis;
  ComplexMatrix eigenvalues;  // n x m
  bool unitary_basis = true;
};

GeneratedTuple random_commuting_normal_tuple(const GeneratorConfig& cfg);

// kappa(basis) <= cfg.max_condition by construction: the singular values of
// the basis are drawn log-uniformly in [1, max_condition].
GeneratedTuple random_commuting_diagonalizable_tuple(const GeneratorConfig& cfg);

enum class PerturbClass { normal, arbitrary_commuting, diagonalizable };

// B near A in the requested class, with ||B^(k) - A^(k)||_F = O(scale):
//   normal               rotate the unitary eigenbasis by exp(scale K), ||K||_F = 1,
//                        K skew-Hermitian, and shift eigenvalues by <= scale;
//   arbitrary_commuting  conjugate polynomials in one upper-triangular T with
//                        strictly upper part of size scale to the rotated basis;
//   diagonalizable       perturb the basis by scale * ||S||_F relative noise and
//                        shift eigenvalues by <= scale.
// The normal class requires a unitary basis.
MatrixTuple perturb_within_class(const GeneratedTuple& a, const GeneratorConfig& cfg,
                                 PerturbClass cls);

// Ones on the superdiagonal and at (n, 1).
ComplexMatrix cyclic_shift(Eigen::Index n);
// Ones on the superdiagonal only.
ComplexMatrix nilpotent_shift(Eigen::Index n);

// A^(k) = k C_n, B^(k) = k N_n for k = 1..m. Requires n >= 2.
std::pair<MatrixTuple, MatrixTuple> extremal_shift_example(Eigen::Index n, std::size_t m);

}  // namespace jspec
