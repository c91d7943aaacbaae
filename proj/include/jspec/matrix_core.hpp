#pragma once

#include <complex>

#include <Eigen/Dense>

#include "jspec/errors.hpp"

namespace jspec {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using RealMatrix = Eigen::MatrixXd;
using RealVector = Eigen::VectorXd;

// sigma_min <= kSingularityThreshold * sigma_max counts as singular.
inline constexpr double kSingularityThreshold = 1e-12;

enum class FactorizationKind { eigen, schur, svd };

// input ~= left_factor * core * right_factor.
//   eigen: V * diag(lambda) * V^{-1}
//   schur: U * T * U^*
//   svd:   U * Sigma * V^*
struct FactorizationResult {
  FactorizationKind kind;
  ComplexMatrix left_factor;
  ComplexMatrix core;
  ComplexMatrix right_factor;
  double backward_error = 0.0;
};

FactorizationResult factorize(const ComplexMatrix& m, FactorizationKind kind);

// Singular values in decreasing order.
RealVector singular_values(const ComplexMatrix& m);

double frobenius_norm(const ComplexMatrix& m);
double operator_norm(const ComplexMatrix& m);
double condition_number(const ComplexMatrix& m);

// Throws SingularMatrix under the relative singularity threshold.
ComplexMatrix checked_inverse(const ComplexMatrix& m);

// Solves m * x = rhs after the same singularity check as checked_inverse.
ComplexMatrix checked_solve(const ComplexMatrix& m, const ComplexMatrix& rhs);

double commutator_norm(const ComplexMatrix& a, const ComplexMatrix& b);
double normality_defect(const ComplexMatrix& m);

// ||U^* U - I||_F
double unitarity_defect(const ComplexMatrix& u);

bool is_finite(const ComplexMatrix& m);

void require_square(const ComplexMatrix& m, const char* what);

}  // namespace jspec
