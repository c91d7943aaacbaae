#include "jspec/bounds.hpp"

#include <cmath>
#include <string>

namespace jspec {

std::string_view to_string(BoundKind kind) {
  switch (kind) {
    case BoundKind::normal: return "normal";
    case BoundKind::remark: return "remark";
    case BoundKind::diagonalizable: return "diag";
  }
  return "unknown";
}

BoundKind parse_bound_kind(std::string_view text) {
  if (text == "normal") return BoundKind::normal;
  if (text == "remark") return BoundKind::remark;
  if (text == "diag" || text == "diagonalizable") return BoundKind::diagonalizable;
  throw Error(ErrorCode::InvalidArgument, "unknown bound kind '" + std::string(text) + "'");
}

RealMatrix relative_cost_matrix(const ComplexMatrix& alpha, const ComplexMatrix& beta) {
  if (alpha.rows() != beta.rows() || alpha.cols() != beta.cols()) {
    throw Error(ErrorCode::DimensionMismatch, "relative_cost_matrix: alpha and beta differ in shape");
  }
  const Eigen::Index n = alpha.rows();
  const Eigen::Index m = alpha.cols();
  for (Eigen::Index k = 0; k < m; ++k) {
    const double scale = alpha.col(k).cwiseAbs().maxCoeff();
    for (Eigen::Index j = 0; j < n; ++j) {
      const double mag = std::abs(alpha(j, k));
      if (!(mag > kSingularityThreshold * scale) || mag == 0.0) {
        throw Error(ErrorCode::ZeroEigenvalue,
                    "zero eigenvalue alpha_" + std::to_string(j + 1) + "^(" +
                        std::to_string(k + 1) + ") of the unperturbed tuple");
      }
    }
  }
  RealMatrix cost = RealMatrix::Zero(n, n);
  for (Eigen::Index j = 0; j < n; ++j) {
    for (Eigen::Index l = 0; l < n; ++l) {
      double sum = 0.0;
      for (Eigen::Index k = 0; k < m; ++k) {
        sum += std::norm((alpha(j, k) - beta(l, k)) / alpha(j, k));
      }
      cost(j, l) = sum;
    }
  }
  return cost;
}

namespace {

void require_same_shape(const MatrixTuple& a, const MatrixTuple& b) {
  if (a.n() != b.n() || a.m() != b.m()) {
    throw Error(ErrorCode::DimensionMismatch, "bound: tuples A and B differ in shape");
  }
}

}  // namespace

double normal_bound_rhs(const MatrixTuple& a, const MatrixTuple& b) {
  require_same_shape(a, b);
  double sum = 0.0;
  for (std::size_t k = 0; k < a.m(); ++k) {
    sum += checked_solve(a[k], b[k] - a[k]).squaredNorm();
  }
  return sum;
}

double remark_bound_rhs(const MatrixTuple& a, const MatrixTuple& b) {
  require_same_shape(a, b);
  double sum = 0.0;
  for (std::size_t k = 0; k < a.m(); ++k) {
    const RealVector sv = singular_values(a[k]);
    const double smin = sv(sv.size() - 1);
    if (!(smin > kSingularityThreshold * sv(0))) {
      throw Error(ErrorCode::SingularMatrix,
                  "A^(" + std::to_string(k + 1) + ") is singular");
    }
    const double inv_norm = 1.0 / smin;
    sum += inv_norm * inv_norm * (b[k] - a[k]).squaredNorm();
  }
  return static_cast<double>(a.n()) * sum;
}

double diag_bound_rhs(const MatrixTuple& a, const MatrixTuple& b, const ComplexMatrix& p,
                      const ComplexMatrix& q) {
  const double kp = condition_number(p);
  const double kq = condition_number(q);
  return kp * kp * kq * kq * normal_bound_rhs(a, b);
}

double BoundReport::sqrt_lhs() const { return std::sqrt(lhs); }
double BoundReport::sqrt_rhs() const { return std::sqrt(rhs); }

namespace {

void enforce(const HypothesisReport& r, const char* which) {
  if (r.ok()) return;
  ErrorCode code = ErrorCode::NotCommuting;
  if (r.commuting) {
    code = (r.require_normal && !r.normal) ? ErrorCode::NotNormal : ErrorCode::SingularMatrix;
  }
  throw Error(code, std::string(which) + ": " + r.failure_message());
}

// Rows of beta reordered canonically.
ComplexMatrix canonical_rows(const ComplexMatrix& values) {
  const auto order = canonical_order(values);
  ComplexMatrix out(values.rows(), values.cols());
  for (std::size_t i = 0; i < order.size(); ++i) out.row(i) = values.row(order[i]);
  return out;
}

}  // namespace

BoundReport verify_bound(const MatrixTuple& a, const MatrixTuple& b, BoundKind kind,
                         std::uint64_t seed, const VerifyOptions& opts) {
  require_same_shape(a, b);
  const Tolerances& tol = opts.tolerances;

  BoundReport r;
  r.kind = kind;
  r.seed = seed;
  r.tolerances_used = tol;
  r.verification_tolerance = opts.verification_tolerance;

  const bool normal_a = kind != BoundKind::diagonalizable;
  const bool normal_b = kind == BoundKind::normal;
  r.hypotheses_a = check_hypotheses(a, normal_a, true, tol);
  r.hypotheses_b = check_hypotheses(b, normal_b, false, tol);
  enforce(r.hypotheses_a, "tuple A");
  enforce(r.hypotheses_b, "tuple B");

  Rng rng_a(seed, Stream::simultaneous_diagonalize);
  switch (kind) {
    case BoundKind::normal: {
      Rng rng_b(seed, Stream::simultaneous_diagonalize);
      const JointSpectrum sa = simultaneous_diagonalize(a, rng_a, tol);
      const JointSpectrum sb = simultaneous_diagonalize(b, rng_b, tol);
      r.alpha = sa.eigenvalues;
      r.beta = sb.eigenvalues;
      r.residual_a = sa.residual;
      r.residual_b = sb.residual;
      r.relative_perturbation = normal_bound_rhs(a, b);
      r.rhs = r.relative_perturbation;
      r.overlap = overlap_matrix(sa, sb);
      break;
    }
    case BoundKind::remark: {
      Rng rng_b(seed, Stream::triangularize);
      const JointSpectrum sa = simultaneous_diagonalize(a, rng_a, tol);
      const TriangularForm tb = common_triangularize(b, rng_b, tol);
      r.alpha = sa.eigenvalues;
      r.beta = canonical_rows(tb.eigenvalues);
      r.residual_a = sa.residual;
      r.residual_b = tb.residual;
      r.relative_perturbation = normal_bound_rhs(a, b);
      r.rhs = remark_bound_rhs(a, b);
      break;
    }
    case BoundKind::diagonalizable: {
      Rng rng_ga(seed, Stream::diagonalize_general);
      Rng rng_gb(seed ^ 0x5bd1e995ULL, Stream::diagonalize_general);
      const JointSpectrum sa = diagonalize_general(a, rng_ga, tol);
      const JointSpectrum sb = diagonalize_general(b, rng_gb, tol);
      r.alpha = sa.eigenvalues;
      r.beta = sb.eigenvalues;
      r.residual_a = sa.residual;
      r.residual_b = sb.residual;
      // P A P^{-1} = diag with P = transform^{-1}; kappa(P) = kappa(transform).
      const ComplexMatrix p = checked_inverse(sa.transform);
      const ComplexMatrix q = checked_inverse(sb.transform);
      r.kappa_p = condition_number(p);
      r.kappa_q = condition_number(q);
      r.relative_perturbation = normal_bound_rhs(a, b);
      r.rhs = diag_bound_rhs(a, b, p, q);
      // P Q^{-1} = U Sigma V^*; eigenbases of M = U^* D1 U and N = V^* D2 V
      // are the columns of U^* and V^*.
      Eigen::JacobiSVD<ComplexMatrix> svd(p * sb.transform,
                                          Eigen::ComputeFullU | Eigen::ComputeFullV);
      r.overlap = overlap_from_unitaries(svd.matrixU().adjoint(), svd.matrixV().adjoint());
      break;
    }
  }

  const RealMatrix cost = relative_cost_matrix(r.alpha, r.beta);
  const Assignment best = optimal_matching(cost);
  r.permutation = best.permutation;
  r.lhs = best.total_cost;
  r.slack = r.rhs - r.lhs;
  r.tolerance = opts.verification_tolerance * (1.0 + r.rhs);
  r.holds = r.lhs <= r.rhs + r.tolerance;
  if (r.overlap) r.birkhoff = birkhoff_decompose(*r.overlap);
  return r;
}

LemmaCheck lemma_sigma_check(const ComplexMatrix& m, const ComplexMatrix& n,
                             const RealVector& sigma, const Tolerances& tol) {
  require_square(m, "lemma_sigma_check");
  require_square(n, "lemma_sigma_check");
  const Eigen::Index size = m.rows();
  if (n.rows() != size || sigma.size() != size) {
    throw Error(ErrorCode::DimensionMismatch, "lemma_sigma_check: M, N, Sigma differ in size");
  }
  for (const ComplexMatrix* x : {&m, &n}) {
    if (normality_defect(*x) > tol.normality * x->squaredNorm()) {
      throw Error(ErrorCode::NotNormal, "lemma_sigma_check: M and N must be normal");
    }
  }
  for (Eigen::Index i = 0; i < size; ++i) {
    if (sigma(i) < 0.0 || (i > 0 && sigma(i) > sigma(i - 1))) {
      throw Error(ErrorCode::NotOrdered,
                  "lemma_sigma_check: sigma must be non-negative and non-increasing");
    }
  }
  const ComplexMatrix s = sigma.cast<Complex>().asDiagonal();
  const ComplexMatrix eye = ComplexMatrix::Identity(size, size);
  LemmaCheck out;
  out.lhs = (m * s * n - s).norm();
  out.rhs = sigma(size - 1) * (m * n - eye).norm();
  out.holds = out.lhs >= out.rhs - 1e-10;
  return out;
}

}  // namespace jspec
