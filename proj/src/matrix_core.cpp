#include "jspec/matrix_core.hpp"

#include <cmath>
#include <string>

namespace jspec {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::SingularMatrix: return "SingularMatrix";
    case ErrorCode::GeneratorCountMismatch: return "GeneratorCountMismatch";
    case ErrorCode::CapacityExceeded: return "CapacityExceeded";
    case ErrorCode::NotCommuting: return "NotCommuting";
    case ErrorCode::NotNormal: return "NotNormal";
    case ErrorCode::NotDiagonalizable: return "NotDiagonalizable";
    case ErrorCode::DiagonalizationFailed: return "DiagonalizationFailed";
    case ErrorCode::KindMismatch: return "KindMismatch";
    case ErrorCode::NotDoublyStochastic: return "NotDoublyStochastic";
    case ErrorCode::MatchingNotFound: return "MatchingNotFound";
    case ErrorCode::ZeroEigenvalue: return "ZeroEigenvalue";
    case ErrorCode::NotOrdered: return "NotOrdered";
    case ErrorCode::Io: return "Io";
    case ErrorCode::Parse: return "Parse";
  }
  return "Unknown";
}

void require_square(const ComplexMatrix& m, const char* what) {
  if (m.rows() != m.cols() || m.rows() == 0) {
    throw Error(ErrorCode::DimensionMismatch,
                std::string(what) + ": expected a non-empty square matrix, got " +
                    std::to_string(m.rows()) + "x" + std::to_string(m.cols()));
  }
}

bool is_finite(const ComplexMatrix& m) {
  for (Eigen::Index j = 0; j < m.cols(); ++j) {
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
      if (!std::isfinite(m(i, j).real()) || !std::isfinite(m(i, j).imag())) return false;
    }
  }
  return true;
}

RealVector singular_values(const ComplexMatrix& m) {
  if (m.size() == 0) return RealVector();
  Eigen::JacobiSVD<ComplexMatrix> svd(m);
  return svd.singularValues();
}

FactorizationResult factorize(const ComplexMatrix& m, FactorizationKind kind) {
  FactorizationResult out;
  out.kind = kind;
  switch (kind) {
    case FactorizationKind::svd: {
      Eigen::JacobiSVD<ComplexMatrix> svd(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
      out.left_factor = svd.matrixU();
      out.core = ComplexMatrix::Zero(m.rows(), m.cols());
      for (Eigen::Index i = 0; i < svd.singularValues().size(); ++i) {
        out.core(i, i) = svd.singularValues()(i);
      }
      out.right_factor = svd.matrixV().adjoint();
      break;
    }
    case FactorizationKind::schur: {
      require_square(m, "schur");
      Eigen::ComplexSchur<ComplexMatrix> schur(m);
      if (schur.info() != Eigen::Success) {
        throw Error(ErrorCode::DiagonalizationFailed, "Schur iteration did not converge");
      }
      out.left_factor = schur.matrixU();
      out.core = schur.matrixT();
      out.right_factor = schur.matrixU().adjoint();
      break;
    }
    case FactorizationKind::eigen: {
      require_square(m, "eigen");
      Eigen::ComplexEigenSolver<ComplexMatrix> es(m);
      if (es.info() != Eigen::Success) {
        throw Error(ErrorCode::DiagonalizationFailed, "eigenvalue iteration did not converge");
      }
      out.left_factor = es.eigenvectors();
      out.core = es.eigenvalues().asDiagonal();
      out.right_factor = checked_inverse(out.left_factor);
      break;
    }
  }
  out.backward_error = (out.left_factor * out.core * out.right_factor - m).norm();
  return out;
}

double frobenius_norm(const ComplexMatrix& m) { return m.norm(); }

double operator_norm(const ComplexMatrix& m) {
  if (m.size() == 0) return 0.0;
  return singular_values(m)(0);
}

namespace {

void check_nonsingular(const RealVector& sv) {
  const double smax = sv(0);
  const double smin = sv(sv.size() - 1);
  if (!(smin > kSingularityThreshold * smax)) {
    throw Error(ErrorCode::SingularMatrix,
                "matrix is singular (sigma_min=" + std::to_string(smin) +
                    ", sigma_max=" + std::to_string(smax) + ")");
  }
}

}  // namespace

double condition_number(const ComplexMatrix& m) {
  require_square(m, "condition_number");
  const RealVector sv = singular_values(m);
  check_nonsingular(sv);
  return sv(0) / sv(sv.size() - 1);
}

ComplexMatrix checked_inverse(const ComplexMatrix& m) {
  require_square(m, "inverse");
  check_nonsingular(singular_values(m));
  return m.partialPivLu().inverse();
}

ComplexMatrix checked_solve(const ComplexMatrix& m, const ComplexMatrix& rhs) {
  require_square(m, "solve");
  if (rhs.rows() != m.rows()) {
    throw Error(ErrorCode::DimensionMismatch, "solve: right-hand side has wrong row count");
  }
  check_nonsingular(singular_values(m));
  return m.partialPivLu().solve(rhs);
}

double commutator_norm(const ComplexMatrix& a, const ComplexMatrix& b) {
  require_square(a, "commutator_norm");
  require_square(b, "commutator_norm");
  if (a.rows() != b.rows()) {
    throw Error(ErrorCode::DimensionMismatch, "commutator_norm: matrices differ in size");
  }
  return (a * b - b * a).norm();
}

double normality_defect(const ComplexMatrix& m) {
  require_square(m, "normality_defect");
  return (m * m.adjoint() - m.adjoint() * m).norm();
}

double unitarity_defect(const ComplexMatrix& u) {
  return (u.adjoint() * u - ComplexMatrix::Identity(u.cols(), u.cols())).norm();
}

}  // namespace jspec
