#include <doctest.h>

#include <cmath>

#include "jspec/matrix_core.hpp"
#include "jspec/random.hpp"

using namespace jspec;

namespace {

ComplexMatrix real2(double a, double b, double c, double d) {
  ComplexMatrix m(2, 2);
  m << a, b, c, d;
  return m;
}

ComplexMatrix diag2(double a, double b) { return real2(a, 0, 0, b); }

// sum |m_ij|^2 by explicit loops
double oracle_frobenius(const ComplexMatrix& m) {
  double s = 0;
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j) s += std::norm(m(i, j));
  return std::sqrt(s);
}

}  // namespace

TEST_CASE("frobenius norm examples") {
  CHECK(frobenius_norm(ComplexMatrix::Zero(2, 2)) == 0.0);
  CHECK(frobenius_norm(ComplexMatrix::Identity(2, 2)) == doctest::Approx(std::sqrt(2.0)));
  CHECK(frobenius_norm(diag2(3, 4)) == doctest::Approx(5.0));
}

TEST_CASE("frobenius norm matches explicit sum") {
  Rng rng(3, Stream::test_data);
  for (int t = 0; t < 20; ++t) {
    const ComplexMatrix m = rng.gaussian_matrix(1 + t % 5, 1 + t % 3);
    CHECK(frobenius_norm(m) == doctest::Approx(oracle_frobenius(m)).epsilon(1e-14));
  }
}

TEST_CASE("operator norm examples") {
  CHECK(operator_norm(ComplexMatrix::Identity(3, 3)) == doctest::Approx(1.0));
  CHECK(operator_norm(diag2(2, 1)) == doctest::Approx(2.0));
  CHECK(operator_norm(real2(0, 1, 0, 0)) == doctest::Approx(1.0));
}

TEST_CASE("operator norm sits between frobenius / sqrt(n) and frobenius") {
  Rng rng(4, Stream::test_data);
  for (int n = 1; n <= 6; ++n) {
    const ComplexMatrix m = rng.gaussian_matrix(n, n);
    const double op = operator_norm(m);
    const double fro = frobenius_norm(m);
    CHECK(op <= fro * (1 + 1e-14));
    CHECK(op >= fro / std::sqrt(double(n)) * (1 - 1e-14));
  }
}

TEST_CASE("condition number") {
  CHECK(condition_number(ComplexMatrix::Identity(4, 4)) == doctest::Approx(1.0));
  CHECK(condition_number(diag2(4, 1)) == doctest::Approx(4.0));
  try {
    condition_number(diag2(1, 0));
    FAIL("expected SingularMatrix");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::SingularMatrix);
    CHECK(e.is_hypothesis_failure());
  }
}

TEST_CASE("checked inverse and solve") {
  const ComplexMatrix a = real2(2, 1, 1, 3);
  const ComplexMatrix inv = checked_inverse(a);
  CHECK((a * inv - ComplexMatrix::Identity(2, 2)).norm() < 1e-14);
  const ComplexMatrix rhs = real2(1, 0, 2, 1);
  CHECK((a * checked_solve(a, rhs) - rhs).norm() < 1e-14);
  CHECK_THROWS_AS(checked_inverse(diag2(1, 1e-14)), Error);
  CHECK_THROWS_AS(checked_inverse(ComplexMatrix::Zero(2, 3)), Error);
}

TEST_CASE("commutator norm") {
  Rng rng(5, Stream::test_data);
  const ComplexMatrix m = rng.gaussian_matrix(2, 2);
  CHECK(commutator_norm(ComplexMatrix::Identity(2, 2), m) == doctest::Approx(0.0));
  CHECK(commutator_norm(diag2(1, 2), diag2(3, 4)) == 0.0);
  CHECK(commutator_norm(real2(0, 1, 0, 0), real2(0, 0, 1, 0)) ==
        doctest::Approx(std::sqrt(2.0)));
  try {
    commutator_norm(ComplexMatrix::Identity(2, 2), ComplexMatrix::Identity(3, 3));
    FAIL("expected DimensionMismatch");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::DimensionMismatch);
  }
}

TEST_CASE("normality defect") {
  ComplexMatrix c = ComplexMatrix::Zero(3, 3);
  c(0, 1) = c(1, 2) = c(2, 0) = 1;
  CHECK(normality_defect(c) == doctest::Approx(0.0));
  const ComplexMatrix h = real2(1, 2, 2, -3);
  CHECK(normality_defect(h) == doctest::Approx(0.0));
  CHECK(normality_defect(real2(0, 1, 0, 0)) == doctest::Approx(std::sqrt(2.0)));
}

TEST_CASE("factorizations reconstruct and have unitary factors") {
  Rng rng(6, Stream::test_data);
  for (int n = 1; n <= 7; ++n) {
    const ComplexMatrix m = rng.gaussian_matrix(n, n);
    const double scale = frobenius_norm(m);
    for (auto kind : {FactorizationKind::eigen, FactorizationKind::schur, FactorizationKind::svd}) {
      const FactorizationResult f = factorize(m, kind);
      CHECK(f.kind == kind);
      const double resid = frobenius_norm(f.left_factor * f.core * f.right_factor - m);
      CHECK(resid <= f.backward_error + 1e-15);
      CHECK(f.backward_error <= 1e-10 * scale);
      if (kind != FactorizationKind::eigen) {
        CHECK(unitarity_defect(f.left_factor) < 1e-10);
        CHECK(unitarity_defect(f.right_factor) < 1e-10);
        // core is upper triangular
        for (Eigen::Index i = 0; i < n; ++i)
          for (Eigen::Index j = 0; j < i; ++j) CHECK(std::abs(f.core(i, j)) == 0.0);
      }
    }
  }
}

TEST_CASE("singular values are decreasing and match the svd core") {
  Rng rng(7, Stream::test_data);
  const ComplexMatrix m = rng.gaussian_matrix(5, 5);
  const RealVector s = singular_values(m);
  for (Eigen::Index i = 1; i < s.size(); ++i) CHECK(s(i) <= s(i - 1));
  CHECK(std::sqrt(s.squaredNorm()) == doctest::Approx(frobenius_norm(m)).epsilon(1e-13));
}

TEST_CASE("finiteness check") {
  ComplexMatrix m = ComplexMatrix::Identity(2, 2);
  CHECK(is_finite(m));
  m(1, 0) = Complex(std::nan(""), 0);
  CHECK_FALSE(is_finite(m));
}

TEST_CASE("error codes have names") {
  CHECK(to_string(ErrorCode::NotCommuting) == "NotCommuting");
  CHECK_FALSE(Error(ErrorCode::Io, "x").is_hypothesis_failure());
}
