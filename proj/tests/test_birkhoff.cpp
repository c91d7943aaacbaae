#include <doctest.h>

#include <cmath>

#include "jspec/birkhoff.hpp"
#include "jspec/generators.hpp"
#include "jspec/random.hpp"

using namespace jspec;

namespace {

OverlapMatrix om(RealMatrix w) { return OverlapMatrix{std::move(w)}; }

// Random doubly stochastic matrix as a convex combination of random permutations.
RealMatrix random_doubly_stochastic(Rng& rng, Eigen::Index n, int terms) {
  RealMatrix w = RealMatrix::Zero(n, n);
  double total = 0;
  std::vector<double> weights;
  for (int t = 0; t < terms; ++t) weights.push_back(rng.uniform(0.01, 1.0)), total += weights.back();
  for (int t = 0; t < terms; ++t) {
    Permutation p(n);
    for (Eigen::Index i = 0; i < n; ++i) p[i] = int(i);
    for (Eigen::Index i = n - 1; i > 0; --i) std::swap(p[i], p[rng.index(i + 1)]);
    w += weights[t] / total * permutation_matrix(p);
  }
  return w;
}

}  // namespace

TEST_CASE("overlap of identical spectra is the identity") {
  GeneratorConfig cfg;
  cfg.n = 4;
  cfg.m = 2;
  const MatrixTuple t = random_commuting_normal_tuple(cfg).tuple;
  Rng r1(0, Stream::simultaneous_diagonalize), r2(0, Stream::simultaneous_diagonalize);
  const auto w = overlap_matrix(simultaneous_diagonalize(t, r1), simultaneous_diagonalize(t, r2));
  CHECK((w.w - RealMatrix::Identity(4, 4)).norm() < 1e-12);
}

TEST_CASE("overlap of a 45 degree rotation") {
  ComplexMatrix v(2, 2);
  const double h = std::sqrt(0.5);
  v << h, -h, h, h;
  const auto w = overlap_from_unitaries(ComplexMatrix::Identity(2, 2), v);
  CHECK((w.w - RealMatrix::Constant(2, 2, 0.5)).norm() < 1e-15);
}

TEST_CASE("overlap of random unitaries is doubly stochastic") {
  Rng rng(20, Stream::test_data);
  for (Eigen::Index n = 1; n <= 8; ++n) {
    const auto w = overlap_from_unitaries(rng.haar_unitary(n), rng.haar_unitary(n));
    CHECK(w.stochastic_defect() < 1e-12);
    CHECK(w.w.minCoeff() >= 0.0);
  }
}

TEST_CASE("overlap requires unitary spectra") {
  JointSpectrum a, b;
  a.n = b.n = 2;
  a.transform = b.transform = ComplexMatrix::Identity(2, 2);
  b.kind = TransformKind::general;
  try {
    overlap_matrix(a, b);
    FAIL("expected KindMismatch");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::KindMismatch);
  }
}

TEST_CASE("birkhoff examples") {
  auto d = birkhoff_decompose(om(RealMatrix::Identity(3, 3)));
  REQUIRE(d.terms.size() == 1);
  CHECK(d.terms[0].weight == doctest::Approx(1.0));
  CHECK(d.terms[0].permutation == Permutation{0, 1, 2});

  d = birkhoff_decompose(om(RealMatrix::Constant(2, 2, 0.5)));
  REQUIRE(d.terms.size() == 2);
  CHECK(d.terms[0].weight == doctest::Approx(0.5));
  CHECK(d.terms[1].weight == doctest::Approx(0.5));
  CHECK(d.terms[0].permutation != d.terms[1].permutation);

  const Permutation pi{2, 0, 3, 1};
  d = birkhoff_decompose(om(permutation_matrix(pi)));
  REQUIRE(d.terms.size() == 1);
  CHECK(d.terms[0].permutation == pi);
}

TEST_CASE("birkhoff reconstructs with a bounded number of terms") {
  Rng rng(21, Stream::test_data);
  for (Eigen::Index n = 1; n <= 9; ++n) {
    for (int rep = 0; rep < 5; ++rep) {
      const RealMatrix w = rep % 2 ? random_doubly_stochastic(rng, n, 1 + rep * 3)
                                   : overlap_from_unitaries(rng.haar_unitary(n), rng.haar_unitary(n)).w;
      const auto d = birkhoff_decompose(om(w));
      CHECK((d.reconstruct(n) - w).cwiseAbs().maxCoeff() <= 1e-8);
      CHECK(d.terms.size() <= std::size_t((n - 1) * (n - 1) + 1));
      CHECK(d.total_weight() == doctest::Approx(1.0).epsilon(1e-8));
      for (const auto& t : d.terms) {
        CHECK(t.weight > 0);
        CHECK(is_permutation(t.permutation, std::size_t(n)));
      }
    }
  }
}

TEST_CASE("birkhoff rejects non doubly stochastic input") {
  RealMatrix w(2, 2);
  w << 0.7, 0.2, 0.3, 0.8;
  try {
    birkhoff_decompose(om(w));
    FAIL("expected NotDoublyStochastic");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::NotDoublyStochastic);
  }
  w << 1.5, -0.5, -0.5, 1.5;
  CHECK_THROWS_AS(birkhoff_decompose(om(w)), Error);
}

TEST_CASE("permutation helpers") {
  CHECK(is_permutation({1, 0, 2}, 3));
  CHECK_FALSE(is_permutation({1, 1, 2}, 3));
  CHECK_FALSE(is_permutation({0, 1}, 3));
  const RealMatrix p = permutation_matrix({1, 2, 0});
  CHECK(p(0, 1) == 1.0);
  CHECK(p(2, 0) == 1.0);
  CHECK(p.sum() == 3.0);
}
