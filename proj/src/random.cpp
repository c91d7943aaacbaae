#include "jspec/random.hpp"

#include <cmath>
#include <numbers>

namespace jspec {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

Rng::Rng(std::uint64_t seed, Stream stream)
    : engine_(splitmix64(seed ^ splitmix64(static_cast<std::uint64_t>(stream)))) {}

double Rng::uniform01() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

double Rng::normal() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  double u1 = uniform01();
  while (u1 <= 0.0) u1 = uniform01();
  const double u2 = uniform01();
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double theta = 2.0 * std::numbers::pi * u2;
  spare_ = r * std::sin(theta);
  has_spare_ = true;
  return r * std::cos(theta);
}

Complex Rng::complex_normal() {
  const double re = normal();
  const double im = normal();
  return Complex(re, im) * std::numbers::sqrt2 * 0.5;
}

std::size_t Rng::index(std::size_t bound) {
  return static_cast<std::size_t>(uniform01() * static_cast<double>(bound)) % bound;
}

ComplexMatrix Rng::gaussian_matrix(Eigen::Index rows, Eigen::Index cols) {
  ComplexMatrix g(rows, cols);
  // Row-major fill keeps the draw order independent of storage layout.
  for (Eigen::Index i = 0; i < rows; ++i) {
    for (Eigen::Index j = 0; j < cols; ++j) g(i, j) = complex_normal();
  }
  return g;
}

ComplexMatrix Rng::haar_unitary(Eigen::Index n) {
  const ComplexMatrix g = gaussian_matrix(n, n);
  Eigen::HouseholderQR<ComplexMatrix> qr(g);
  ComplexMatrix q = qr.householderQ();
  const ComplexMatrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (Eigen::Index j = 0; j < n; ++j) {
    const double mag = std::abs(r(j, j));
    if (mag > 0.0) q.col(j) *= r(j, j) / mag;
  }
  return q;
}

}  // namespace jspec
