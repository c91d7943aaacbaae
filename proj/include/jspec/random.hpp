#pragma once

#include <cstdint>
#include <random>

#include "jspec/matrix_core.hpp"

namespace jspec {

// Named sub-streams so that each consumer draws from its own sequence for a
// given user seed.
enum class Stream : std::uint64_t {
  simultaneous_diagonalize = 1,
  diagonalize_general = 2,
  triangularize = 3,
  normal_tuple = 10,
  diagonalizable_tuple = 11,
  perturbation = 12,
  test_data = 99,
};

// Portable generator: std::mt19937_64 (fully specified by the standard)
// seeded through splitmix64(seed, stream). Uniforms and normals are derived
// from raw 64-bit outputs by hand, because the std distributions are
// implementation-defined.
class Rng {
 public:
  Rng(std::uint64_t seed, Stream stream);

  std::uint64_t next_u64() { return engine_(); }
  // Uniform on [0, 1) with 53 random bits.
  double uniform01();
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }
  // Standard normal via Box-Muller.
  double normal();
  Complex complex_normal();  // E|z|^2 = 1
  std::size_t index(std::size_t bound);

  ComplexMatrix gaussian_matrix(Eigen::Index rows, Eigen::Index cols);
  // Haar-distributed unitary via QR of a complex Ginibre matrix with phase fix.
  ComplexMatrix haar_unitary(Eigen::Index n);

 private:
  std::mt19937_64 engine_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

std::uint64_t splitmix64(std::uint64_t x);

}  // namespace jspec
