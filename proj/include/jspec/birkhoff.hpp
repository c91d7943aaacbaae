#pragma once

#include <vector>

#include "jspec/joint_spectrum.hpp"

namespace jspec {

// 0-based permutation: perm[i] is the image of i.
using Permutation = std::vector<int>;

RealMatrix permutation_matrix(const Permutation& perm);
bool is_permutation(const Permutation& perm, std::size_t n);

// w_ij = trace(P_i Q_j) = |<u_i, v_j>|^2 for two orthonormal eigenbases.
struct OverlapMatrix {
  RealMatrix w;

  Eigen::Index n() const { return w.rows(); }
  // max over rows and columns of |sum - 1|
  double stochastic_defect() const;
};

// Throws KindMismatch unless both spectra are unitary kind, DimensionMismatch
// if they differ in n.
OverlapMatrix overlap_matrix(const JointSpectrum& p_spec, const JointSpectrum& q_spec);

// Same overlap computed from two unitary matrices, w_ij = |(U^* V)_ij|^2.
OverlapMatrix overlap_from_unitaries(const ComplexMatrix& u, const ComplexMatrix& v);

struct BirkhoffTerm {
  double weight = 0.0;
  Permutation permutation;
};

struct BirkhoffDecomposition {
  std::vector<BirkhoffTerm> terms;

  double total_weight() const;
  RealMatrix reconstruct(Eigen::Index n) const;
};

struct BirkhoffOptions {
  // Entries at or below this are absent from the matching graph.
  double positivity_cutoff = 1e-10;
  // Residue mass below this ends the extraction.
  double residue_cutoff = 1e-8;
  // Row/column sum tolerance accepted on input.
  double stochastic_tolerance = 1e-8;
};

// Greedy extraction: find a perfect matching on the positive entries of the
// residue, subtract its smallest entry along that matching, repeat.
// Throws NotDoublyStochastic or MatchingNotFound.
BirkhoffDecomposition birkhoff_decompose(const OverlapMatrix& w, const BirkhoffOptions& opts = {});

}  // namespace jspec
