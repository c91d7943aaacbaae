#pragma once

#include "jspec/birkhoff.hpp"

namespace jspec {

struct Assignment {
  Permutation permutation;  // row j is assigned column permutation[j]
  double total_cost = 0.0;  // sum_j cost(j, permutation[j]), summed in row order
};

// Minimum-cost perfect assignment by successive shortest augmenting paths
// with row/column potentials (Jonker-Volgenant style), O(n^3).
// Throws InvalidArgument on non-square or non-finite input.
Assignment optimal_matching(const RealMatrix& cost);

// Exhaustive search over all n! permutations; n <= 10.
Assignment brute_force_matching(const RealMatrix& cost);

// sum_j cost(j, perm[j]) in row order.
double assignment_cost(const RealMatrix& cost, const Permutation& perm);

}  // namespace jspec
