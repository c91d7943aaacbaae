#include "jspec/assignment.hpp"

#include <algorithm>
#include <limits>
#include <numeric>

namespace jspec {

namespace {

void require_valid_cost(const RealMatrix& cost) {
  if (cost.rows() != cost.cols()) {
    throw Error(ErrorCode::InvalidArgument, "assignment: cost matrix must be square");
  }
  if (!cost.allFinite()) {
    throw Error(ErrorCode::InvalidArgument, "assignment: cost matrix has non-finite entries");
  }
}

}  // namespace

double assignment_cost(const RealMatrix& cost, const Permutation& perm) {
  double total = 0.0;
  for (Eigen::Index j = 0; j < cost.rows(); ++j) total += cost(j, perm[j]);
  return total;
}

Assignment optimal_matching(const RealMatrix& cost) {
  require_valid_cost(cost);
  const int n = static_cast<int>(cost.rows());
  Assignment out;
  if (n == 0) return out;

  constexpr double kInf = std::numeric_limits<double>::infinity();
  // 1-based arrays; column 0 is a virtual source.
  std::vector<double> row_pot(n + 1, 0.0);
  std::vector<double> col_pot(n + 1, 0.0);
  std::vector<int> col_owner(n + 1, 0);  // row matched to column j
  std::vector<int> prev_col(n + 1, 0);
  std::vector<double> dist(n + 1);
  std::vector<char> done(n + 1);

  for (int row = 1; row <= n; ++row) {
    col_owner[0] = row;
    int j0 = 0;
    std::fill(dist.begin(), dist.end(), kInf);
    std::fill(done.begin(), done.end(), 0);
    // Dijkstra over reduced costs until a free column is reached.
    do {
      done[j0] = 1;
      const int i0 = col_owner[j0];
      double delta = kInf;
      int j1 = 0;
      for (int j = 1; j <= n; ++j) {
        if (done[j]) continue;
        const double reduced = cost(i0 - 1, j - 1) - row_pot[i0] - col_pot[j];
        if (reduced < dist[j]) {
          dist[j] = reduced;
          prev_col[j] = j0;
        }
        if (dist[j] < delta) {
          delta = dist[j];
          j1 = j;
        }
      }
      for (int j = 0; j <= n; ++j) {
        if (done[j]) {
          row_pot[col_owner[j]] += delta;
          col_pot[j] -= delta;
        } else {
          dist[j] -= delta;
        }
      }
      j0 = j1;
    } while (col_owner[j0] != 0);
    // Augment along the shortest path.
    do {
      const int j1 = prev_col[j0];
      col_owner[j0] = col_owner[j1];
      j0 = j1;
    } while (j0 != 0);
  }

  out.permutation.assign(static_cast<std::size_t>(n), -1);
  for (int j = 1; j <= n; ++j) out.permutation[col_owner[j] - 1] = j - 1;
  out.total_cost = assignment_cost(cost, out.permutation);
  return out;
}

Assignment brute_force_matching(const RealMatrix& cost) {
  require_valid_cost(cost);
  if (cost.rows() > 10) {
    throw Error(ErrorCode::InvalidArgument, "brute_force_matching: n > 10 is not supported");
  }
  Permutation perm(static_cast<std::size_t>(cost.rows()));
  std::iota(perm.begin(), perm.end(), 0);
  Assignment best{perm, assignment_cost(cost, perm)};
  while (std::next_permutation(perm.begin(), perm.end())) {
    const double c = assignment_cost(cost, perm);
    if (c < best.total_cost) best = {perm, c};
  }
  return best;
}

}  // namespace jspec
