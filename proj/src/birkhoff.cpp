#include "jspec/birkhoff.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace jspec {

RealMatrix permutation_matrix(const Permutation& perm) {
  const auto n = static_cast<Eigen::Index>(perm.size());
  RealMatrix p = RealMatrix::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) p(i, perm[i]) = 1.0;
  return p;
}

bool is_permutation(const Permutation& perm, std::size_t n) {
  if (perm.size() != n) return false;
  std::vector<bool> seen(n, false);
  for (int p : perm) {
    if (p < 0 || static_cast<std::size_t>(p) >= n || seen[p]) return false;
    seen[p] = true;
  }
  return true;
}

double OverlapMatrix::stochastic_defect() const {
  const RealVector ones = RealVector::Ones(w.cols());
  const double rows = (w.rowwise().sum() - ones).cwiseAbs().maxCoeff();
  const double cols = (w.colwise().sum().transpose() - ones).cwiseAbs().maxCoeff();
  return std::max(rows, cols);
}

OverlapMatrix overlap_from_unitaries(const ComplexMatrix& u, const ComplexMatrix& v) {
  if (u.rows() != v.rows() || u.cols() != v.cols()) {
    throw Error(ErrorCode::DimensionMismatch, "overlap: bases differ in size");
  }
  return OverlapMatrix{(u.adjoint() * v).cwiseAbs2()};
}

OverlapMatrix overlap_matrix(const JointSpectrum& p_spec, const JointSpectrum& q_spec) {
  if (p_spec.kind != TransformKind::unitary || q_spec.kind != TransformKind::unitary) {
    throw Error(ErrorCode::KindMismatch,
                "overlap_matrix requires unitary-kind spectra (orthonormal eigenbases)");
  }
  if (p_spec.n != q_spec.n) {
    throw Error(ErrorCode::DimensionMismatch, "overlap_matrix: spectra differ in n");
  }
  return overlap_from_unitaries(p_spec.transform, q_spec.transform);
}

double BirkhoffDecomposition::total_weight() const {
  double s = 0.0;
  for (const auto& t : terms) s += t.weight;
  return s;
}

RealMatrix BirkhoffDecomposition::reconstruct(Eigen::Index n) const {
  RealMatrix out = RealMatrix::Zero(n, n);
  for (const auto& t : terms) {
    for (Eigen::Index i = 0; i < n; ++i) out(i, t.permutation[i]) += t.weight;
  }
  return out;
}

namespace {

// Kuhn's augmenting-path matching over the positive entries. Rows try their
// heaviest columns first.
class SupportMatcher {
 public:
  SupportMatcher(const RealMatrix& residue, double cutoff) : n_(residue.rows()) {
    adj_.resize(static_cast<std::size_t>(n_));
    for (Eigen::Index i = 0; i < n_; ++i) {
      for (Eigen::Index j = 0; j < n_; ++j) {
        if (residue(i, j) > cutoff) adj_[i].push_back(static_cast<int>(j));
      }
      std::stable_sort(adj_[i].begin(), adj_[i].end(),
                       [&](int a, int b) { return residue(i, a) > residue(i, b); });
    }
  }

  bool solve(Permutation& perm) {
    match_col_.assign(static_cast<std::size_t>(n_), -1);
    for (Eigen::Index i = 0; i < n_; ++i) {
      visited_.assign(static_cast<std::size_t>(n_), false);
      if (!augment(static_cast<int>(i))) return false;
    }
    perm.assign(static_cast<std::size_t>(n_), -1);
    for (Eigen::Index j = 0; j < n_; ++j) perm[match_col_[j]] = static_cast<int>(j);
    return true;
  }

 private:
  bool augment(int row) {
    for (int col : adj_[row]) {
      if (visited_[col]) continue;
      visited_[col] = true;
      if (match_col_[col] < 0 || augment(match_col_[col])) {
        match_col_[col] = row;
        return true;
      }
    }
    return false;
  }

  Eigen::Index n_;
  std::vector<std::vector<int>> adj_;
  std::vector<int> match_col_;
  std::vector<bool> visited_;
};

}  // namespace

BirkhoffDecomposition birkhoff_decompose(const OverlapMatrix& overlap, const BirkhoffOptions& opts) {
  const RealMatrix& w = overlap.w;
  const Eigen::Index n = w.rows();
  if (n == 0 || w.cols() != n) {
    throw Error(ErrorCode::DimensionMismatch, "birkhoff_decompose: W must be square and non-empty");
  }
  if (!w.allFinite() || w.minCoeff() < -1e-10 || w.maxCoeff() > 1.0 + 1e-10 ||
      overlap.stochastic_defect() > opts.stochastic_tolerance) {
    throw Error(ErrorCode::NotDoublyStochastic,
                "birkhoff_decompose: input is not doubly stochastic (sum defect " +
                    std::to_string(overlap.stochastic_defect()) + ")");
  }

  RealMatrix residue = w.cwiseMax(0.0);
  double remaining = 1.0;
  BirkhoffDecomposition out;
  const std::size_t max_terms = static_cast<std::size_t>((n - 1) * (n - 1) + 1);
  while (remaining >= opts.residue_cutoff) {
    Permutation perm;
    if (!SupportMatcher(residue, opts.positivity_cutoff).solve(perm)) {
      throw Error(ErrorCode::MatchingNotFound,
                  "birkhoff_decompose: no perfect matching on the residue support (remaining "
                  "mass " + std::to_string(remaining) + ")");
    }
    double weight = residue(0, perm[0]);
    for (Eigen::Index i = 1; i < n; ++i) weight = std::min(weight, residue(i, perm[i]));
    weight = std::min(weight, remaining);
    for (Eigen::Index i = 0; i < n; ++i) {
      double& e = residue(i, perm[i]);
      e -= weight;
      if (e <= opts.positivity_cutoff) e = 0.0;
    }
    out.terms.push_back({weight, std::move(perm)});
    remaining -= weight;
    if (out.terms.size() > max_terms + static_cast<std::size_t>(n)) {
      throw Error(ErrorCode::MatchingNotFound, "birkhoff_decompose: extraction did not terminate");
    }
  }
  return out;
}

}  // namespace jspec
