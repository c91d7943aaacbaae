#include "jspec/joint_spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <tuple>

namespace jspec {

// ---------------------------------------------------------------------------
// MatrixTuple

MatrixTuple::MatrixTuple(std::vector<ComplexMatrix> matrices) : matrices_(std::move(matrices)) {
  if (matrices_.empty()) {
    throw Error(ErrorCode::InvalidArgument, "MatrixTuple: tuple must contain at least one matrix");
  }
  n_ = matrices_.front().rows();
  for (std::size_t k = 0; k < matrices_.size(); ++k) {
    const ComplexMatrix& a = matrices_[k];
    if (a.rows() != n_ || a.cols() != n_ || n_ == 0) {
      throw Error(ErrorCode::DimensionMismatch,
                  "MatrixTuple: matrix " + std::to_string(k + 1) + " is " +
                      std::to_string(a.rows()) + "x" + std::to_string(a.cols()) +
                      ", expected " + std::to_string(n_) + "x" + std::to_string(n_));
    }
    if (!is_finite(a)) {
      throw Error(ErrorCode::InvalidArgument,
                  "MatrixTuple: matrix " + std::to_string(k + 1) + " has non-finite entries");
    }
  }
}

double MatrixTuple::max_frobenius_norm() const {
  double out = 0.0;
  for (const auto& a : matrices_) out = std::max(out, a.norm());
  return out;
}

namespace {

void require_same_shape(const MatrixTuple& a, const MatrixTuple& b, const char* what) {
  if (a.n() != b.n() || a.m() != b.m()) {
    throw Error(ErrorCode::DimensionMismatch,
                std::string(what) + ": tuples differ in shape (n=" + std::to_string(a.n()) +
                    ", m=" + std::to_string(a.m()) + " vs n=" + std::to_string(b.n()) +
                    ", m=" + std::to_string(b.m()) + ")");
  }
}

}  // namespace

MatrixTuple MatrixTuple::operator+(const MatrixTuple& rhs) const {
  require_same_shape(*this, rhs, "MatrixTuple::operator+");
  std::vector<ComplexMatrix> out;
  for (std::size_t k = 0; k < m(); ++k) out.push_back(matrices_[k] + rhs[k]);
  return MatrixTuple(std::move(out));
}

MatrixTuple MatrixTuple::operator-(const MatrixTuple& rhs) const {
  require_same_shape(*this, rhs, "MatrixTuple::operator-");
  std::vector<ComplexMatrix> out;
  for (std::size_t k = 0; k < m(); ++k) out.push_back(matrices_[k] - rhs[k]);
  return MatrixTuple(std::move(out));
}

MatrixTuple MatrixTuple::scaled(Complex c) const {
  std::vector<ComplexMatrix> out;
  for (const auto& a : matrices_) out.push_back(c * a);
  return MatrixTuple(std::move(out));
}

// ---------------------------------------------------------------------------
// Hypotheses

bool HypothesisReport::ok() const {
  return commuting && (!require_normal || normal) && (!require_nonsingular || nonsingular);
}

std::string HypothesisReport::failure_message() const {
  if (!commuting) return "commutation check failed";
  if (require_normal && !normal) return "normality check failed";
  if (require_nonsingular && !nonsingular) return "nonsingularity check failed";
  return {};
}

HypothesisReport check_hypotheses(const MatrixTuple& tuple, bool require_normal,
                                  bool require_nonsingular, const Tolerances& tol) {
  HypothesisReport r;
  r.require_normal = require_normal;
  r.require_nonsingular = require_nonsingular;

  const double scale = tuple.max_frobenius_norm();
  r.commutation_threshold = tol.commutation * scale * scale;
  for (std::size_t i = 0; i < tuple.m(); ++i) {
    for (std::size_t j = i + 1; j < tuple.m(); ++j) {
      r.max_commutator_norm = std::max(r.max_commutator_norm, commutator_norm(tuple[i], tuple[j]));
    }
  }
  r.commuting = r.max_commutator_norm <= r.commutation_threshold;

  r.min_singular_value = std::numeric_limits<double>::infinity();
  r.min_relative_singular_value = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < tuple.m(); ++k) {
    const ComplexMatrix& a = tuple[k];
    const double fro2 = a.squaredNorm();
    const double defect = normality_defect(a);
    const double rel = fro2 > 0.0 ? defect / fro2 : 0.0;
    r.max_relative_normality_defect = std::max(r.max_relative_normality_defect, rel);
    if (defect > tol.normality * fro2) r.normal = false;

    const RealVector sv = singular_values(a);
    const double smin = sv(sv.size() - 1);
    const double smax = sv(0);
    r.min_singular_value = std::min(r.min_singular_value, smin);
    r.min_relative_singular_value =
        std::min(r.min_relative_singular_value, smax > 0.0 ? smin / smax : 0.0);
    if (!(smin > tol.singularity * smax)) r.nonsingular = false;
  }
  return r;
}

// ---------------------------------------------------------------------------
// Helpers shared by the diagonalization routines

namespace {

std::vector<double> random_coefficients(std::size_t m, Rng& rng) {
  std::vector<double> c(m);
  for (auto& x : c) x = rng.uniform(-1.0, 1.0);
  return c;
}

ComplexMatrix combine(const std::vector<ComplexMatrix>& mats, const std::vector<double>& c) {
  ComplexMatrix h = ComplexMatrix::Zero(mats.front().rows(), mats.front().cols());
  for (std::size_t k = 0; k < mats.size(); ++k) h += c[k] * mats[k];
  return h;
}

std::vector<ComplexMatrix> restrict_to(const std::vector<ComplexMatrix>& mats,
                                       const ComplexMatrix& basis) {
  std::vector<ComplexMatrix> out;
  out.reserve(mats.size());
  for (const auto& a : mats) out.push_back(basis.adjoint() * a * basis);
  return out;
}

bool all_scalar(const std::vector<ComplexMatrix>& mats, const std::vector<double>& abs_tol) {
  for (std::size_t k = 0; k < mats.size(); ++k) {
    const ComplexMatrix& a = mats[k];
    const Complex mean = a.trace() / static_cast<double>(a.rows());
    const ComplexMatrix dev = a - mean * ComplexMatrix::Identity(a.rows(), a.cols());
    if (dev.norm() > abs_tol[k]) return false;
  }
  return true;
}

// Single-linkage clustering of values closer than threshold; clusters are
// returned in order of their first member.
std::vector<std::vector<Eigen::Index>> cluster(const ComplexVector& values, double threshold) {
  const Eigen::Index n = values.size();
  std::vector<Eigen::Index> parent(static_cast<std::size_t>(n));
  std::iota(parent.begin(), parent.end(), Eigen::Index{0});
  auto find = [&](Eigen::Index i) {
    while (parent[i] != i) i = parent[i] = parent[parent[i]];
    return i;
  };
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i + 1; j < n; ++j) {
      if (std::abs(values(i) - values(j)) <= threshold) parent[find(j)] = find(i);
    }
  }
  std::vector<std::vector<Eigen::Index>> groups;
  std::vector<Eigen::Index> slot(static_cast<std::size_t>(n), -1);
  for (Eigen::Index i = 0; i < n; ++i) {
    const Eigen::Index root = find(i);
    if (slot[root] < 0) {
      slot[root] = static_cast<Eigen::Index>(groups.size());
      groups.emplace_back();
    }
    groups[slot[root]].push_back(i);
  }
  return groups;
}

ComplexMatrix select_columns(const ComplexMatrix& m, const std::vector<Eigen::Index>& cols) {
  ComplexMatrix out(m.rows(), static_cast<Eigen::Index>(cols.size()));
  for (std::size_t c = 0; c < cols.size(); ++c) out.col(c) = m.col(cols[c]);
  return out;
}

std::vector<double> absolute_tolerances(const std::vector<ComplexMatrix>& mats, double rel) {
  std::vector<double> out;
  for (const auto& a : mats) out.push_back(rel * a.norm());
  return out;
}

// Right singular vectors for the `count` smallest singular values of m,
// together with the largest of those singular values.
std::pair<ComplexMatrix, double> trailing_singular_subspace(const ComplexMatrix& m,
                                                            Eigen::Index count) {
  Eigen::JacobiSVD<ComplexMatrix> svd(m, Eigen::ComputeFullV);
  const Eigen::Index n = m.cols();
  return {svd.matrixV().rightCols(count), svd.singularValues()(n - count)};
}

void require_commuting(const MatrixTuple& tuple, const Tolerances& tol) {
  const HypothesisReport r = check_hypotheses(tuple, false, false, tol);
  if (!r.commuting) {
    throw Error(ErrorCode::NotCommuting,
                "commutation check failed: max ||[A_i, A_j]||_F = " +
                    std::to_string(r.max_commutator_norm) + " > " +
                    std::to_string(r.commutation_threshold));
  }
}

struct RetryBudget {
  int remaining;
  bool consume() { return remaining-- > 0; }
};

// Orthonormal basis Q (n x b) of a joint invariant subspace -> orthonormal
// joint eigenvectors spanning it.
ComplexMatrix refine_unitary(const std::vector<ComplexMatrix>& full, const ComplexMatrix& q,
                             const std::vector<double>& abs_tol, const Tolerances& tol,
                             Rng& rng, RetryBudget& budget) {
  if (q.cols() == 1) return q;
  const std::vector<ComplexMatrix> restricted = restrict_to(full, q);
  if (all_scalar(restricted, abs_tol)) return q;

  while (true) {
    const ComplexMatrix h = combine(restricted, random_coefficients(full.size(), rng));
    Eigen::ComplexSchur<ComplexMatrix> schur(h);
    if (schur.info() == Eigen::Success) {
      const ComplexVector lambda = schur.matrixT().diagonal();
      const auto groups = cluster(lambda, tol.cluster * std::max(h.norm(), 1e-300));
      if (groups.size() > 1) {
        const ComplexMatrix z = q * schur.matrixU();
        ComplexMatrix out(q.rows(), q.cols());
        Eigen::Index col = 0;
        for (const auto& g : groups) {
          const ComplexMatrix part =
              refine_unitary(full, select_columns(z, g), abs_tol, tol, rng, budget);
          out.middleCols(col, part.cols()) = part;
          col += part.cols();
        }
        return out;
      }
    }
    if (!budget.consume()) {
      throw Error(ErrorCode::DiagonalizationFailed,
                  "simultaneous diagonalization: random combinations failed to separate a "
                  "cluster after " + std::to_string(tol.max_retries) + " retries");
    }
  }
}

// Joint eigenvectors (not normalized) of a commuting diagonalizable family
// of b x b matrices.
ComplexMatrix refine_general(const std::vector<ComplexMatrix>& mats,
                             const std::vector<double>& abs_tol, const Tolerances& tol,
                             Rng& rng, RetryBudget& budget) {
  const Eigen::Index b = mats.front().rows();
  if (b == 1) return ComplexMatrix::Identity(1, 1);
  if (all_scalar(mats, abs_tol)) return ComplexMatrix::Identity(b, b);

  while (true) {
    const ComplexMatrix h = combine(mats, random_coefficients(mats.size(), rng));
    const double hnorm = std::max(h.norm(), 1e-300);
    Eigen::ComplexSchur<ComplexMatrix> schur(h, false);
    if (schur.info() == Eigen::Success) {
      const ComplexVector lambda = schur.matrixT().diagonal();
      const auto groups = cluster(lambda, tol.cluster * hnorm);
      if (groups.size() > 1) {
        ComplexMatrix out(b, b);
        Eigen::Index col = 0;
        for (const auto& g : groups) {
          const auto r = static_cast<Eigen::Index>(g.size());
          Complex mean(0.0, 0.0);
          for (Eigen::Index i : g) mean += lambda(i);
          mean /= static_cast<double>(r);
          const ComplexMatrix shifted = h - mean * ComplexMatrix::Identity(b, b);
          auto [basis, worst] = trailing_singular_subspace(shifted, r);
          if (r > 1 && worst > tol.cluster * hnorm * static_cast<double>(b)) {
            throw Error(ErrorCode::NotDiagonalizable,
                        "eigenspace of a repeated eigenvalue is deficient (defective tuple)");
          }
          ComplexMatrix vecs = basis;
          if (r > 1) {
            const std::vector<ComplexMatrix> sub = restrict_to(mats, basis);
            vecs = basis * refine_general(sub, absolute_tolerances(sub, tol.diagonalization), tol,
                                          rng, budget);
          }
          out.middleCols(col, r) = vecs;
          col += r;
        }
        return out;
      }
      // A single cluster: h is (numerically) lambda*I + nilpotent. For a
      // diagonalizable tuple this means every member is scalar, which was
      // excluded above, unless the draw was unlucky.
      const Complex mean = lambda.mean();
      if ((h - mean * ComplexMatrix::Identity(b, b)).norm() > tol.diagonalization * hnorm) {
        throw Error(ErrorCode::NotDiagonalizable,
                    "a member of the tuple has a non-trivial Jordan block");
      }
    }
    if (!budget.consume()) {
      throw Error(ErrorCode::NotDiagonalizable,
                  "general diagonalization: no separating combination after " +
                      std::to_string(tol.max_retries) + " retries");
    }
  }
}

struct DiagonalCheck {
  ComplexMatrix eigenvalues;
  double residual = 0.0;
  bool within_tolerance = true;
};

DiagonalCheck check_diagonal(const MatrixTuple& tuple, const ComplexMatrix& transform,
                             const ComplexMatrix& inverse, const Tolerances& tol) {
  DiagonalCheck out;
  out.eigenvalues.resize(tuple.n(), static_cast<Eigen::Index>(tuple.m()));
  for (std::size_t k = 0; k < tuple.m(); ++k) {
    ComplexMatrix d = inverse * tuple[k] * transform;
    out.eigenvalues.col(k) = d.diagonal();
    d.diagonal().setZero();
    const double off = d.norm();
    out.residual = std::max(out.residual, off);
    if (off > tol.diagonalization * tuple[k].norm()) out.within_tolerance = false;
  }
  return out;
}

ComplexMatrix permute_rows(const ComplexMatrix& m, const std::vector<Eigen::Index>& order) {
  ComplexMatrix out(m.rows(), m.cols());
  for (std::size_t i = 0; i < order.size(); ++i) out.row(i) = m.row(order[i]);
  return out;
}

ComplexMatrix permute_cols(const ComplexMatrix& m, const std::vector<Eigen::Index>& order) {
  ComplexMatrix out(m.rows(), m.cols());
  for (std::size_t i = 0; i < order.size(); ++i) out.col(i) = m.col(order[i]);
  return out;
}

}  // namespace

std::vector<Eigen::Index> canonical_order(const ComplexMatrix& eigenvalues) {
  const Eigen::Index n = eigenvalues.rows();
  const Eigen::Index m = eigenvalues.cols();
  std::vector<double> quantum(static_cast<std::size_t>(m));
  for (Eigen::Index k = 0; k < m; ++k) {
    const double scale = eigenvalues.col(k).cwiseAbs().maxCoeff();
    quantum[k] = scale > 0.0 ? 1e-9 * scale : 1.0;
  }
  std::vector<std::vector<long long>> keys(static_cast<std::size_t>(n));
  for (Eigen::Index j = 0; j < n; ++j) {
    for (Eigen::Index k = 0; k < m; ++k) {
      keys[j].push_back(std::llround(eigenvalues(j, k).real() / quantum[k]));
      keys[j].push_back(std::llround(eigenvalues(j, k).imag() / quantum[k]));
    }
  }
  std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](Eigen::Index a, Eigen::Index b) { return keys[a] < keys[b]; });
  return order;
}

JointSpectrum simultaneous_diagonalize(const MatrixTuple& tuple, Rng& rng, const Tolerances& tol) {
  require_commuting(tuple, tol);
  const HypothesisReport hyp = check_hypotheses(tuple, true, false, tol);
  if (!hyp.normal) {
    throw Error(ErrorCode::NotNormal,
                "normality check failed: max relative ||AA^* - A^*A||_F = " +
                    std::to_string(hyp.max_relative_normality_defect));
  }

  const Eigen::Index n = tuple.n();
  const std::vector<double> abs_tol = absolute_tolerances(tuple.matrices(), tol.diagonalization);
  RetryBudget budget{tol.max_retries};
  while (true) {
    ComplexMatrix u = refine_unitary(tuple.matrices(), ComplexMatrix::Identity(n, n), abs_tol, tol,
                                     rng, budget);
    // Re-orthonormalize to remove drift from nested Schur products.
    Eigen::HouseholderQR<ComplexMatrix> qr(u);
    ComplexMatrix q = qr.householderQ();
    const ComplexMatrix r = qr.matrixQR().triangularView<Eigen::Upper>();
    for (Eigen::Index j = 0; j < n; ++j) {
      const double mag = std::abs(r(j, j));
      if (mag > 0.0) q.col(j) *= r(j, j) / mag;
    }
    u = q;

    const DiagonalCheck check = check_diagonal(tuple, u, u.adjoint(), tol);
    if (check.within_tolerance) {
      const auto order = canonical_order(check.eigenvalues);
      JointSpectrum out;
      out.n = n;
      out.m = tuple.m();
      out.kind = TransformKind::unitary;
      out.eigenvalues = permute_rows(check.eigenvalues, order);
      out.transform = permute_cols(u, order);
      out.residual = check.residual;
      for (Eigen::Index j = 0; j < n; ++j) {
        out.projectors.push_back(out.transform.col(j) * out.transform.col(j).adjoint());
      }
      return out;
    }
    if (!budget.consume()) {
      throw Error(ErrorCode::DiagonalizationFailed,
                  "simultaneous diagonalization: residual " + std::to_string(check.residual) +
                      " above tolerance after retries");
    }
  }
}

JointSpectrum diagonalize_general(const MatrixTuple& tuple, Rng& rng, const Tolerances& tol) {
  require_commuting(tuple, tol);
  const Eigen::Index n = tuple.n();
  const std::vector<double> abs_tol = absolute_tolerances(tuple.matrices(), tol.diagonalization);
  RetryBudget budget{tol.max_retries};
  while (true) {
    ComplexMatrix v = refine_general(tuple.matrices(), abs_tol, tol, rng, budget);
    for (Eigen::Index j = 0; j < n; ++j) v.col(j).normalize();

    const RealVector sv = singular_values(v);
    const double smin = sv(n - 1);
    if (!(smin > 0.0) || sv(0) / smin > tol.max_eigenvector_condition) {
      throw Error(ErrorCode::NotDiagonalizable,
                  "eigenvector matrix condition number exceeds " +
                      std::to_string(tol.max_eigenvector_condition));
    }
    const ComplexMatrix vinv = v.partialPivLu().inverse();
    const DiagonalCheck check = check_diagonal(tuple, v, vinv, tol);
    if (check.within_tolerance) {
      const auto order = canonical_order(check.eigenvalues);
      JointSpectrum out;
      out.n = n;
      out.m = tuple.m();
      out.kind = TransformKind::general;
      out.eigenvalues = permute_rows(check.eigenvalues, order);
      out.transform = permute_cols(v, order);
      out.residual = check.residual;
      return out;
    }
    if (!budget.consume()) {
      throw Error(ErrorCode::NotDiagonalizable,
                  "general diagonalization: residual " + std::to_string(check.residual) +
                      " above tolerance after retries");
    }
  }
}

// ---------------------------------------------------------------------------
// Common triangularization

namespace {

// Unit vector that is an eigenvector of every member of a commuting family.
ComplexVector common_eigenvector(const std::vector<ComplexMatrix>& mats,
                                 const Tolerances& tol, Rng& rng, RetryBudget& budget) {
  const Eigen::Index b = mats.front().rows();
  if (b == 1) return ComplexVector::Ones(1);
  if (all_scalar(mats, absolute_tolerances(mats, tol.diagonalization))) {
    return ComplexVector::Unit(b, 0);
  }
  while (true) {
    const ComplexMatrix h = combine(mats, random_coefficients(mats.size(), rng));
    const double hnorm = std::max(h.norm(), 1e-300);
    Eigen::ComplexSchur<ComplexMatrix> schur(h, false);
    if (schur.info() == Eigen::Success) {
      const Complex lambda = schur.matrixT()(0, 0);
      const ComplexMatrix shifted = h - lambda * ComplexMatrix::Identity(b, b);
      Eigen::JacobiSVD<ComplexMatrix> svd(shifted, Eigen::ComputeFullV);
      const RealVector& s = svd.singularValues();
      Eigen::Index r = 1;
      while (r < b && s(b - r - 1) <= tol.cluster * hnorm) ++r;
      const ComplexMatrix basis = svd.matrixV().rightCols(r);
      if (r == 1) return basis.col(0);
      if (r < b) {
        const std::vector<ComplexMatrix> sub = restrict_to(mats, basis);
        return basis * common_eigenvector(sub, tol, rng, budget);
      }
    }
    if (!budget.consume()) {
      throw Error(ErrorCode::DiagonalizationFailed,
                  "common triangularization: no separating combination after retries");
    }
  }
}

// Unitary whose first column is v (unit norm).
ComplexMatrix complete_to_unitary(const ComplexVector& v) {
  const ComplexMatrix vm = v;
  Eigen::HouseholderQR<ComplexMatrix> qr(vm);
  ComplexMatrix q = qr.householderQ();
  const Complex r00 = qr.matrixQR()(0, 0);
  if (std::abs(r00) > 0.0) q.col(0) *= r00 / std::abs(r00);
  return q;
}

ComplexMatrix triangularize_block(const std::vector<ComplexMatrix>& mats, const Tolerances& tol,
                                  Rng& rng, RetryBudget& budget) {
  const Eigen::Index b = mats.front().rows();
  if (b == 1) return ComplexMatrix::Identity(1, 1);
  const ComplexVector v = common_eigenvector(mats, tol, rng, budget);
  const ComplexMatrix q = complete_to_unitary(v);
  std::vector<ComplexMatrix> rest;
  for (const auto& a : mats) rest.push_back((q.adjoint() * a * q).bottomRightCorner(b - 1, b - 1));
  const ComplexMatrix z = triangularize_block(rest, tol, rng, budget);
  ComplexMatrix embed = ComplexMatrix::Identity(b, b);
  embed.bottomRightCorner(b - 1, b - 1) = z;
  return q * embed;
}

}  // namespace

TriangularForm common_triangularize(const MatrixTuple& tuple, Rng& rng, const Tolerances& tol) {
  require_commuting(tuple, tol);
  RetryBudget budget{tol.max_retries};
  while (true) {
    const ComplexMatrix u = triangularize_block(tuple.matrices(), tol, rng, budget);
    TriangularForm out;
    out.unitary = u;
    out.eigenvalues.resize(tuple.n(), static_cast<Eigen::Index>(tuple.m()));
    bool ok = true;
    for (std::size_t k = 0; k < tuple.m(); ++k) {
      const ComplexMatrix t = u.adjoint() * tuple[k] * u;
      out.eigenvalues.col(k) = t.diagonal();
      const double lower = ComplexMatrix(t.triangularView<Eigen::StrictlyLower>()).norm();
      out.residual = std::max(out.residual, lower);
      if (lower > tol.diagonalization * tuple[k].norm()) ok = false;
    }
    if (ok) return out;
    if (!budget.consume()) {
      throw Error(ErrorCode::DiagonalizationFailed,
                  "common triangularization: residual " + std::to_string(out.residual) +
                      " above tolerance after retries");
    }
  }
}

}  // namespace jspec
