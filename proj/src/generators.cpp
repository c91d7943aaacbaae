#include "jspec/generators.hpp"

#include <cmath>
#include <string>

namespace jspec {

void GeneratorConfig::validate() const {
  if (n < 1) throw Error(ErrorCode::InvalidArgument, "generator: n must be at least 1");
  if (m < 1) throw Error(ErrorCode::InvalidArgument, "generator: m must be at least 1");
  if (!(eigenvalue_min_modulus > 0.0) || !(eigenvalue_min_modulus < eigenvalue_box)) {
    throw Error(ErrorCode::InvalidArgument,
                "generator: need 0 < eigenvalue_min_modulus < eigenvalue_box");
  }
  if (!(perturbation_scale >= 0.0) || !std::isfinite(perturbation_scale)) {
    throw Error(ErrorCode::InvalidArgument, "generator: perturbation_scale must be finite and >= 0");
  }
  if (!(max_condition >= 1.0) || !std::isfinite(max_condition)) {
    throw Error(ErrorCode::InvalidArgument, "generator: max_condition must be finite and >= 1");
  }
}

namespace {

Complex sample_eigenvalue(const GeneratorConfig& cfg, Rng& rng) {
  while (true) {
    const Complex z(rng.uniform(-cfg.eigenvalue_box, cfg.eigenvalue_box),
                    rng.uniform(-cfg.eigenvalue_box, cfg.eigenvalue_box));
    if (std::abs(z) >= cfg.eigenvalue_min_modulus) return z;
  }
}

ComplexMatrix sample_eigenvalues(const GeneratorConfig& cfg, Rng& rng) {
  ComplexMatrix d(cfg.n, static_cast<Eigen::Index>(cfg.m));
  for (Eigen::Index k = 0; k < d.cols(); ++k) {
    for (Eigen::Index j = 0; j < cfg.n; ++j) d(j, k) = sample_eigenvalue(cfg, rng);
  }
  return d;
}

// Uniform in the closed unit disk.
Complex unit_disk(Rng& rng) {
  while (true) {
    const Complex z(rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0));
    if (std::norm(z) <= 1.0) return z;
  }
}

MatrixTuple assemble(const ComplexMatrix& basis, const ComplexMatrix& basis_inv,
                     const ComplexMatrix& eigenvalues) {
  std::vector<ComplexMatrix> mats;
  for (Eigen::Index k = 0; k < eigenvalues.cols(); ++k) {
    mats.push_back(basis * eigenvalues.col(k).asDiagonal() * basis_inv);
  }
  return MatrixTuple(std::move(mats));
}

// exp(scale * K) for a random skew-Hermitian K with ||K||_F = 1.
ComplexMatrix random_rotation(Eigen::Index n, double scale, Rng& rng) {
  const ComplexMatrix g = rng.gaussian_matrix(n, n);
  ComplexMatrix k = 0.5 * (g - g.adjoint());
  const double norm = k.norm();
  if (norm > 0.0) k /= norm;
  // i K is Hermitian: i K = V diag(lambda) V^*, so exp(s K) = V diag(e^{-i s lambda}) V^*.
  const ComplexMatrix herm = Complex(0.0, 1.0) * k;
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(0.5 * (herm + herm.adjoint()));
  ComplexVector phases(n);
  for (Eigen::Index j = 0; j < n; ++j) {
    phases(j) = std::exp(Complex(0.0, -scale * es.eigenvalues()(j)));
  }
  return es.eigenvectors() * phases.asDiagonal() * es.eigenvectors().adjoint();
}

ComplexMatrix shifted_eigenvalues(const ComplexMatrix& d, double scale, Rng& rng) {
  ComplexMatrix out = d;
  for (Eigen::Index k = 0; k < d.cols(); ++k) {
    for (Eigen::Index j = 0; j < d.rows(); ++j) out(j, k) += scale * unit_disk(rng);
  }
  return out;
}

// Eigenvectors of an upper-triangular T with distinct diagonal, as a unit
// upper-triangular matrix.
ComplexMatrix triangular_eigenvectors(const ComplexMatrix& t) {
  const Eigen::Index n = t.rows();
  ComplexMatrix x = ComplexMatrix::Identity(n, n);
  for (Eigen::Index j = 0; j < n; ++j) {
    for (Eigen::Index i = j - 1; i >= 0; --i) {
      Complex acc(0.0, 0.0);
      for (Eigen::Index l = i + 1; l <= j; ++l) acc += t(i, l) * x(l, j);
      x(i, j) = -acc / (t(i, i) - t(j, j));
    }
  }
  return x;
}

}  // namespace

GeneratedTuple random_commuting_normal_tuple(const GeneratorConfig& cfg) {
  cfg.validate();
  Rng rng(cfg.seed, Stream::normal_tuple);
  GeneratedTuple out;
  out.basis = rng.haar_unitary(cfg.n);
  out.eigenvalues = sample_eigenvalues(cfg, rng);
  out.unitary_basis = true;
  out.tuple = assemble(out.basis, out.basis.adjoint(), out.eigenvalues);
  return out;
}

GeneratedTuple random_commuting_diagonalizable_tuple(const GeneratorConfig& cfg) {
  cfg.validate();
  Rng rng(cfg.seed, Stream::diagonalizable_tuple);
  const ComplexMatrix left = rng.haar_unitary(cfg.n);
  const ComplexMatrix right = rng.haar_unitary(cfg.n);
  const double log_kappa = std::log(cfg.max_condition);
  RealVector sigma(cfg.n);
  for (Eigen::Index j = 0; j < cfg.n; ++j) sigma(j) = std::exp(rng.uniform01() * log_kappa);

  GeneratedTuple out;
  out.basis = left * sigma.cast<Complex>().asDiagonal() * right.adjoint();
  out.eigenvalues = sample_eigenvalues(cfg, rng);
  out.unitary_basis = false;
  const ComplexMatrix basis_inv =
      right * sigma.cwiseInverse().cast<Complex>().asDiagonal() * left.adjoint();
  out.tuple = assemble(out.basis, basis_inv, out.eigenvalues);
  return out;
}

MatrixTuple perturb_within_class(const GeneratedTuple& a, const GeneratorConfig& cfg,
                                 PerturbClass cls) {
  cfg.validate();
  const Eigen::Index n = a.tuple.n();
  const double s = cfg.perturbation_scale;
  Rng rng(cfg.seed, Stream::perturbation);

  ComplexMatrix basis;
  ComplexMatrix basis_inv;
  if (a.unitary_basis) {
    basis = a.basis * random_rotation(n, s, rng);
    basis_inv = basis.adjoint();
  } else {
    if (cls == PerturbClass::normal) {
      throw Error(ErrorCode::InvalidArgument,
                  "perturb_within_class: normal class needs a unitary eigenbasis");
    }
    const ComplexMatrix g = rng.gaussian_matrix(n, n);
    basis = a.basis + (s * a.basis.norm() / g.norm()) * g;
    basis_inv = checked_inverse(basis);
  }
  const ComplexMatrix d = shifted_eigenvalues(a.eigenvalues, s, rng);

  if (cls != PerturbClass::arbitrary_commuting) return assemble(basis, basis_inv, d);

  // T = diag(0, 1, ..., n-1) + s R with R strictly upper triangular. p_k(T)
  // interpolates d.col(k) on the spectrum of T, so p_k(T) = X diag(d_k) X^{-1}.
  ComplexMatrix t = ComplexMatrix::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    t(i, i) = static_cast<double>(i);
    for (Eigen::Index j = i + 1; j < n; ++j) t(i, j) = s * rng.complex_normal();
  }
  const ComplexMatrix x = triangular_eigenvectors(t);
  const ComplexMatrix x_inv =
      x.triangularView<Eigen::UnitUpper>().solve(ComplexMatrix::Identity(n, n));
  std::vector<ComplexMatrix> mats;
  for (Eigen::Index k = 0; k < d.cols(); ++k) {
    const ComplexMatrix poly = x * d.col(k).asDiagonal() * x_inv;
    mats.push_back(basis * poly * basis_inv);
  }
  return MatrixTuple(std::move(mats));
}

ComplexMatrix cyclic_shift(Eigen::Index n) {
  ComplexMatrix c = nilpotent_shift(n);
  c(n - 1, 0) = 1.0;
  return c;
}

ComplexMatrix nilpotent_shift(Eigen::Index n) {
  ComplexMatrix s = ComplexMatrix::Zero(n, n);
  for (Eigen::Index i = 0; i + 1 < n; ++i) s(i, i + 1) = 1.0;
  return s;
}

std::pair<MatrixTuple, MatrixTuple> extremal_shift_example(Eigen::Index n, std::size_t m) {
  if (n < 2) throw Error(ErrorCode::InvalidArgument, "extremal_shift_example: n must be >= 2");
  if (m < 1) throw Error(ErrorCode::InvalidArgument, "extremal_shift_example: m must be >= 1");
  const ComplexMatrix c = cyclic_shift(n);
  const ComplexMatrix z = nilpotent_shift(n);
  std::vector<ComplexMatrix> a;
  std::vector<ComplexMatrix> b;
  for (std::size_t k = 1; k <= m; ++k) {
    a.push_back(static_cast<double>(k) * c);
    b.push_back(static_cast<double>(k) * z);
  }
  return {MatrixTuple(std::move(a)), MatrixTuple(std::move(b))};
}

}  // namespace jspec
