#include "oil/stinespring.hpp"

#include "oil/random.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace oil {

CpMap::CpMap(std::vector<Matrix> kraus) : kraus_(std::move(kraus)) {
  if (kraus_.empty()) throw std::invalid_argument("CpMap needs at least one Kraus operator");
  m_ = static_cast<int>(kraus_.front().rows());
  n_ = static_cast<int>(kraus_.front().cols());
  if (m_ < 1 || n_ < 1) throw std::invalid_argument("CpMap: empty Kraus operator");
  for (const auto& k : kraus_) {
    if (k.rows() != m_ || k.cols() != n_) {
      throw std::invalid_argument("CpMap: Kraus operators must share one shape");
    }
  }
}

Matrix CpMap::apply(const Matrix& a) const {
  if (a.rows() != n_ || a.cols() != n_) {
    throw std::invalid_argument("CpMap::apply: argument must be " + std::to_string(n_) + "x" +
                                std::to_string(n_));
  }
  Matrix out = Matrix::Zero(m_, m_);
  for (const auto& k : kraus_) out += k * a * k.adjoint();
  return out;
}

Matrix CpMap::unit_image() const {
  Matrix out = Matrix::Zero(m_, m_);
  for (const auto& k : kraus_) out += k * k.adjoint();
  return out;
}

double CpMap::norm() const {
  Eigen::SelfAdjointEigenSolver<Matrix> eig(unit_image(), Eigen::EigenvaluesOnly);
  return eig.eigenvalues().maxCoeff();
}

CpMap random_cp_contraction(int n, int m, int r, std::uint64_t seed) {
  if (n < 1 || m < 1 || r < 1) {
    throw std::invalid_argument("random_cp_contraction: dimensions and Kraus count must be >= 1");
  }
  std::vector<Matrix> kraus;
  kraus.reserve(static_cast<std::size_t>(r));
  for (int i = 0; i < r; ++i) {
    kraus.push_back(random_gaussian(m, n, seed * 1000003ULL + static_cast<std::uint64_t>(i)));
  }
  const double scale = std::sqrt((1.0 - 1e-6) / CpMap(kraus).norm());
  for (auto& k : kraus) k *= scale;
  return CpMap(std::move(kraus));
}

// ---------------------------------------------------------------------------

DilationData::DilationData(CpMap kappa, Matrix omega)
    : kappa_(std::move(kappa)), omega_(std::move(omega)) {}

Matrix DilationData::represent(const Matrix& a) const {
  const int n = kappa_.input_dim();
  const int r = kappa_.kraus_count();
  if (a.rows() != n || a.cols() != n) {
    throw std::invalid_argument("dilation: argument must be " + std::to_string(n) + "x" +
                                std::to_string(n));
  }
  const int d = ambient_dim();
  Matrix amplified = Matrix::Zero(d, d);
  for (int i = 0; i < r; ++i) amplified.block(i * n, i * n, n, n) = a;
  return omega_.adjoint() * amplified * omega_;
}

Matrix DilationData::projection() const {
  const int d = ambient_dim();
  const int m = projection_dim();
  Matrix p = Matrix::Zero(d, d);
  p.topLeftCorner(m, m).setIdentity();
  return p;
}

DilationBlocks DilationData::blocks(const Matrix& a) const {
  const Matrix pi = represent(a);
  const int m = projection_dim();
  const int rest = ambient_dim() - m;
  return DilationBlocks{pi.topLeftCorner(m, m), pi.topRightCorner(m, rest),
                        pi.bottomLeftCorner(rest, m), pi.bottomRightCorner(rest, rest)};
}

DilationData dilation_build(const CpMap& kappa) {
  if (!kappa.is_contraction()) {
    std::ostringstream msg;
    msg << "dilation_build: map is not a contraction (||kappa(1)|| = " << kappa.norm() << ")";
    throw std::invalid_argument(msg.str());
  }
  const int n = kappa.input_dim();
  const int m = kappa.output_dim();
  const int r = kappa.kraus_count();
  const int d = n * r + m;

  // (1 - kappa(1))^{1/2} by eigendecomposition, clipping round-off negatives.
  Eigen::SelfAdjointEigenSolver<Matrix> eig(Matrix::Identity(m, m) - kappa.unit_image());
  Eigen::VectorXd evals = eig.eigenvalues();
  for (Eigen::Index i = 0; i < evals.size(); ++i) {
    if (evals(i) < -1e-12) {
      throw std::invalid_argument("dilation_build: 1 - kappa(1) is not positive");
    }
    evals(i) = std::sqrt(std::max(evals(i), 0.0));
  }
  const Matrix defect = eig.eigenvectors() * evals.asDiagonal() * eig.eigenvectors().adjoint();

  Matrix w = Matrix::Zero(d, m);
  for (int i = 0; i < r; ++i) w.block(i * n, 0, n, m) = kappa.kraus()[static_cast<std::size_t>(i)].adjoint();
  w.bottomRows(m) = defect;

  // W has orthonormal columns, so the Householder basis of its QR splits into
  // range(W) (first m columns) and its orthogonal complement.
  Eigen::HouseholderQR<Matrix> qr(w);
  const Matrix q = qr.householderQ();
  Matrix omega(d, d);
  omega.leftCols(m) = w;
  omega.rightCols(d - m) = q.rightCols(d - m);

  const double unitarity = (omega.adjoint() * omega - Matrix::Identity(d, d)).norm();
  if (!(unitarity <= 1e-10)) {
    std::ostringstream msg;
    msg << "dilation_build: unitary completion failed (||Omega^*Omega - 1|| = " << unitarity
        << ")";
    throw std::runtime_error(msg.str());
  }
  return DilationData(kappa, std::move(omega));
}

DilationBlocks block_decompose(const DilationData& d, const Matrix& a) { return d.blocks(a); }

DefectResiduals defect_identity_residuals(const DilationData& d, const Matrix& a,
                                          const Matrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw std::invalid_argument("defect_identity_residuals: dimension mismatch");
  }
  const CpMap& kappa = d.map();
  const DilationBlocks ba = d.blocks(a);
  const DilationBlocks bb = d.blocks(b);

  DefectResiduals out;
  out.product = operator_norm(kappa.apply(a * b) - kappa.apply(a) * kappa.apply(b) -
                              ba.p12 * bb.p21);

  const Matrix p = d.projection();
  const Matrix pi = d.represent(a);
  const Matrix comm = p * pi - pi * p;
  const int m = d.projection_dim();
  const int rest = d.ambient_dim() - m;
  Matrix block_diag = Matrix::Zero(d.ambient_dim(), d.ambient_dim());
  block_diag.topLeftCorner(m, m) = ba.p12 * ba.p21;
  block_diag.bottomRightCorner(rest, rest) = ba.p21 * ba.p12;
  out.commutator_square = operator_norm(comm * comm + block_diag);
  return out;
}

double compression_residual(const DilationData& d, const Matrix& a) {
  const Matrix p = d.projection();
  Matrix expected = Matrix::Zero(d.ambient_dim(), d.ambient_dim());
  expected.topLeftCorner(d.projection_dim(), d.projection_dim()) = d.map().apply(a);
  return operator_norm(p * d.represent(a) * p - expected);
}

double homomorphism_residual(const DilationData& d, const Matrix& a, const Matrix& b) {
  return operator_norm(d.represent(a * b) - d.represent(a) * d.represent(b));
}

double adjoint_residual(const DilationData& d, const Matrix& a) {
  return operator_norm(d.represent(a.adjoint()) - d.represent(a).adjoint());
}

SquareRootVerdicts square_root_membership(std::span<const double> values, double p,
                                          std::size_t n_max,
                                          const SummabilityThresholds& thresholds) {
  const IdealSpec base = IdealSpec::schatten(p);
  return SquareRootVerdicts{
      summability_classify(values, IdealSpec::square_root_of(base), n_max, thresholds),
      summability_classify(values, base, n_max, thresholds)};
}

CpMap hardy_compression_map(const Window& w) {
  const int hardy = w.hi >= 0 ? w.hi - std::max(w.lo, 0) + 1 : 0;
  if (hardy < 1) throw std::invalid_argument("hardy_compression_map: window has no Hardy modes");
  Matrix k = Matrix::Zero(hardy, w.dimension());
  for (int i = 0; i < hardy; ++i) k(i, w.index_of(std::max(w.lo, 0) + i)) = 1.0;
  return CpMap({k});
}

DefectCommutatorEvidence defect_commutator_evidence(const DilationData& d, const Matrix& a,
                                                    double p, std::size_t n_max) {
  if ((a - a.adjoint()).norm() > 1e-12 * std::max(1.0, a.norm())) {
    throw std::invalid_argument("defect_commutator_evidence: a must be self-adjoint");
  }
  const CpMap& kappa = d.map();
  const Matrix ka = kappa.apply(a);
  const Matrix pi = d.represent(a);
  const Matrix proj = d.projection();

  DefectCommutatorEvidence out;
  out.defect_spectrum = singular_values(kappa.apply(a * a) - ka * ka, "kappa(a^2)-kappa(a)^2");
  out.commutator_spectrum = singular_values(proj * pi - pi * proj, "[P,pi(a)]");
  out.defect_verdict =
      summability_classify(out.defect_spectrum.values, IdealSpec::schatten(p), n_max);
  out.commutator_verdict = summability_classify(out.commutator_spectrum.values,
                                                IdealSpec::schatten(2.0 * p), 2 * n_max);
  for (std::size_t i = 0; i < out.defect_verdict.sums.size(); ++i) {
    const double expected = 2.0 * out.defect_verdict.sums[i];
    const double got = out.commutator_verdict.sums[i];
    const double scale = std::max(expected, 1e-300);
    out.evidence_mismatch = std::max(out.evidence_mismatch, std::abs(got - expected) / scale);
  }
  return out;
}

}  // namespace oil
