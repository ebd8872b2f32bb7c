// Finite-dimensional Stinespring dilations of completely positive
// contractions  kappa(a) = sum_i K_i a K_i^*  and the block identities of
// the dilation relative to the corner projection P = diag(1_m, 0).
#pragma once

#include "oil/hardy.hpp"
#include "oil/random.hpp"
#include "oil/spectral.hpp"

#include <cstdint>
#include <utility>
#include <vector>

namespace oil {

/// Completely positive map M_n -> M_m in Kraus form. Each K_i is m x n.
class CpMap {
public:
  /// Throws std::invalid_argument on empty or mismatched Kraus lists.
  explicit CpMap(std::vector<Matrix> kraus);

  int input_dim() const { return n_; }
  int output_dim() const { return m_; }
  int kraus_count() const { return static_cast<int>(kraus_.size()); }
  const std::vector<Matrix>& kraus() const { return kraus_; }

  Matrix apply(const Matrix& a) const;
  /// kappa(1) = sum_i K_i K_i^*.
  Matrix unit_image() const;
  /// ||kappa|| = ||kappa(1)||.
  double norm() const;
  bool is_contraction(double tol = 1e-12) const { return norm() <= 1.0 + tol; }

private:
  std::vector<Matrix> kraus_;
  int n_ = 0;
  int m_ = 0;
};

/// r complex Gaussian Kraus operators rescaled so ||kappa(1)|| = 1 - 1e-6.
CpMap random_cp_contraction(int n, int m, int r, std::uint64_t seed);

struct DilationBlocks {
  Matrix p11;  // m x m, equals kappa(a)
  Matrix p12;  // m x (D-m)
  Matrix p21;  // (D-m) x m
  Matrix p22;  // (D-m) x (D-m)
};

/// pi(a) = Omega^* ((a (x) 1_r) (+) 0_m) Omega on C^D, D = n r + m, where the
/// first m columns of the unitary Omega are the Stinespring isometry
///   W x = (sum_i K_i^* x (x) e_i) (+) (1 - kappa(1))^{1/2} x.
class DilationData {
public:
  DilationData(CpMap kappa, Matrix omega);

  const CpMap& map() const { return kappa_; }
  const Matrix& omega() const { return omega_; }
  int ambient_dim() const { return static_cast<int>(omega_.rows()); }
  int projection_dim() const { return kappa_.output_dim(); }

  Matrix represent(const Matrix& a) const;
  /// P = diag(1_m, 0).
  Matrix projection() const;
  DilationBlocks blocks(const Matrix& a) const;

private:
  CpMap kappa_;
  Matrix omega_;
};

/// Rejects non-contractive maps, a defect 1 - kappa(1) with eigenvalues
/// below -1e-12, and completions that fail to be unitary within 1e-10.
DilationData dilation_build(const CpMap& kappa);

DilationBlocks block_decompose(const DilationData& d, const Matrix& a);

struct DefectResiduals {
  /// ||kappa(ab) - kappa(a)kappa(b) - pi12(a) pi21(b)||
  double product = 0.0;
  /// ||[P,pi(a)]^2 + diag(pi12(a)pi21(a), pi21(a)pi12(a))||
  double commutator_square = 0.0;
};

DefectResiduals defect_identity_residuals(const DilationData& d, const Matrix& a,
                                          const Matrix& b);

/// ||P pi(a) P - kappa(a) (+) 0||
double compression_residual(const DilationData& d, const Matrix& a);
/// ||pi(ab) - pi(a) pi(b)||
double homomorphism_residual(const DilationData& d, const Matrix& a, const Matrix& b);
/// ||pi(a^*) - pi(a)^*||
double adjoint_residual(const DilationData& d, const Matrix& a);

struct SquareRootVerdicts {
  SummabilityVerdict in_square_root;  // against exponent 2p
  SummabilityVerdict in_base;         // against exponent p
};

/// x lies in sqrt(L^p) iff x^*x lies in L^p iff x lies in L^{2p}; classifies
/// the singular values of x against both.
SquareRootVerdicts square_root_membership(std::span<const double> values, double p,
                                          std::size_t n_max,
                                          const SummabilityThresholds& thresholds = {});

/// Compression to the Hardy modes of w, x -> P x P, as a unital CP map
/// M_{dim w} -> M_{#Hardy modes} with a single Kraus operator.
CpMap hardy_compression_map(const Window& w);

struct DefectCommutatorEvidence {
  SingularSpectrum defect_spectrum;      // kappa(a^2) - kappa(a)^2
  SingularSpectrum commutator_spectrum;  // [P, pi(a)]
  SummabilityVerdict defect_verdict;     // at p, N_max = n_max
  SummabilityVerdict commutator_verdict; // at 2p, N_max = 2 n_max
  /// max relative deviation of S^C_{2N} from 2 S^D_N over the evidence points;
  /// each singular value of pi12(a) appears twice in the commutator.
  double evidence_mismatch = 0.0;
};

/// Classifies kappa(a^2) - kappa(a)^2 against L^p and [P, pi(a)] against
/// L^{2p} on matched evidence windows. a must be self-adjoint.
DefectCommutatorEvidence defect_commutator_evidence(const DilationData& d, const Matrix& a,
                                                    double p, std::size_t n_max);

}  // namespace oil
