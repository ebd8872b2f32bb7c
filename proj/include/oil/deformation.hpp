// Linear deformations P -> P + T of the Hardy-space Toeplitz extension.
//
// T is diagonal on the Hardy modes. Two eigenvalue families are supported:
//
//   paper_formula  lambda_k = 1 - k^eps (1 + k^{2 eps})^{-1/2}   (~ k^{-2 eps} / 2)
//   pure_power     lambda_k = (1 + k)^{-eps}
//
// The first is the sequence obtained from K = |d/dtheta|^eps; the second
// realises an exact |k|^{-eps} rate. Reports always name the family.
#pragma once

#include "oil/hardy.hpp"
#include "oil/spectral.hpp"

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace oil {

enum class LambdaFamily { paper_formula, pure_power };

const char* to_string(LambdaFamily family);
/// Accepts "paper", "paper_formula", "power", "pure_power".
LambdaFamily parse_family(std::string_view name);

/// lambda_0, ..., lambda_{count-1}; eps must be positive.
std::vector<double> lambda_sequence(double eps, LambdaFamily family, std::size_t count);

/// 1 - t (1 + t^2)^{-1/2}, evaluated without cancellation for large t.
double chopping_gap(double t);

/// diag(lambda_k) on a Hardy-only window.
WindowedOperator deformation_operator(std::span<const double> lambda, const Window& w);

/// diag(k^eps (1 + k^{2eps})^{-1/2} - 1) = -lambda_{k,eps} on a Hardy-only
/// window: the operator P(K(1+K^2)^{-1/2} - 1)P with K = |d/dtheta|^eps.
WindowedOperator signed_deformation_from_order(double eps, const Window& w);

/// ||(T+P)^2 - P + diag((1 + k^{2eps})^{-1})|| for T = signed_deformation_from_order.
double quadratic_identity_residual(double eps, const Window& w);

/// max over t = K, ..., K+count-1 of t^2 (1 - t(1+t^2)^{-1/2}).
double chopping_asymptotic_bound(std::size_t k, std::size_t count);

/// (P+T) M_a (P+T) on w. T must be diagonal, supported on Hardy modes, and
/// live on a window contained in w; it is zero-extended to w. Requires a
/// guard-valid block for depth 3 and bandwidth(a).
WindowedOperator deformed_compression(const WindowedOperator& t, const Symbol& a, const Window& w);

/// Residual on the guard block (depth 4, bandwidth(a)+bandwidth(b)) of
///   tau_T(ab) - tau_T(a) tau_T(b) - [ pi(ab)Q^2(P-Q^2) + [Q,pi(ab)]Q
///                                    + Q pi(a)[pi(b),Q^2]Q + [pi(ab),Q]Q^3 ],  Q = P+T.
double deformation_defect_residuals(const WindowedOperator& t, const Symbol& a, const Symbol& b,
                                    const Window& w);

/// tau_T(ab) - tau_T(a) tau_T(b) on w (no guard check).
WindowedOperator deformation_defect(const WindowedOperator& t, const Symbol& a, const Symbol& b,
                                    const Window& w);

/// Max deviation, over the guard-valid block of the window [-3, n+3], between
/// (P+T) z (P+T) and the shift with weights 1 + lambda_{k+1} + lambda_k +
/// lambda_k lambda_{k+1}; T = diag(lambda) with lambda of length >= n+4.
double shift_compression_residual(std::span<const double> lambda, int n);

/// Haar unitary of size dim from a phase-normalised QR of a Gaussian matrix.
WindowedOperator haar_unitary(int dim, std::uint64_t seed);

// ---------------------------------------------------------------------------
// Unitary lower bound for a = z

struct DeformationParams {
  double epsilon = 0.4;
  double p = 2.0;
  LambdaFamily family = LambdaFamily::paper_formula;
  int modes = 128;    // N, probe modes
  int ambient = 130;  // M >= N + 2
  std::uint64_t seed = 42;
};

/// Throws std::invalid_argument unless eps > 0, p >= 1, N >= 1 and M >= N+2.
void validate(const DeformationParams& params);

struct LemmaTrial {
  std::uint64_t seed = 0;
  /// g_k = <L^*L e_k, e_k> - lambda_k^2, k < N.
  std::vector<double> gaps;
  /// Diagonals <S_i e_k, e_k>, k < N.
  std::vector<double> s1_diag;
  std::vector<double> s2_diag;
  std::vector<cplx> s3_diag;
  double min_gap = 0.0;
  double lhs_norm = 0.0;  // ||L||_p over the ambient window
  double s1_residual = 0.0;  // max |<S_1 e_k,e_k> - 1|
  double s2_residual = 0.0;  // max |<S_2 e_k,e_k> - c_k^2|
  double s3_residual = 0.0;  // max |<S_3 e_k,e_k> - c_k <a f_k, f_{k+1}>|
  double expansion_residual = 0.0;  // ||L^*L - (S_1 + S_2 - S_3 - S_4)||_F
};

struct LemmaReport {
  DeformationParams params;
  std::vector<double> lambda;  // lambda_0 .. lambda_{M-1}
  double rhs_norm = 0.0;       // (sum_{k<N} lambda_k^p)^{1/p}
  std::vector<LemmaTrial> trials;

  double min_gap() const;
  /// min over trials of lhs_norm - rhs_norm.
  double min_norm_margin() const;
  double max_s_residual() const;
  bool holds(double gap_tol = 1e-9, double s_tol = 1e-10) const;
};

/// One trial of the bound on the Hardy window [0, M-1] with the unitary
/// u (N x N) extended by the identity: L = U^* S U - (1+T) S (1+T), S the
/// truncated shift. lambda must have length >= M.
LemmaTrial lemma_trial(std::span<const double> lambda, const Matrix& u, int ambient, double p);

LemmaReport lemma_lower_bound_report(const DeformationParams& params, int trials);

// ---------------------------------------------------------------------------
// epsilon sweep

struct SweepPoint {
  double epsilon = 0.0;
  /// Fitted over [N_max/4, N_max/2).
  double measured_exponent = 0.0;
  /// The |k|^{-eps} rate claimed for the deformation sequence.
  double stated_exponent = 0.0;
  /// Rate from expanding the family's formula (2 eps for paper_formula).
  double expansion_exponent = 0.0;
  /// S_N = sum_{k<N} lambda_k^p at N = 1, 2, 4, ..., N_max.
  std::vector<std::size_t> doubling_indices;
  std::vector<double> partial_sums;
  double doubling_ratio = 0.0;  // S_{N_max} / S_{N_max/2} at exponent p
  SummabilityVerdict at_p;
  SummabilityVerdict at_2p;
  std::optional<LemmaReport> lemma;
};

struct SweepPair {
  double epsilon = 0.0;
  double shifted = 0.0;  // epsilon + 1/p
  /// lambda at epsilon divergent at p and lambda at epsilon + 1/p summable at p.
  bool distinct = false;
};

struct SweepReport {
  double p = 2.0;
  LambdaFamily family = LambdaFamily::paper_formula;
  std::size_t n_max = 0;
  std::vector<SweepPoint> points;
  std::vector<SweepPair> pairs;
};

/// Grid must be strictly increasing inside (0, 2/p]; N_max a power of two >= 16.
SweepReport epsilon_sweep(double p, const std::vector<double>& grid, LambdaFamily family,
                          std::size_t n_max, bool with_lemma, std::uint64_t seed = 42);

}  // namespace oil
