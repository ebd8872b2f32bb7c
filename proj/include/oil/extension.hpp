// Matrix-level arithmetic of Toeplitz extensions: the interleaving
// isometries realising M_2 (x) H = H, the sum of two extensions and the
// inverse-extension identity built from the symmetry U = [[P, P'], [P', P]].
#pragma once

#include "oil/hardy.hpp"
#include "oil/spectral.hpp"

#include <cstddef>

namespace oil {

/// V1 e_k = e_{2k}, V2 e_k = e_{2k+1} from an N-mode window [lo, hi] into the
/// doubled window [2lo, 2hi+1].
struct IsometryPair {
  Window reference;
  Window doubled;
  Matrix v1;  // 2N x N
  Matrix v2;  // 2N x N
};

IsometryPair interleaving_isometries(int n);
IsometryPair interleaving_isometries(const Window& reference);

/// Window of V1 A V1^* + V2 B V2^*.
Window doubled_window(const Window& w);

/// V1 A V1^* + V2 B V2^*.
WindowedOperator extension_sum(const WindowedOperator& a, const WindowedOperator& b);

/// The permutation exchanging modes 2k and 2k+1 on a doubled window; it
/// conjugates extension_sum(A, B) into extension_sum(B, A).
Matrix interleaving_swap(const Window& doubled);

/// (1-P) M_a (1-P). Requires negative modes.
WindowedOperator complement_compression(const Symbol& a, const Window& w);

struct InverseResiduals {
  double unitary = 0.0;     // ||U^2 - 1||
  double projection = 0.0;  // ||U P2 U - (1 (+) 0)||
  double identity = 0.0;    // ||(M_a (+) 0) - U P2 U (M_a (+) M_a) U P2 U|| on guard block
};

/// Builds U = [[P, P'], [P', P]] and P2 = P (+) P' on w (+) w. Requires a
/// guard-valid block for depth 3 and bandwidth(a).
InverseResiduals inverse_identity_residuals(const Symbol& a, const Window& w);

struct ToeplitzInvertibilityReport {
  IdealSpec ideal;
  SingularSpectrum commutator_spectrum;          // of [P, M_a]
  SummabilityVerdict commutator_verdict;
  SingularSpectrum inverse_commutator_spectrum;  // of [1-P, M_a]
  SummabilityVerdict inverse_commutator_verdict;
  InverseResiduals residuals;
  int commutator_rank = 0;
};

ToeplitzInvertibilityReport toeplitz_invertibility_report(const Symbol& a, const IdealSpec& spec,
                                                          const Window& w, std::size_t n_max);

}  // namespace oil
