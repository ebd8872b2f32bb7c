// Finite Fourier-window model of L^2(S^1) and the Hardy space H^2(S^1).
//
// A Window [lo, hi] is a contiguous block of Fourier modes z^k. Operators are
// dense complex matrices whose row/column index i corresponds to mode lo + i.
// Multiplication by a trigonometric polynomial is truncated at the window
// edges, so identities involving products of m multiplication operators with
// total symbol bandwidth B only hold on the guard-valid block
//
//     lo + m*B <= j, k <= hi - m*B.
//
// Every residual in this library is measured on that block.
#pragma once

#include <Eigen/Dense>

#include <complex>
#include <map>
#include <string>
#include <utility>
#include <vector>

namespace oil {

using cplx = std::complex<double>;
using Matrix = Eigen::MatrixXcd;

/// Trigonometric polynomial a(z) = sum_k c_k z^k with finite support.
class Symbol {
public:
  Symbol() = default;

  /// Builds a symbol from (degree, amplitude) pairs. Zero amplitudes are
  /// dropped; a repeated degree throws std::invalid_argument.
  static Symbol from_pairs(const std::vector<std::pair<int, cplx>>& pairs);

  static Symbol constant(cplx c);
  static Symbol monomial(int degree, cplx c = 1.0);

  cplx coefficient(int degree) const;
  const std::map<int, cplx>& coefficients() const { return coeffs_; }

  /// Largest |degree| carrying a nonzero amplitude; 0 for constants and zero.
  int bandwidth() const;
  bool is_zero() const { return coeffs_.empty(); }
  /// True when there are no strictly negative modes.
  bool is_analytic() const;

  Symbol operator+(const Symbol& other) const;
  Symbol operator*(const Symbol& other) const;
  Symbol operator*(cplx scale) const;
  bool operator==(const Symbol& other) const = default;

private:
  std::map<int, cplx> coeffs_;
};

Symbol make_symbol(const std::vector<std::pair<int, cplx>>& pairs);
Symbol symbol_product(const Symbol& a, const Symbol& b);
/// Coefficient at k becomes conj(c_{-k}), i.e. the pointwise conjugate on S^1.
Symbol symbol_conjugate(const Symbol& a);
/// (R_theta a)_k = e^{ik theta} a_k.
Symbol symbol_rotate(const Symbol& a, double theta);

struct Window {
  int lo = 0;
  int hi = 0;

  int dimension() const { return hi - lo + 1; }
  int index_of(int mode) const { return mode - lo; }
  int mode_at(int index) const { return lo + index; }
  bool contains(int mode) const { return lo <= mode && mode <= hi; }
  bool is_hardy_only() const { return lo >= 0; }
  bool has_negative_modes() const { return lo < 0; }

  bool operator==(const Window&) const = default;
};

/// Validates lo <= hi; throws std::invalid_argument otherwise.
Window make_window(int lo, int hi);

/// Half-open index range [begin, end) of guard-valid rows/columns.
struct GuardBlock {
  int begin = 0;
  int end = 0;
  bool empty() const { return end <= begin; }
  int size() const { return empty() ? 0 : end - begin; }
};

GuardBlock guard_block(const Window& w, int depth, int bandwidth);
bool guard_valid(const Window& w, int depth, int bandwidth, int mode);
/// Throws std::invalid_argument naming the smallest admissible window when
/// the guard-valid block is empty.
GuardBlock require_guard(const Window& w, int depth, int bandwidth);

struct WindowedOperator {
  Window window;
  Matrix entries;
  std::string label;

  int dimension() const { return window.dimension(); }
  cplx at_modes(int row_mode, int col_mode) const {
    return entries(window.index_of(row_mode), window.index_of(col_mode));
  }
  bool all_finite() const { return entries.allFinite(); }
  WindowedOperator adjoint() const;
};

WindowedOperator operator*(const WindowedOperator& a, const WindowedOperator& b);
WindowedOperator operator+(const WindowedOperator& a, const WindowedOperator& b);
WindowedOperator operator-(const WindowedOperator& a, const WindowedOperator& b);

WindowedOperator identity_operator(const Window& w);
/// Diagonal operator with the given entries on modes lo..hi.
WindowedOperator diagonal_operator(const Window& w, const std::vector<cplx>& diag,
                                   std::string label = "diag");

/// Frobenius norm of the guard-valid block of an operator.
double guard_norm(const WindowedOperator& op, int depth, int bandwidth);
double guard_norm(const WindowedOperator& op, const GuardBlock& block);
/// Spectral norm (largest singular value).
double operator_norm(const Matrix& m);

WindowedOperator multiplication_operator(const Symbol& a, const Window& w);
WindowedOperator hardy_projection(const Window& w);
WindowedOperator complement_projection(const Window& w);
WindowedOperator toeplitz_compress(const Symbol& a, const Window& w);
/// (1-P) M_a P. Requires negative modes in the window.
WindowedOperator hankel_operator(const Symbol& a, const Window& w);
/// P M_a - M_a P. Requires negative modes in the window.
WindowedOperator projection_commutator(const Symbol& a, const Window& w);

struct SplittingDefect {
  /// T_{ab} - T_a T_b
  WindowedOperator product_defect;
  /// T_{conj a} - (T_a)^*
  WindowedOperator adjoint_defect;
  GuardBlock guard;
};

/// Requires a guard-valid block for depth 2 and bandwidth(a) + bandwidth(b).
SplittingDefect splitting_defect(const Symbol& a, const Symbol& b, const Window& w);

/// Operator norm of tau(R_theta a) - U_theta tau(a) U_theta^*, with
/// U_theta = diag(e^{ik theta}).
double rotation_equivariance_residual(const Symbol& a, double theta, const Window& w);

/// Number of singular values above rel_tol times the largest one.
int numerical_rank(const Matrix& m, double rel_tol = 1e-10);

}  // namespace oil
