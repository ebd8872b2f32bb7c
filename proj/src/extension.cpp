#include "oil/extension.hpp"

#include <cmath>
#include <stdexcept>

namespace oil {

Window doubled_window(const Window& w) { return Window{2 * w.lo, 2 * w.hi + 1}; }

IsometryPair interleaving_isometries(const Window& reference) {
  const int n = reference.dimension();
  if (n < 1) throw std::invalid_argument("interleaving_isometries: N must be >= 1");
  IsometryPair out{reference, doubled_window(reference), Matrix::Zero(2 * n, n),
                   Matrix::Zero(2 * n, n)};
  // mode k sits at index k - lo; modes 2k and 2k+1 sit at 2(k - lo) and 2(k - lo) + 1
  for (int i = 0; i < n; ++i) {
    out.v1(2 * i, i) = 1.0;
    out.v2(2 * i + 1, i) = 1.0;
  }
  return out;
}

IsometryPair interleaving_isometries(int n) {
  if (n < 1) throw std::invalid_argument("interleaving_isometries: N must be >= 1");
  return interleaving_isometries(Window{0, n - 1});
}

WindowedOperator extension_sum(const WindowedOperator& a, const WindowedOperator& b) {
  if (!(a.window == b.window)) {
    throw std::invalid_argument("extension_sum: operands live on different windows");
  }
  const IsometryPair v = interleaving_isometries(a.window);
  return WindowedOperator{v.doubled,
                          v.v1 * a.entries * v.v1.adjoint() + v.v2 * b.entries * v.v2.adjoint(),
                          "(" + a.label + ")+(" + b.label + ")"};
}

Matrix interleaving_swap(const Window& doubled) {
  const int d = doubled.dimension();
  if (d % 2 != 0) throw std::invalid_argument("interleaving_swap: odd window dimension");
  Matrix s = Matrix::Zero(d, d);
  for (int i = 0; i < d; i += 2) {
    s(i, i + 1) = 1.0;
    s(i + 1, i) = 1.0;
  }
  return s;
}

WindowedOperator complement_compression(const Symbol& a, const Window& w) {
  if (!w.has_negative_modes()) {
    throw std::invalid_argument("complement_compression: window has no negative modes");
  }
  const auto q = complement_projection(w);
  WindowedOperator out = q * multiplication_operator(a, w) * q;
  out.label = "tau'(a)";
  return out;
}

namespace {

Matrix direct_sum(const Matrix& a, const Matrix& b) {
  Matrix out = Matrix::Zero(a.rows() + b.rows(), a.cols() + b.cols());
  out.topLeftCorner(a.rows(), a.cols()) = a;
  out.bottomRightCorner(b.rows(), b.cols()) = b;
  return out;
}

}  // namespace

InverseResiduals inverse_identity_residuals(const Symbol& a, const Window& w) {
  const GuardBlock guard = require_guard(w, 3, a.bandwidth());
  const int n = w.dimension();
  const Matrix p = hardy_projection(w).entries;
  const Matrix q = complement_projection(w).entries;
  const Matrix m = multiplication_operator(a, w).entries;

  Matrix u(2 * n, 2 * n);
  u << p, q, q, p;
  const Matrix p2 = direct_sum(p, q);
  const Matrix one_zero = direct_sum(Matrix::Identity(n, n), Matrix::Zero(n, n));
  const Matrix upu = u * p2 * u;

  InverseResiduals out;
  out.unitary = (u * u - Matrix::Identity(2 * n, 2 * n)).norm();
  out.projection = (upu - one_zero).norm();

  const Matrix diff = direct_sum(m, Matrix::Zero(n, n)) - upu * direct_sum(m, m) * upu;
  // guard-valid modes in each of the two summands
  const int b0 = guard.begin, len = guard.size();
  double acc = 0.0;
  for (int r = 0; r < 2; ++r) {
    for (int c = 0; c < 2; ++c) {
      acc += diff.block(r * n + b0, c * n + b0, len, len).squaredNorm();
    }
  }
  out.identity = std::sqrt(acc);
  return out;
}

ToeplitzInvertibilityReport toeplitz_invertibility_report(const Symbol& a, const IdealSpec& spec,
                                                          const Window& w, std::size_t n_max) {
  ToeplitzInvertibilityReport out{spec, {}, {}, {}, {}, {}, 0};
  out.residuals = inverse_identity_residuals(a, w);
  const WindowedOperator comm = projection_commutator(a, w);
  out.commutator_spectrum = singular_values(comm);
  out.commutator_verdict = summability_classify(out.commutator_spectrum.values, spec, n_max);
  out.commutator_rank = numerical_rank(comm.entries);

  const auto m = multiplication_operator(a, w);
  const auto q = complement_projection(w);
  WindowedOperator inverse_comm = q * m - m * q;
  inverse_comm.label = "[1-P,M_a]";
  out.inverse_commutator_spectrum = singular_values(inverse_comm);
  out.inverse_commutator_verdict =
      summability_classify(out.inverse_commutator_spectrum.values, spec, n_max);
  return out;
}

}  // namespace oil
