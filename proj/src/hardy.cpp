#include "oil/hardy.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace oil {

namespace {

void require_same_window(const WindowedOperator& a, const WindowedOperator& b,
                         const char* what) {
  if (!(a.window == b.window)) {
    std::ostringstream msg;
    msg << what << ": window mismatch [" << a.window.lo << "," << a.window.hi
        << "] vs [" << b.window.lo << "," << b.window.hi << "]";
    throw std::invalid_argument(msg.str());
  }
}

void require_negative_modes(const Window& w, const char* what) {
  if (!w.has_negative_modes()) {
    std::ostringstream msg;
    msg << what << ": window [" << w.lo << "," << w.hi
        << "] has no negative modes";
    throw std::invalid_argument(msg.str());
  }
}

}  // namespace

// ---------------------------------------------------------------------------
// Symbol

Symbol Symbol::from_pairs(const std::vector<std::pair<int, cplx>>& pairs) {
  Symbol s;
  std::map<int, bool> seen;
  for (const auto& [degree, amplitude] : pairs) {
    if (seen.count(degree) != 0) {
      throw std::invalid_argument("duplicate symbol degree " + std::to_string(degree));
    }
    seen[degree] = true;
    if (amplitude != cplx(0.0)) s.coeffs_[degree] = amplitude;
  }
  return s;
}

Symbol Symbol::constant(cplx c) { return from_pairs({{0, c}}); }

Symbol Symbol::monomial(int degree, cplx c) { return from_pairs({{degree, c}}); }

cplx Symbol::coefficient(int degree) const {
  auto it = coeffs_.find(degree);
  return it == coeffs_.end() ? cplx(0.0) : it->second;
}

int Symbol::bandwidth() const {
  int b = 0;
  for (const auto& [degree, _] : coeffs_) b = std::max(b, std::abs(degree));
  return b;
}

bool Symbol::is_analytic() const {
  return coeffs_.empty() || coeffs_.begin()->first >= 0;
}

Symbol Symbol::operator+(const Symbol& other) const {
  Symbol s = *this;
  for (const auto& [degree, c] : other.coeffs_) {
    cplx v = s.coefficient(degree) + c;
    if (v == cplx(0.0)) {
      s.coeffs_.erase(degree);
    } else {
      s.coeffs_[degree] = v;
    }
  }
  return s;
}

Symbol Symbol::operator*(const Symbol& other) const {
  std::map<int, cplx> acc;
  for (const auto& [da, ca] : coeffs_) {
    for (const auto& [db, cb] : other.coeffs_) acc[da + db] += ca * cb;
  }
  Symbol s;
  for (const auto& [degree, c] : acc) {
    if (c != cplx(0.0)) s.coeffs_[degree] = c;
  }
  return s;
}

Symbol Symbol::operator*(cplx scale) const {
  Symbol s;
  if (scale == cplx(0.0)) return s;
  for (const auto& [degree, c] : coeffs_) s.coeffs_[degree] = c * scale;
  return s;
}

Symbol make_symbol(const std::vector<std::pair<int, cplx>>& pairs) {
  return Symbol::from_pairs(pairs);
}

Symbol symbol_product(const Symbol& a, const Symbol& b) { return a * b; }

Symbol symbol_conjugate(const Symbol& a) {
  std::vector<std::pair<int, cplx>> pairs;
  for (const auto& [degree, c] : a.coefficients()) pairs.emplace_back(-degree, std::conj(c));
  return Symbol::from_pairs(pairs);
}

Symbol symbol_rotate(const Symbol& a, double theta) {
  std::vector<std::pair<int, cplx>> pairs;
  for (const auto& [degree, c] : a.coefficients()) {
    pairs.emplace_back(degree, c * std::polar(1.0, degree * theta));
  }
  return Symbol::from_pairs(pairs);
}

// ---------------------------------------------------------------------------
// Windows and guard bands

Window make_window(int lo, int hi) {
  if (lo > hi) {
    throw std::invalid_argument("empty window [" + std::to_string(lo) + "," +
                                std::to_string(hi) + "]");
  }
  return Window{lo, hi};
}

GuardBlock guard_block(const Window& w, int depth, int bandwidth) {
  const int margin = depth * bandwidth;
  return GuardBlock{margin, w.dimension() - margin};
}

bool guard_valid(const Window& w, int depth, int bandwidth, int mode) {
  const int margin = depth * bandwidth;
  return w.lo + margin <= mode && mode <= w.hi - margin;
}

GuardBlock require_guard(const Window& w, int depth, int bandwidth) {
  GuardBlock block = guard_block(w, depth, bandwidth);
  if (block.empty()) {
    std::ostringstream msg;
    msg << "window [" << w.lo << "," << w.hi << "] has no guard-valid modes for depth "
        << depth << " and bandwidth " << bandwidth << "; need at least "
        << 2 * depth * bandwidth + 1 << " modes";
    throw std::invalid_argument(msg.str());
  }
  return block;
}

// ---------------------------------------------------------------------------
// WindowedOperator

WindowedOperator WindowedOperator::adjoint() const {
  return WindowedOperator{window, entries.adjoint(), label + "^*"};
}

WindowedOperator operator*(const WindowedOperator& a, const WindowedOperator& b) {
  require_same_window(a, b, "operator product");
  return WindowedOperator{a.window, a.entries * b.entries, a.label + "*" + b.label};
}

WindowedOperator operator+(const WindowedOperator& a, const WindowedOperator& b) {
  require_same_window(a, b, "operator sum");
  return WindowedOperator{a.window, a.entries + b.entries, a.label + "+" + b.label};
}

WindowedOperator operator-(const WindowedOperator& a, const WindowedOperator& b) {
  require_same_window(a, b, "operator difference");
  return WindowedOperator{a.window, a.entries - b.entries, a.label + "-" + b.label};
}

WindowedOperator identity_operator(const Window& w) {
  const int n = w.dimension();
  return WindowedOperator{w, Matrix::Identity(n, n), "1"};
}

WindowedOperator diagonal_operator(const Window& w, const std::vector<cplx>& diag,
                                   std::string label) {
  const int n = w.dimension();
  if (static_cast<int>(diag.size()) != n) {
    throw std::invalid_argument("diagonal length " + std::to_string(diag.size()) +
                                " does not match window dimension " + std::to_string(n));
  }
  Matrix m = Matrix::Zero(n, n);
  for (int i = 0; i < n; ++i) m(i, i) = diag[static_cast<std::size_t>(i)];
  return WindowedOperator{w, std::move(m), std::move(label)};
}

double guard_norm(const WindowedOperator& op, const GuardBlock& block) {
  if (block.empty()) return 0.0;
  return op.entries.block(block.begin, block.begin, block.size(), block.size()).norm();
}

double guard_norm(const WindowedOperator& op, int depth, int bandwidth) {
  return guard_norm(op, guard_block(op.window, depth, bandwidth));
}

double operator_norm(const Matrix& m) {
  if (m.size() == 0) return 0.0;
  Eigen::BDCSVD<Matrix> svd(m);
  return svd.singularValues()(0);
}

int numerical_rank(const Matrix& m, double rel_tol) {
  if (m.size() == 0) return 0;
  Eigen::BDCSVD<Matrix> svd(m);
  const auto& s = svd.singularValues();
  if (s(0) == 0.0) return 0;
  int rank = 0;
  for (Eigen::Index i = 0; i < s.size(); ++i) {
    if (s(i) > rel_tol * s(0)) ++rank;
  }
  return rank;
}

// ---------------------------------------------------------------------------
// Multiplication, projections, compressions

WindowedOperator multiplication_operator(const Symbol& a, const Window& w) {
  const int n = w.dimension();
  Matrix m = Matrix::Zero(n, n);
  // entry (j,k) = a_{j-k}
  for (const auto& [degree, c] : a.coefficients()) {
    for (int k = 0; k < n; ++k) {
      const int j = k + degree;
      if (j >= 0 && j < n) m(j, k) = c;
    }
  }
  return WindowedOperator{w, std::move(m), "M_a"};
}

WindowedOperator hardy_projection(const Window& w) {
  const int n = w.dimension();
  Matrix m = Matrix::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    if (w.mode_at(i) >= 0) m(i, i) = 1.0;
  }
  return WindowedOperator{w, std::move(m), "P"};
}

WindowedOperator complement_projection(const Window& w) {
  const int n = w.dimension();
  Matrix m = Matrix::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    if (w.mode_at(i) < 0) m(i, i) = 1.0;
  }
  return WindowedOperator{w, std::move(m), "P'"};
}

WindowedOperator toeplitz_compress(const Symbol& a, const Window& w) {
  const auto p = hardy_projection(w);
  WindowedOperator t = p * multiplication_operator(a, w) * p;
  t.label = "T_a";
  return t;
}

WindowedOperator hankel_operator(const Symbol& a, const Window& w) {
  require_negative_modes(w, "hankel_operator");
  WindowedOperator h = complement_projection(w) * multiplication_operator(a, w) *
                       hardy_projection(w);
  h.label = "H_a";
  return h;
}

WindowedOperator projection_commutator(const Symbol& a, const Window& w) {
  require_negative_modes(w, "projection_commutator");
  const auto p = hardy_projection(w);
  const auto m = multiplication_operator(a, w);
  WindowedOperator c = p * m - m * p;
  c.label = "[P,M_a]";
  return c;
}

SplittingDefect splitting_defect(const Symbol& a, const Symbol& b, const Window& w) {
  const GuardBlock guard = require_guard(w, 2, a.bandwidth() + b.bandwidth());
  const auto ta = toeplitz_compress(a, w);
  const auto tb = toeplitz_compress(b, w);
  WindowedOperator product = toeplitz_compress(a * b, w) - ta * tb;
  product.label = "T_ab-T_aT_b";
  WindowedOperator adj = toeplitz_compress(symbol_conjugate(a), w) - ta.adjoint();
  adj.label = "T_conj(a)-T_a^*";
  return SplittingDefect{std::move(product), std::move(adj), guard};
}

double rotation_equivariance_residual(const Symbol& a, double theta, const Window& w) {
  const int n = w.dimension();
  Matrix u = Matrix::Zero(n, n);
  for (int i = 0; i < n; ++i) u(i, i) = std::polar(1.0, w.mode_at(i) * theta);
  const Matrix lhs = toeplitz_compress(symbol_rotate(a, theta), w).entries;
  const Matrix rhs = u * toeplitz_compress(a, w).entries * u.adjoint();
  return operator_norm(lhs - rhs);
}

}  // namespace oil
