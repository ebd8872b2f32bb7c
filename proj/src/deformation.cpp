#include "oil/deformation.hpp"

#include "oil/random.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace oil {

const char* to_string(LambdaFamily family) {
  return family == LambdaFamily::paper_formula ? "paper_formula" : "pure_power";
}

LambdaFamily parse_family(std::string_view name) {
  if (name == "paper" || name == "paper_formula") return LambdaFamily::paper_formula;
  if (name == "power" || name == "pure_power") return LambdaFamily::pure_power;
  throw std::invalid_argument("unknown lambda family '" + std::string(name) + "'");
}

double chopping_gap(double t) {
  // 1 - t/r = (r - t)/r = 1/(r (r + t)) with r = sqrt(1 + t^2)
  const double r = std::hypot(1.0, t);
  return 1.0 / (r * (r + t));
}

std::vector<double> lambda_sequence(double eps, LambdaFamily family, std::size_t count) {
  if (!(eps > 0.0)) throw std::invalid_argument("lambda_sequence: eps must be positive");
  std::vector<double> out(count);
  for (std::size_t k = 0; k < count; ++k) {
    const double kd = static_cast<double>(k);
    out[k] = family == LambdaFamily::paper_formula ? chopping_gap(std::pow(kd, eps))
                                                   : std::pow(1.0 + kd, -eps);
  }
  return out;
}

namespace {

void require_hardy(const Window& w, const char* what) {
  if (!w.is_hardy_only()) {
    std::ostringstream msg;
    msg << what << ": window [" << w.lo << "," << w.hi << "] is not Hardy-only";
    throw std::invalid_argument(msg.str());
  }
}

/// Zero-extends a diagonal operator on Hardy modes to the window w.
Matrix embed_hardy_diagonal(const WindowedOperator& t, const Window& w) {
  if (!t.window.is_hardy_only() || !w.contains(t.window.lo) || !w.contains(t.window.hi)) {
    throw std::invalid_argument("deformation must live on Hardy modes inside the window");
  }
  const int n = t.dimension();
  if (!t.entries.isDiagonal(0.0) && n > 1) {
    throw std::invalid_argument("deformation operator must be diagonal");
  }
  Matrix out = Matrix::Zero(w.dimension(), w.dimension());
  for (int i = 0; i < n; ++i) {
    const int idx = w.index_of(t.window.mode_at(i));
    out(idx, idx) = t.entries(i, i);
  }
  return out;
}

}  // namespace

WindowedOperator deformation_operator(std::span<const double> lambda, const Window& w) {
  require_hardy(w, "deformation_operator");
  const int n = w.dimension();
  if (static_cast<int>(lambda.size()) <= w.hi) {
    throw std::invalid_argument("deformation_operator: sequence has " +
                                std::to_string(lambda.size()) + " entries, window needs " +
                                std::to_string(w.hi + 1));
  }
  std::vector<cplx> diag(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) diag[static_cast<std::size_t>(i)] = lambda[static_cast<std::size_t>(w.mode_at(i))];
  return diagonal_operator(w, diag, "T");
}

WindowedOperator signed_deformation_from_order(double eps, const Window& w) {
  require_hardy(w, "signed_deformation_from_order");
  const auto lambda = lambda_sequence(eps, LambdaFamily::paper_formula,
                                      static_cast<std::size_t>(w.hi) + 1);
  std::vector<cplx> diag;
  diag.reserve(static_cast<std::size_t>(w.dimension()));
  for (int k = w.lo; k <= w.hi; ++k) diag.emplace_back(-lambda[static_cast<std::size_t>(k)]);
  return diagonal_operator(w, diag, "T_eps");
}

double quadratic_identity_residual(double eps, const Window& w) {
  const WindowedOperator t = signed_deformation_from_order(eps, w);
  const WindowedOperator p = hardy_projection(w);
  // All three operators are diagonal; the products reduce to the diagonals.
  const Eigen::VectorXcd q = t.entries.diagonal() + p.entries.diagonal();
  double worst = 0.0;
  for (int i = 0; i < w.dimension(); ++i) {
    const double k = static_cast<double>(w.mode_at(i));
    const double resolvent = 1.0 / (1.0 + std::pow(k, 2.0 * eps));
    const cplx r = q(i) * q(i) - p.entries(i, i) + resolvent;
    worst = std::max(worst, std::abs(r));
  }
  return worst;
}

double chopping_asymptotic_bound(std::size_t k, std::size_t count) {
  if (k < 1) throw std::invalid_argument("chopping_asymptotic_bound: K must be >= 1");
  double best = 0.0;
  for (std::size_t i = 0; i < count; ++i) {
    const double t = static_cast<double>(k + i);
    best = std::max(best, t * t * chopping_gap(t));
  }
  return best;
}

WindowedOperator deformed_compression(const WindowedOperator& t, const Symbol& a, const Window& w) {
  require_guard(w, 3, a.bandwidth());
  const Matrix q = hardy_projection(w).entries + embed_hardy_diagonal(t, w);
  return WindowedOperator{w, q * multiplication_operator(a, w).entries * q, "tau_T(a)"};
}

WindowedOperator deformation_defect(const WindowedOperator& t, const Symbol& a, const Symbol& b,
                                    const Window& w) {
  const Matrix q = hardy_projection(w).entries + embed_hardy_diagonal(t, w);
  const Matrix ma = multiplication_operator(a, w).entries;
  const Matrix mb = multiplication_operator(b, w).entries;
  const Matrix mab = multiplication_operator(a * b, w).entries;
  const Matrix q2 = q * q;
  return WindowedOperator{w, q * mab * q - q * ma * q2 * mb * q, "tau_T(ab)-tau_T(a)tau_T(b)"};
}

double deformation_defect_residuals(const WindowedOperator& t, const Symbol& a, const Symbol& b,
                                    const Window& w) {
  const int bandwidth = a.bandwidth() + b.bandwidth();
  const GuardBlock guard = require_guard(w, 4, bandwidth);
  const Matrix p = hardy_projection(w).entries;
  const Matrix q = p + embed_hardy_diagonal(t, w);
  const Matrix ma = multiplication_operator(a, w).entries;
  const Matrix mb = multiplication_operator(b, w).entries;
  const Matrix mab = multiplication_operator(a * b, w).entries;
  const Matrix q2 = q * q;
  const Matrix q3 = q2 * q;

  const Matrix defect = q * mab * q - q * ma * q2 * mb * q;
  const Matrix term1 = mab * q2 * (p - q2);
  const Matrix term2 = (q * mab - mab * q) * q;
  const Matrix term3 = q * ma * (mb * q2 - q2 * mb) * q;
  const Matrix term4 = (mab * q - q * mab) * q3;

  const WindowedOperator residual{w, defect - (term1 + term2 + term3 + term4), "expansion"};
  return guard_norm(residual, guard);
}

double shift_compression_residual(std::span<const double> lambda, int n) {
  if (n < 1) throw std::invalid_argument("shift_compression_residual: n must be >= 1");
  const Window w{-3, n + 3};
  const Window hardy{0, n + 3};
  const WindowedOperator t = deformation_operator(lambda, hardy);
  const WindowedOperator image = deformed_compression(t, Symbol::monomial(1), w);

  Matrix expected = Matrix::Zero(w.dimension(), w.dimension());
  for (int k = 0; k < n + 3; ++k) {
    const double lk = lambda[static_cast<std::size_t>(k)];
    const double lk1 = lambda[static_cast<std::size_t>(k + 1)];
    expected(w.index_of(k + 1), w.index_of(k)) = 1.0 + lk1 + lk + lk * lk1;
  }
  const GuardBlock g = guard_block(w, 3, 1);
  return (image.entries - expected).block(g.begin, g.begin, g.size(), g.size()).cwiseAbs().maxCoeff();
}

WindowedOperator haar_unitary(int dim, std::uint64_t seed) {
  if (dim < 1) throw std::invalid_argument("haar_unitary: dim must be >= 1");
  const Matrix g = random_gaussian(dim, dim, seed);
  Eigen::HouseholderQR<Matrix> qr(g);
  Matrix q = qr.householderQ();
  const Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int j = 0; j < dim; ++j) {
    const cplx d = r(j, j);
    const double mag = std::abs(d);
    if (mag > 0.0) q.col(j) *= d / mag;
  }
  return WindowedOperator{Window{0, dim - 1}, std::move(q), "U"};
}

// ---------------------------------------------------------------------------

void validate(const DeformationParams& params) {
  if (!(params.epsilon > 0.0)) throw std::invalid_argument("eps must be positive");
  if (!(params.p >= 1.0)) throw std::invalid_argument("p must be >= 1");
  if (params.modes < 1) throw std::invalid_argument("modes must be >= 1");
  if (params.ambient < params.modes + 2) {
    throw std::invalid_argument("ambient dimension M=" + std::to_string(params.ambient) +
                                " must be at least N+2=" + std::to_string(params.modes + 2));
  }
}

LemmaTrial lemma_trial(std::span<const double> lambda, const Matrix& u, int ambient, double p) {
  const int n = static_cast<int>(u.rows());
  const int m = ambient;
  if (u.cols() != n) throw std::invalid_argument("lemma_trial: unitary must be square");
  if (m < n + 2) throw std::invalid_argument("lemma_trial: M must be at least N+2");
  if (static_cast<int>(lambda.size()) < m) {
    throw std::invalid_argument("lemma_trial: lambda shorter than the ambient window");
  }

  Matrix big_u = Matrix::Identity(m, m);
  big_u.topLeftCorner(n, n) = u;
  Matrix shift = Matrix::Zero(m, m);
  for (int k = 0; k + 1 < m; ++k) shift(k + 1, k) = 1.0;
  Matrix q = Matrix::Zero(m, m);
  for (int k = 0; k < m; ++k) q(k, k) = 1.0 + lambda[static_cast<std::size_t>(k)];

  const Matrix compressed = big_u.adjoint() * shift * big_u;  // U^* PaP U
  const Matrix deformed = q * shift * q;                      // (P+T) a (P+T)
  const Matrix l = compressed - deformed;
  const Matrix ltl = l.adjoint() * l;

  const Matrix s1 = compressed.adjoint() * compressed;
  const Matrix s2 = deformed.adjoint() * deformed;
  const Matrix s3 = deformed.adjoint() * compressed;
  const Matrix s4 = compressed.adjoint() * deformed;

  LemmaTrial out;
  out.gaps.resize(static_cast<std::size_t>(n));
  out.s1_diag.resize(static_cast<std::size_t>(n));
  out.s2_diag.resize(static_cast<std::size_t>(n));
  out.s3_diag.resize(static_cast<std::size_t>(n));
  out.min_gap = std::numeric_limits<double>::infinity();
  for (int k = 0; k < n; ++k) {
    const auto ks = static_cast<std::size_t>(k);
    const double lk = lambda[ks];
    const double lk1 = lambda[ks + 1];
    const double c = 1.0 + lk1 + lk + lk * lk1;

    out.gaps[ks] = ltl(k, k).real() - lk * lk;
    out.min_gap = std::min(out.min_gap, out.gaps[ks]);

    out.s1_diag[ks] = s1(k, k).real();
    out.s2_diag[ks] = s2(k, k).real();
    out.s3_diag[ks] = s3(k, k);
    out.s1_residual = std::max(out.s1_residual, std::abs(s1(k, k) - 1.0));
    out.s2_residual = std::max(out.s2_residual, std::abs(s2(k, k) - c * c));
    // <a f_k, f_{k+1}> with f_j = U e_j
    const cplx overlap = big_u.col(k + 1).dot(shift * big_u.col(k));
    out.s3_residual = std::max(out.s3_residual, std::abs(s3(k, k) - c * overlap));
  }
  out.expansion_residual = (ltl - (s1 + s2 - s3 - s4)).norm();
  out.lhs_norm = schatten_norm(singular_values(l, "L"), p);
  return out;
}

double LemmaReport::min_gap() const {
  double g = std::numeric_limits<double>::infinity();
  for (const auto& t : trials) g = std::min(g, t.min_gap);
  return g;
}

double LemmaReport::min_norm_margin() const {
  double g = std::numeric_limits<double>::infinity();
  for (const auto& t : trials) g = std::min(g, t.lhs_norm - rhs_norm);
  return g;
}

double LemmaReport::max_s_residual() const {
  double r = 0.0;
  for (const auto& t : trials) r = std::max({r, t.s1_residual, t.s2_residual, t.s3_residual});
  return r;
}

bool LemmaReport::holds(double gap_tol, double s_tol) const {
  return !trials.empty() && min_gap() >= -gap_tol && min_norm_margin() >= -gap_tol &&
         max_s_residual() <= s_tol;
}

LemmaReport lemma_lower_bound_report(const DeformationParams& params, int trials) {
  validate(params);
  if (trials < 1) throw std::invalid_argument("lemma_lower_bound_report: trials must be >= 1");
  LemmaReport report;
  report.params = params;
  report.lambda = lambda_sequence(params.epsilon, params.family,
                                  static_cast<std::size_t>(params.ambient));
  report.rhs_norm = schatten_norm(
      std::span<const double>(report.lambda).first(static_cast<std::size_t>(params.modes)),
      params.p);
  report.trials.reserve(static_cast<std::size_t>(trials));
  for (int t = 0; t < trials; ++t) {
    const std::uint64_t seed = params.seed ^ static_cast<std::uint64_t>(t);
    const WindowedOperator u = haar_unitary(params.modes, seed);
    LemmaTrial trial = lemma_trial(report.lambda, u.entries, params.ambient, params.p);
    trial.seed = seed;
    report.trials.push_back(std::move(trial));
  }
  return report;
}

// ---------------------------------------------------------------------------

SweepReport epsilon_sweep(double p, const std::vector<double>& grid, LambdaFamily family,
                          std::size_t n_max, bool with_lemma, std::uint64_t seed) {
  if (!(p >= 1.0)) throw std::invalid_argument("sweep: p must be >= 1");
  if (!is_power_of_two(n_max) || n_max < 16) {
    throw std::invalid_argument("sweep: N_max must be a power of two >= 16");
  }
  if (grid.empty()) throw std::invalid_argument("sweep: empty epsilon grid");
  const double upper = 2.0 / p;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (!(grid[i] > 0.0) || grid[i] > upper * (1.0 + 1e-12)) {
      std::ostringstream msg;
      msg << "sweep: eps=" << grid[i] << " outside (0, " << upper << "]";
      throw std::invalid_argument(msg.str());
    }
    if (i > 0 && !(grid[i] > grid[i - 1])) {
      throw std::invalid_argument("sweep: epsilon grid must be strictly increasing");
    }
  }

  SweepReport report;
  report.p = p;
  report.family = family;
  report.n_max = n_max;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double eps = grid[i];
    const auto lambda = lambda_sequence(eps, family, n_max);
    SweepPoint pt;
    pt.epsilon = eps;
    pt.measured_exponent = decay_exponent(lambda, n_max / 4, n_max / 2);
    pt.stated_exponent = eps;
    pt.expansion_exponent = family == LambdaFamily::paper_formula ? 2.0 * eps : eps;

    double acc = 0.0;
    std::size_t next = 1;
    for (std::size_t k = 0; k < n_max; ++k) {
      acc += std::pow(lambda[k], p);
      if (k + 1 == next) {
        pt.doubling_indices.push_back(next);
        pt.partial_sums.push_back(acc);
        next *= 2;
      }
    }
    const std::size_t last = pt.partial_sums.size() - 1;
    pt.doubling_ratio = pt.partial_sums[last] / pt.partial_sums[last - 1];
    pt.at_p = summability_classify(lambda, IdealSpec::schatten(p), n_max);
    pt.at_2p = summability_classify(lambda, IdealSpec::schatten(2.0 * p), n_max);
    if (with_lemma) {
      DeformationParams params;
      params.epsilon = eps;
      params.p = p;
      params.family = family;
      params.modes = 32;
      params.ambient = 34;
      params.seed = seed ^ static_cast<std::uint64_t>(i);
      pt.lemma = lemma_lower_bound_report(params, 4);
    }
    report.points.push_back(std::move(pt));
  }

  for (const auto& a : report.points) {
    for (const auto& b : report.points) {
      if (std::abs(b.epsilon - (a.epsilon + 1.0 / p)) <= 1e-9) {
        report.pairs.push_back(SweepPair{a.epsilon, b.epsilon,
                                         a.at_p.verdict == Verdict::divergent &&
                                             b.at_p.verdict == Verdict::summable});
      }
    }
  }
  return report;
}

}  // namespace oil
