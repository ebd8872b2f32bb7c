#include "oil/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace oil {

SingularSpectrum singular_values(const Matrix& m, std::string label) {
  if (!m.allFinite()) {
    throw std::invalid_argument("singular_values: non-finite entries in " + label);
  }
  SingularSpectrum s;
  s.source_label = std::move(label);
  if (m.size() == 0) return s;
  Eigen::BDCSVD<Matrix> svd(m);
  const auto& sv = svd.singularValues();
  s.values.assign(sv.data(), sv.data() + sv.size());
  // Eigen already sorts; enforce it so the invariant never depends on the backend.
  std::sort(s.values.begin(), s.values.end(), std::greater<>());
  return s;
}

SingularSpectrum singular_values(const WindowedOperator& op) {
  std::ostringstream label;
  label << op.label << "@[" << op.window.lo << "," << op.window.hi << "]";
  return singular_values(op.entries, label.str());
}

double schatten_norm(std::span<const double> values, double p) {
  if (!(p > 0.0)) throw std::invalid_argument("schatten_norm: p must be positive");
  double acc = 0.0;
  for (double v : values) acc += std::pow(v, p);
  return std::pow(acc, 1.0 / p);
}

double schatten_norm(const SingularSpectrum& s, double p) { return schatten_norm(s.values, p); }

double decay_exponent(std::span<const double> values, std::size_t k_lo, std::size_t k_hi) {
  if (k_lo < 1) throw std::invalid_argument("decay_exponent: k_lo must be >= 1");
  if (k_hi > values.size()) throw std::invalid_argument("decay_exponent: k_hi beyond sequence");
  if (k_hi < k_lo + 8) throw std::invalid_argument("decay_exponent: need at least 8 samples");
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  const double n = static_cast<double>(k_hi - k_lo);
  for (std::size_t k = k_lo; k < k_hi; ++k) {
    if (!(values[k] > 0.0)) {
      throw std::invalid_argument("decay_exponent: nonpositive value at index " +
                                  std::to_string(k));
    }
    const double x = std::log(static_cast<double>(k));
    const double y = std::log(values[k]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  return -slope;
}

double decay_exponent(const SingularSpectrum& s, std::size_t k_lo, std::size_t k_hi) {
  return decay_exponent(s.values, k_lo, k_hi);
}

double partial_power_sum(std::span<const double> values, double p, std::size_t n) {
  if (n > values.size()) throw std::invalid_argument("partial_power_sum: N beyond sequence");
  double acc = 0.0;
  for (std::size_t k = 0; k < n; ++k) acc += std::pow(values[k], p);
  return acc;
}

double tail_doubling_ratio(std::span<const double> values, double p, std::size_t n) {
  if (2 * n > values.size()) throw std::invalid_argument("tail_doubling_ratio: 2N beyond sequence");
  const double s_n = partial_power_sum(values, p, n);
  if (s_n == 0.0) throw std::invalid_argument("tail_doubling_ratio: S_N is zero");
  return partial_power_sum(values, p, 2 * n) / s_n;
}

double dixmier_estimate(std::span<const double> values, std::size_t n) {
  if (n < 2) throw std::invalid_argument("dixmier_estimate: N must be >= 2");
  if (n > values.size()) throw std::invalid_argument("dixmier_estimate: N beyond sequence");
  return partial_power_sum(values, 1.0, n) / std::log(static_cast<double>(n));
}

double dixmier_estimate(const SingularSpectrum& s, std::size_t n) {
  return dixmier_estimate(s.values, n);
}

// ---------------------------------------------------------------------------

IdealSpec IdealSpec::schatten(double p) {
  if (!(p > 0.0)) throw std::invalid_argument("schatten ideal needs p > 0");
  IdealSpec s;
  s.kind_ = Kind::schatten;
  s.p_ = p;
  return s;
}

IdealSpec IdealSpec::dixmier(int n) {
  if (n < 1) throw std::invalid_argument("dixmier ideal needs n >= 1");
  IdealSpec s;
  s.kind_ = Kind::dixmier;
  s.n_ = n;
  return s;
}

IdealSpec IdealSpec::square_root_of(const IdealSpec& inner) {
  IdealSpec s;
  s.kind_ = Kind::square_root;
  s.inner_ = std::make_shared<const IdealSpec>(inner);
  return s;
}

const IdealSpec& IdealSpec::inner() const {
  if (!inner_) throw std::logic_error("IdealSpec::inner on a non-square-root ideal");
  return *inner_;
}

IdealSpec IdealSpec::resolved() const {
  if (kind_ != Kind::square_root) return *this;
  const IdealSpec base = inner_->resolved();
  if (base.kind_ == Kind::schatten) return schatten(2.0 * base.p_);
  return dixmier(2 * base.n_);
}

double IdealSpec::exponent() const {
  const IdealSpec r = resolved();
  return r.kind_ == Kind::schatten ? r.p_ : static_cast<double>(r.n_);
}

std::string IdealSpec::describe() const {
  std::ostringstream out;
  switch (kind_) {
    case Kind::schatten: out << "schatten(" << p_ << ")"; break;
    case Kind::dixmier: out << "dixmier(" << n_ << ")"; break;
    case Kind::square_root: out << "sqrt(" << inner_->describe() << ")"; break;
  }
  return out.str();
}

const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::summable: return "summable";
    case Verdict::divergent: return "divergent";
    case Verdict::inconclusive: return "inconclusive";
  }
  return "inconclusive";
}

bool is_power_of_two(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

SummabilityVerdict summability_classify(std::span<const double> values, const IdealSpec& spec,
                                        std::size_t n_max,
                                        const SummabilityThresholds& thresholds) {
  if (!is_power_of_two(n_max) || n_max < 4) {
    throw std::invalid_argument("summability_classify: N_max must be a power of two >= 4");
  }
  if (n_max > values.size()) {
    throw std::invalid_argument("summability_classify: N_max beyond sequence length");
  }
  const IdealSpec ideal = spec.resolved();
  const double exponent = ideal.exponent();
  const bool dixmier = ideal.kind() == IdealSpec::Kind::dixmier;
  if (dixmier && n_max < 8) {
    throw std::invalid_argument("summability_classify: logarithmic means need N_max >= 8");
  }

  SummabilityVerdict out;
  out.ideal = spec.describe();
  out.exponent = exponent;
  out.indices = {n_max / 4, n_max / 2, n_max};
  for (std::size_t n : out.indices) {
    const double s = partial_power_sum(values, exponent, n);
    out.sums.push_back(dixmier ? s / std::log(static_cast<double>(n)) : s);
  }

  const double s1 = out.sums[0], s2 = out.sums[1], s3 = out.sums[2];
  if (s2 == 0.0 && s3 == 0.0) {
    out.verdict = Verdict::summable;
    out.measured_exponent = 0.0;
    return out;
  }
  const double r1 = s1 > 0.0 ? s2 / s1 : INFINITY;
  const double r2 = s3 / s2;
  out.measured_exponent = std::log2(r2);

  if (r1 >= 1.0 + thresholds.divergence && r2 >= 1.0 + thresholds.divergence) {
    out.verdict = Verdict::divergent;
  } else if (s3 - s2 <= thresholds.summable * s2) {
    out.verdict = Verdict::summable;
  } else {
    out.verdict = Verdict::inconclusive;
  }
  return out;
}

}  // namespace oil
