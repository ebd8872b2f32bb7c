// Singular-value analytics: Schatten norms, logarithmic means, power-law
// decay fits and partial-sum growth tests used as the operational stand-in
// for operator-ideal membership.
#pragma once

#include "oil/hardy.hpp"

#include <cstddef>
#include <memory>
#include <span>
#include <string>
#include <vector>

namespace oil {

struct SingularSpectrum {
  std::vector<double> values;  // descending, nonnegative
  std::string source_label;

  std::size_t size() const { return values.size(); }
};

SingularSpectrum singular_values(const WindowedOperator& op);
SingularSpectrum singular_values(const Matrix& m, std::string label = "matrix");

/// (sum mu_k^p)^{1/p}; p must be positive.
double schatten_norm(const SingularSpectrum& s, double p);
double schatten_norm(std::span<const double> values, double p);

/// Least-squares slope of log mu_k against log k over the half-open index
/// range [k_lo, k_hi), returned as the positive decay rate alpha
/// (mu_k ~ k^{-alpha}). Needs k_lo >= 1, at least 8 samples and positive
/// values throughout.
double decay_exponent(std::span<const double> values, std::size_t k_lo, std::size_t k_hi);
double decay_exponent(const SingularSpectrum& s, std::size_t k_lo, std::size_t k_hi);

/// S_N = sum_{k<N} values_k^p.
double partial_power_sum(std::span<const double> values, double p, std::size_t n);

/// S_{2N} / S_N.
double tail_doubling_ratio(std::span<const double> values, double p, std::size_t n);

/// (sum_{k<N} mu_k) / ln N.
double dixmier_estimate(std::span<const double> values, std::size_t n);
double dixmier_estimate(const SingularSpectrum& s, std::size_t n);

// ---------------------------------------------------------------------------
// Ideal descriptions

class IdealSpec {
public:
  enum class Kind { schatten, dixmier, square_root };

  static IdealSpec schatten(double p);
  static IdealSpec dixmier(int n);
  static IdealSpec square_root_of(const IdealSpec& inner);

  Kind kind() const { return kind_; }
  /// For square_root: the wrapped ideal.
  const IdealSpec& inner() const;

  /// Collapses nested square roots: sqrt(L^p) = L^{2p}, sqrt(L^{n+}) = L^{2n+}.
  IdealSpec resolved() const;
  /// Summation exponent of the resolved ideal (p for Schatten, n for Dixmier).
  double exponent() const;
  std::string describe() const;

private:
  Kind kind_ = Kind::schatten;
  double p_ = 1.0;
  int n_ = 1;
  std::shared_ptr<const IdealSpec> inner_;
};

enum class Verdict { summable, divergent, inconclusive };

const char* to_string(Verdict v);

struct SummabilityThresholds {
  double divergence = 0.05;  // delta_div
  double summable = 0.01;    // delta_sum
};

struct SummabilityVerdict {
  Verdict verdict = Verdict::inconclusive;
  /// log2 of the last doubling ratio: the local growth exponent of the
  /// partial sums (0 for a convergent tail, 1 - p*beta for k^{-beta}).
  double measured_exponent = 0.0;
  std::string ideal;
  double exponent = 0.0;
  /// Evidence points N_max/4, N_max/2, N_max.
  std::vector<std::size_t> indices;
  /// Partial sums (Schatten) or logarithmic means (Dixmier) at indices.
  std::vector<double> sums;
};

/// Classifies a nonnegative sequence against an ideal from partial sums at
/// N_max/4, N_max/2 and N_max. N_max must be a power of two, at least 4, and
/// no longer than the sequence.
///
/// Schatten-type ideals, with r_i the two doubling ratios:
///   divergent    if r_1 >= 1 + delta_div and r_2 >= 1 + delta_div
///   summable     if S_{N_max} - S_{N_max/2} <= delta_sum * S_{N_max/2}
///   inconclusive otherwise.
/// Dixmier ideals apply the same rule to the logarithmic means of mu^n,
/// where "summable" means the mean has stopped growing.
SummabilityVerdict summability_classify(std::span<const double> values, const IdealSpec& spec,
                                        std::size_t n_max,
                                        const SummabilityThresholds& thresholds = {});

bool is_power_of_two(std::size_t n);

}  // namespace oil
