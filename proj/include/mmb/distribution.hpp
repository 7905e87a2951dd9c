#pragma once

#include <cstddef>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace mmb {

/// Finite probability vector over outcomes 0..N-1.
///
/// Weights must be nonnegative and sum to one within 1e-12. Passing
/// Normalization::Renormalize rescales a positive-sum vector instead of
/// rejecting it.
class DiscreteDistribution {
 public:
  enum class Normalization { Reject, Renormalize };

  static constexpr double kSumTolerance = 1e-12;

  explicit DiscreteDistribution(std::vector<double> weights,
                                Normalization mode = Normalization::Reject);

  static DiscreteDistribution uniform(std::size_t n_outcomes);
  /// w_i proportional to 1/(i+1)^s.
  static DiscreteDistribution zipf(std::size_t n_outcomes, double s = 1.0);
  /// w_i proportional to p(1-p)^i, truncated to N outcomes.
  static DiscreteDistribution geometric(std::size_t n_outcomes, double p = 0.5);

  /// Parses "uniform:N", "zipf:N[:s]" or "geometric:N[:p]".
  static DiscreteDistribution from_family(const std::string& spec);

  /// Plain text, one weight per line, '#' starts a comment. The sum must be
  /// within 1e-9 of one unless renormalize is set.
  static DiscreteDistribution parse(std::istream& in, bool renormalize = false);
  static DiscreteDistribution load(const std::string& path, bool renormalize = false);

  std::span<const double> weights() const { return weights_; }
  std::size_t size() const { return weights_.size(); }
  double operator[](std::size_t i) const { return weights_[i]; }
  double max_weight() const;

 private:
  std::vector<double> weights_;
};

/// P(outcome unseen in n draws) = (1-w)^n, for w in (0, 1].
double occupancy_prob(double w, long long n);

struct MissingMassStats {
  long long n{0};
  double mean{0.0};
  /// sum_i w_i^2 q_i (1 - q_i), the variance with the Y_i treated as independent
  double variance{0.0};
  /// sum_i w_i q_i (1 - q_i)
  double weighted_variance{0.0};
};

MissingMassStats missing_mass_stats(const DiscreteDistribution& dist, long long n);

/// Variance of Y including the (non-positive) covariances of the Y_i;
/// never larger than MissingMassStats::variance. O(N^2).
double exact_missing_mass_variance(const DiscreteDistribution& dist, long long n);

/// Indices split by comparison with tau = a/n. Weights equal to tau go to the
/// small side.
struct ThresholdPartition {
  double a{0.0};
  double tau{0.0};
  long long n{0};
  std::vector<std::size_t> small_indices;
  std::vector<std::size_t> large_indices;
};

ThresholdPartition threshold_partition(const DiscreteDistribution& dist, double a, long long n);

/// Either w <= a/n or (1-w)^n <= e^{-a}.
bool satisfies_threshold_condition(double w, double a, long long n);

struct SplitWeights {
  std::vector<double> pieces;
  /// Original outcome index of each piece; pieces of one outcome are contiguous.
  std::vector<std::size_t> origin;
};

/// Splits each large weight w into k pieces, k = floor(w / tau): k-1 copies of
/// tau followed by the remainder, which lies in [tau, 2 tau).
SplitWeights split_large_weights(const ThresholdPartition& partition,
                                 const DiscreteDistribution& dist);

/// (a/n) e^{-a}: cap on sum w^2 q (1-q) over weights in [a/n, 2a/n).
double variance_upper_bound(double a, long long n);

}  // namespace mmb
