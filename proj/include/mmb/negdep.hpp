#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "mmb/distribution.hpp"

namespace mmb {

/// Real random variable with finitely many atoms.
class FiniteRandomVariable {
 public:
  FiniteRandomVariable(std::vector<double> support, std::vector<double> probs);

  std::span<const double> support() const { return support_; }
  std::span<const double> probs() const { return probs_; }
  std::size_t size() const { return support_.size(); }
  double mean() const;
  double max_value() const;
  double min_value() const;
  /// log E[exp(lambda X)], evaluated by log-sum-exp.
  double log_mgf(double lambda) const;
  /// Law tilted by exp(lambda x) / Z(lambda).
  std::vector<double> tilted_probs(double lambda) const;

 private:
  std::vector<double> support_;
  std::vector<double> probs_;
};

/// Disjoint nonempty index groups covering 0..size-1.
struct PartitionSpec {
  std::vector<std::vector<std::size_t>> groups;

  static PartitionSpec identity(std::size_t size);
  static PartitionSpec single_group(std::size_t size);
  /// Throws std::invalid_argument unless the groups exactly cover 0..size-1.
  void validate(std::size_t size) const;
};

/// Group masses p^G_j = sum_{i in G_j} p_i.
std::vector<double> coarsen(std::span<const double> p, const PartitionSpec& partition);

/// KL(p || q) with 0 log(0/q) = 0. Throws std::domain_error when p_i > 0 = q_i.
double kl_divergence(std::span<const double> p, std::span<const double> q);

struct ChernoffEntropy {
  double value{0.0};
  /// Maximizing lambda; infinite when the supremum is only approached.
  double lambda{0.0};
  bool infinite{false};
};

/// sup_{lambda >= 0} lambda eps - log E[e^{lambda X}].
ChernoffEntropy chernoff_entropy(const FiniteRandomVariable& x, double epsilon);

struct DeviationCheck {
  double probability{0.0};  ///< P(X >= eps)
  double entropy{0.0};
  double bound{1.0};  ///< exp(-entropy)
  bool holds{true};
};

DeviationCheck deviation_vs_entropy_check(const FiniteRandomVariable& x, double epsilon);

struct PartitioningCheck {
  double entropy{0.0};           ///< S(X, eps) = KL(p_lambda || p) at the optimal lambda
  double kl_tilted_full{0.0};    ///< KL(p_lambda || p), recomputed from the tilted law
  double kl_tilted_coarse{0.0};  ///< KL(p_lambda^G || p^G)
  bool holds{true};
};

/// Checks that grouping atoms cannot increase the entropy term:
/// KL(p_lambda^G || p^G) <= S(X, eps) with lambda the optimizer for X.
PartitioningCheck partitioning_check(const FiniteRandomVariable& x, const PartitionSpec& partition,
                                     double epsilon);

struct InfoMonotonicity {
  double kl_full{0.0};
  double kl_coarse{0.0};
  bool holds{true};
};

InfoMonotonicity info_monotonicity_check(const DiscreteDistribution& p,
                                         const DiscreteDistribution& q,
                                         const PartitionSpec& partition);

/// Law of a count vector as a weighted list of outcomes (rows of `values`).
struct CountLaw {
  std::size_t bins{0};
  std::vector<double> values;  ///< row-major, rows x bins
  std::vector<double> probs;

  std::size_t rows() const { return probs.size(); }
  double at(std::size_t row, std::size_t bin) const { return values[row * bins + bin]; }
};

inline constexpr std::size_t kMaxEnumeratedOutcomes = 2'000'000;

/// Enumerates the multinomial(n, w) law of the counts C_1..C_N.
/// Throws std::length_error past kMaxEnumeratedOutcomes outcomes.
CountLaw multinomial_count_law(std::span<const double> weights, long long n);

struct NaReport {
  long long instances{0};  ///< (block pair, f, g) combinations tested
  long long violations{0};
  /// Largest E[fg] - E[f]E[g]; positive values beyond 1e-12 are violations.
  double max_residual{-1.0};
  /// Largest |Cov(C_i, C_j) + n w_i w_j|; only set by multinomial_na_check.
  double covariance_error{0.0};
  bool holds() const { return violations == 0; }
};

/// Monotone-pair inequality E[f(C_A) g(C_B)] <= E[f] E[g] over disjoint
/// blocks A, B. f and g are both non-decreasing (block sums, maxima,
/// threshold indicators, random staircases) or both non-increasing
/// (unseen-indicators and block missing mass). All block pairs are tried for
/// up to 6 bins; beyond that a seeded sample of pairs is used.
NaReport na_battery(const CountLaw& law, std::uint64_t seed = 1);

/// Covariance identity plus the battery on multinomial counts.
NaReport multinomial_na_check(const DiscreteDistribution& dist, long long n,
                              std::uint64_t seed = 1);

enum class TransformKind { Split, Merge, Absorb };

struct SplitParams {
  std::size_t bin{0};
  /// Positive masses summing to the bin's weight.
  std::vector<double> parts;
};

struct AbsorbParams {
  std::size_t bin{0};
  /// Constant added to every absorbed count.
  double shift{1.0};
};

using TransformSpec = std::variant<PartitionSpec, SplitParams, AbsorbParams>;

/// Law of the transformed counts. Split refines C_bin by a conditional
/// multinomial, Merge sums counts within groups, Absorb spreads the absorbed
/// bin's weight evenly over the others and shifts the counts.
CountLaw transform_count_law(TransformKind kind, const DiscreteDistribution& dist, long long n,
                             const TransformSpec& spec);

NaReport transform_na_check(TransformKind kind, const DiscreteDistribution& dist, long long n,
                            const TransformSpec& spec, std::uint64_t seed = 1);

struct SplitConditionCheck {
  double whole{0.0};   ///< (1-w)^n
  double pieces{0.0};  ///< prod_j (1-w_j)^n
  bool holds{true};
};

/// (1-w)^n <= prod_j (1-w_j)^n for positive parts summing to w.
SplitConditionCheck split_condition_check(double w, std::span<const double> parts, long long n);

struct MgfReport {
  long long checks{0};
  long long violations{0};
  /// Largest relative excess (lhs - rhs) / rhs over all checks.
  double max_residual{-1.0};
  bool holds() const { return violations == 0; }
};

/// E[e^{lambda w_i Z_i}] <= 1 - q_i + q_i e^{lambda w_i} for every variable and
/// lambda, and the product of the left sides against the product of the right
/// sides. Requires each Z_i on [0,1] with E[Z_i] <= q_i and w_i in [0,1];
/// violated preconditions throw std::invalid_argument.
MgfReport mgf_domination_check(std::span<const FiniteRandomVariable> z_laws,
                               std::span<const double> bernoulli_means,
                               std::span<const double> weights,
                               std::span<const double> lambda_grid);

std::vector<double> default_lambda_grid();

/// One line of the lemma verification report.
struct LemmaReport {
  std::string lemma;
  long long instances{0};
  long long violations{0};
  double max_residual{0.0};
};

struct LemmaSuiteConfig {
  std::uint64_t seed{1};
  long long split_condition_trials{10000};
  long long info_monotonicity_trials{1000};
  long long partitioning_trials{500};
  long long mgf_trials{1000};
  long long chernoff_trials{1000};
};

/// Runs every seeded lemma suite.
std::vector<LemmaReport> run_lemma_suites(const LemmaSuiteConfig& config);

void write_lemma_csv(std::ostream& out, const std::vector<LemmaReport>& rows);

}  // namespace mmb
