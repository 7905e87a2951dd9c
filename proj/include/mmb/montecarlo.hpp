#pragma once

#include <cstdint>
#include <iosfwd>
#include <vector>

#include "mmb/bounds.hpp"
#include "mmb/distribution.hpp"
#include "mmb/rng.hpp"

namespace mmb {

/// Walker/Vose alias table for O(1) categorical draws.
class AliasTable {
 public:
  explicit AliasTable(const DiscreteDistribution& dist);

  std::size_t sample(Rng& rng) const;
  std::size_t size() const { return prob_.size(); }

 private:
  std::vector<double> prob_;
  std::vector<std::uint32_t> alias_;
};

struct SampleSummary {
  std::vector<long long> counts;
  double missing_mass{0.0};
};

/// Draws n i.i.d. outcomes; deterministic in (seed, trial).
SampleSummary sample_missing_mass(const DiscreteDistribution& dist, long long n,
                                  std::uint64_t seed, std::uint64_t trial = 0);
SampleSummary sample_missing_mass(const DiscreteDistribution& dist, const AliasTable& table,
                                  long long n, std::uint64_t seed, std::uint64_t trial);

struct MissingMassAtom {
  double value{0.0};
  double probability{0.0};
};

/// Law of the missing mass as sorted, merged atoms.
struct ExactDistribution {
  std::vector<MissingMassAtom> atoms;

  double total_probability() const;
  double mean() const;
  double variance() const;
  /// P(Y - mean >= eps), P(Y - mean <= -eps) or P(|Y - mean| >= eps).
  double tail(double mean, double epsilon, TailDirection direction) const;
};

inline constexpr std::size_t kMaxExactSupport = 22;

/// Inclusion-exclusion over subsets of the support:
/// P(unseen set = S) = sum_{T >= S} (-1)^{|T|-|S|} (1 - w(T))^n.
/// Atoms whose values agree within 1e-14 are merged.
ExactDistribution exact_missing_mass_distribution(const DiscreteDistribution& dist, long long n);

/// True when y falls in the deviation event. The comparison includes a 1e-12
/// slack so that atoms sitting exactly on the boundary are counted.
bool in_tail(double y, double mean, double epsilon, TailDirection direction);

struct TailEstimate {
  double epsilon{0.0};
  TailDirection direction{TailDirection::Upper};
  double estimate{0.0};
  double std_error{0.0};
  long long trials{0};
  std::uint64_t seed{0};
};

/// Fraction of simulated samples in the deviation event, measured from the
/// closed-form mean. `threads` = 0 uses the hardware concurrency; the result
/// is identical for any thread count.
TailEstimate empirical_tail(const DiscreteDistribution& dist, long long n, double epsilon,
                            TailDirection direction, long long trials, std::uint64_t seed,
                            unsigned threads = 0);

/// Tail estimates for several (epsilon, direction) pairs from one shared set of
/// simulated samples.
std::vector<TailEstimate> empirical_tails(const DiscreteDistribution& dist, long long n,
                                          const std::vector<double>& epsilons,
                                          const std::vector<TailDirection>& directions,
                                          long long trials, std::uint64_t seed,
                                          unsigned threads = 0);

enum class OraclePath { Auto, Exact, MonteCarlo };

struct ValidationRow {
  double epsilon{0.0};
  TailDirection direction{TailDirection::Upper};
  BoundMethod method{BoundMethod::LinearNew};
  double bound{1.0};
  double estimate{0.0};
  double std_error{0.0};
  /// 0 for rows computed from the exact law.
  long long trials{0};
  bool violation{false};
};

struct ValidationConfig {
  std::vector<double> epsilons;
  std::vector<TailDirection> directions{TailDirection::Upper, TailDirection::Lower};
  std::vector<BoundMethod> methods{BoundMethod::LinearNew, BoundMethod::QuadraticNew};
  long long trials{100000};
  std::uint64_t seed{1};
  OraclePath path{OraclePath::Auto};
  unsigned threads{0};
};

/// Compares each bound with the exact tail (support <= 22, Auto/Exact) or a
/// Monte Carlo estimate. A row is a violation when estimate - 3 se > bound.
/// Bounds whose parameters are out of domain are skipped.
std::vector<ValidationRow> validate_bounds(const DiscreteDistribution& dist, long long n,
                                           const ValidationConfig& config);

void write_validation_csv(std::ostream& out, const std::vector<ValidationRow>& rows);

}  // namespace mmb
