#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <vector>

#include "mmb/bounds.hpp"
#include "mmb/distribution.hpp"

namespace mmb {

/// phi(gamma, eps) = eps (gamma-1)^2 / (gamma^2 log(gamma/eps)); the linear
/// bound's exponent is (3/8) n phi before optimizing over gamma.
struct PhiEval {
  double gamma{0.0};
  double epsilon{0.0};
  double phi{0.0};
};

PhiEval phi(double gamma, double epsilon);

/// Thrown when a scan shows the objective is not unimodal on the search range.
class SearchFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Derivative-free maximization of phi over gamma in
/// [max(1, e eps)(1 + 1e-9), min(e^n eps, 1e9)]; n = 0 drops the e^n eps cap.
double optimize_gamma_numeric(double epsilon, long long n = 0);

/// c'(gamma, eps) = 3 (gamma-1)^2 / (8 gamma^2 eps log(gamma/eps)).
double c_prime(double gamma, double epsilon);

/// gamma_n = -2 W_{-1}(-1 / (2 sqrt(n e))).
double gamma_n(long long n);

/// c'(gamma, n) = 3 sqrt(n) (gamma-1)^2 / (8 gamma^2 log(sqrt(n) gamma)).
double c_prime_gamma_n(double gamma, long long n);

/// c'(n) = 3 sqrt(n) (gamma_n - 1) / (4 gamma_n^2), the supremum of c'(gamma, n).
double c_prime_n(long long n);

/// Same supremum by golden-section search over gamma; independent of gamma_n.
double c_prime_n_numeric(long long n);

struct CrossoverResult {
  double target_constant{0.0};
  long long n_star{0};
  double cprime_at_n_star{0.0};
  /// c'(n_star - 1), or NaN when n_star = 1.
  double cprime_before{0.0};
};

/// Smallest n with c'(n) >= target; exponential bracketing then bisection.
/// Throws SearchFailure past n = 10^12 or if c'(n) is not increasing
/// around the answer.
CrossoverResult find_n_crossover(double target_constant);

/// Solution of 4 eps^2 = (3/4) eps: where the quadratic-exponent bound starts
/// to beat the linear one.
double epsilon_crossover();

/// Geometric grid of `points` values spanning [1/n, 1/sqrt(n)].
std::vector<double> std_epsilon_grid(long long n, int points = 25);

struct ComparisonRow {
  BoundReport report;
  bool winner{false};
};

/// One row per (epsilon, direction, method) over the new bounds and the
/// baselines. The Bernstein and McDiarmid baselines apply the inequality to the
/// untruncated missing mass: with a distribution they use V[Y], max w_i and
/// sum w_i^2; without one they fall back to the distribution-free caps
/// V <= 1/(n+1), range <= 1, C <= 1. Rows for which a bound is outside its
/// domain are dropped. Rows are ordered by epsilon, then direction, then method.
std::vector<ComparisonRow> comparison_table(long long n, const std::vector<double>& epsilon_grid,
                                            const std::vector<TailDirection>& directions,
                                            const std::optional<DiscreteDistribution>& dist = {});

void write_comparison_csv(std::ostream& out, const std::vector<ComparisonRow>& rows);

}  // namespace mmb

namespace mmb {

/// `points` equally spaced values strictly inside (lo, hi).
std::vector<double> interior_epsilon_grid(double lo, double hi, int points);

}  // namespace mmb
