#include "mmb/optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <ostream>
#include <sstream>

#include "mmb/golden.hpp"
#include "mmb/lambert.hpp"

namespace mmb {

namespace {

constexpr double kGammaCap = 1e9;
constexpr int kScanPoints = 256;

// Scans f on a uniform grid and returns the bracket around the grid maximum.
// Throws if the sampled values do not rise and then fall.
template <class F>
std::pair<double, double> unimodal_bracket(F&& f, double lo, double hi, const char* who) {
  std::vector<double> xs(kScanPoints), fs(kScanPoints);
  for (int i = 0; i < kScanPoints; ++i) {
    xs[i] = lo + (hi - lo) * i / (kScanPoints - 1);
    fs[i] = f(xs[i]);
  }
  const auto best = static_cast<int>(std::max_element(fs.begin(), fs.end()) - fs.begin());
  for (int i = 1; i <= best; ++i) {
    if (fs[i] < fs[i - 1]) throw SearchFailure(std::string(who) + ": objective not unimodal");
  }
  for (int i = best + 1; i < kScanPoints; ++i) {
    if (fs[i] > fs[i - 1]) throw SearchFailure(std::string(who) + ": objective not unimodal");
  }
  return {xs[std::max(best - 1, 0)], xs[std::min(best + 1, kScanPoints - 1)]};
}

}  // namespace

PhiEval phi(double gamma, double epsilon) {
  if (!(epsilon > 0.0 && epsilon < 1.0)) throw DomainError("phi: epsilon must lie in (0,1)");
  if (!(gamma > std::max(1.0, std::numbers::e * epsilon))) {
    throw DomainError("phi: gamma must exceed max(1, e*eps)");
  }
  const double g1 = gamma - 1.0;
  return {gamma, epsilon, epsilon * g1 * g1 / (gamma * gamma * std::log(gamma / epsilon))};
}

double optimize_gamma_numeric(double epsilon, long long n) {
  if (!(epsilon > 0.0 && epsilon < 1.0)) {
    throw DomainError("optimize_gamma_numeric: epsilon must lie in (0,1)");
  }
  const double lo = std::max(1.0, std::numbers::e * epsilon) * (1.0 + 1e-9);
  double log_hi = std::log(kGammaCap);
  if (n > 0) log_hi = std::min(log_hi, static_cast<double>(n) + std::log(epsilon));
  const double log_lo = std::log(lo);
  if (!(log_hi > log_lo)) throw DomainError("optimize_gamma_numeric: empty gamma range");

  auto objective = [epsilon](double u) { return std::log(phi(std::exp(u), epsilon).phi); };
  auto [b_lo, b_hi] = unimodal_bracket(objective, log_lo, log_hi, "optimize_gamma_numeric");
  return std::exp(golden_section_max(objective, b_lo, b_hi, 1e-10).x);
}

double c_prime(double gamma, double epsilon) {
  return 3.0 * phi(gamma, epsilon).phi / (8.0 * epsilon * epsilon);
}

double gamma_n(long long n) {
  if (n < 1) throw DomainError("gamma_n: n must be positive");
  return -2.0 * lambert_w_m1(-1.0 / (2.0 * std::sqrt(static_cast<double>(n) * std::numbers::e)));
}

double c_prime_gamma_n(double gamma, long long n) {
  if (n < 1) throw DomainError("c_prime_gamma_n: n must be positive");
  if (!(gamma > 1.0)) throw DomainError("c_prime_gamma_n: gamma must exceed 1");
  const double rn = std::sqrt(static_cast<double>(n));
  const double g1 = gamma - 1.0;
  return 3.0 * rn * g1 * g1 / (8.0 * gamma * gamma * std::log(rn * gamma));
}

double c_prime_n(long long n) {
  const double g = gamma_n(n);
  return 3.0 * std::sqrt(static_cast<double>(n)) * (g - 1.0) / (4.0 * g * g);
}

double c_prime_n_numeric(long long n) {
  if (n < 1) throw DomainError("c_prime_n_numeric: n must be positive");
  auto objective = [n](double u) { return std::log(c_prime_gamma_n(std::exp(u), n)); };
  const double log_lo = std::log(1.0 + 1e-9);
  const double log_hi = std::log(kGammaCap);
  auto [b_lo, b_hi] = unimodal_bracket(objective, log_lo, log_hi, "c_prime_n_numeric");
  return std::exp(golden_section_max(objective, b_lo, b_hi, 1e-10).value);
}

CrossoverResult find_n_crossover(double target_constant) {
  if (!(target_constant > 0.0)) throw DomainError("find_n_crossover: target must be positive");
  constexpr long long kCap = 1'000'000'000'000LL;

  CrossoverResult res;
  res.target_constant = target_constant;
  if (c_prime_n(1) >= target_constant) {
    res.n_star = 1;
  } else {
    long long lo = 1;  // c'(lo) < target
    long long hi = 2;
    while (c_prime_n(hi) < target_constant) {
      lo = hi;
      if (hi >= kCap) throw SearchFailure("find_n_crossover: no crossing below n = 1e12");
      hi = std::min(hi * 2, kCap);
    }
    while (hi - lo > 1) {
      const long long mid = lo + (hi - lo) / 2;
      (c_prime_n(mid) >= target_constant ? hi : lo) = mid;
    }
    res.n_star = hi;
  }
  res.cprime_at_n_star = c_prime_n(res.n_star);
  res.cprime_before =
      res.n_star > 1 ? c_prime_n(res.n_star - 1) : std::numeric_limits<double>::quiet_NaN();

  const long long from = std::max(1LL, res.n_star - 8);
  for (long long m = from; m < res.n_star + 8; ++m) {
    if (!(c_prime_n(m + 1) > c_prime_n(m))) {
      throw SearchFailure("find_n_crossover: c'(n) not increasing near n = " + std::to_string(m));
    }
  }
  return res;
}

double epsilon_crossover() {
  // 4 c n eps^2 = (3/4) c n eps  =>  eps = (3/4) / 4.
  return 0.75 / 4.0;
}

std::vector<double> std_epsilon_grid(long long n, int points) {
  if (n < 2) throw DomainError("std_epsilon_grid: n must be at least 2");
  if (points < 1) throw DomainError("std_epsilon_grid: need at least one point");
  const double lo = std::log(1.0 / static_cast<double>(n));
  const double hi = std::log(1.0 / std::sqrt(static_cast<double>(n)));
  std::vector<double> grid(points);
  for (int i = 0; i < points; ++i) {
    grid[i] = points == 1 ? std::exp(lo) : std::exp(lo + (hi - lo) * i / (points - 1));
  }
  return grid;
}

std::vector<ComparisonRow> comparison_table(long long n, const std::vector<double>& epsilon_grid,
                                            const std::vector<TailDirection>& directions,
                                            const std::optional<DiscreteDistribution>& dist) {
  if (epsilon_grid.empty()) throw std::invalid_argument("comparison_table: empty epsilon grid");
  if (directions.empty()) throw std::invalid_argument("comparison_table: no directions");
  for (double e : epsilon_grid) {
    if (!(e > 0.0 && e < 1.0)) throw DomainError("comparison_table: grid values must lie in (0,1)");
  }

  double variance = 1.0 / static_cast<double>(n + 1);
  double range = 1.0;
  double c_sum = 1.0;
  if (dist) {
    variance = missing_mass_stats(*dist, n).variance;
    range = dist->max_weight();
    c_sum = 0.0;
    for (double w : dist->weights()) c_sum += w * w;
  }

  std::vector<ComparisonRow> rows;
  for (double eps : epsilon_grid) {
    for (TailDirection dir : directions) {
      const std::size_t first = rows.size();
      auto push = [&](auto&& make) {
        try {
          rows.push_back({make(), false});
        } catch (const DomainError&) {
        }
      };
      push([&] { return linear_bound(n, eps, dir); });
      push([&] { return quadratic_bound(n, eps, dir); });
      push([&] {
        BoundReport r;
        r.method = BoundMethod::Bernstein;
        r.n = n;
        r.epsilon = eps;
        r.direction = dir;
        r.c_coeff = variance;
        apply_direction(r, bernstein_exponent(eps, variance, range));
        return r;
      });
      push([&] {
        BoundReport r;
        r.method = BoundMethod::McDiarmid;
        r.n = n;
        r.epsilon = eps;
        r.direction = dir;
        r.c_coeff = c_sum;
        apply_direction(r, mcdiarmid_exponent(eps, c_sum));
        return r;
      });
      push([&] { return baseline_prior_bound(n, eps, dir); });

      std::size_t best = first;
      for (std::size_t i = first; i < rows.size(); ++i) {
        if (rows[i].report.exponent > rows[best].report.exponent) best = i;
      }
      if (best < rows.size()) rows[best].winner = true;
    }
  }
  return rows;
}

void write_comparison_csv(std::ostream& out, const std::vector<ComparisonRow>& rows) {
  const auto old_precision = out.precision(17);
  out << "epsilon,method,direction,gamma,a,tau,exponent,bound,winner\n";
  for (const auto& row : rows) {
    const auto& r = row.report;
    out << r.epsilon << ',' << to_string(r.method) << ',' << to_string(r.direction) << ','
        << r.gamma << ',' << r.a << ',' << r.tau << ',' << r.exponent << ',' << r.bound << ','
        << (row.winner ? 1 : 0) << '\n';
  }
  out.precision(old_precision);
}

}  // namespace mmb

namespace mmb {

std::vector<double> interior_epsilon_grid(double lo, double hi, int points) {
  if (!(hi > lo) || points < 1) throw DomainError("interior_epsilon_grid: need lo < hi and points >= 1");
  std::vector<double> grid(points);
  for (int k = 0; k < points; ++k) grid[k] = lo + (hi - lo) * (k + 1) / (points + 1);
  return grid;
}

}  // namespace mmb
