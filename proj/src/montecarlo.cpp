#include "mmb/montecarlo.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <ostream>
#include <stdexcept>
#include <thread>

namespace mmb {

AliasTable::AliasTable(const DiscreteDistribution& dist) {
  const std::size_t n = dist.size();
  prob_.assign(n, 0.0);
  alias_.assign(n, 0);
  std::vector<double> scaled(n);
  std::vector<std::uint32_t> small, large;
  for (std::size_t i = 0; i < n; ++i) {
    scaled[i] = dist[i] * static_cast<double>(n);
    (scaled[i] < 1.0 ? small : large).push_back(static_cast<std::uint32_t>(i));
  }
  while (!small.empty() && !large.empty()) {
    const std::uint32_t s = small.back();
    small.pop_back();
    const std::uint32_t l = large.back();
    prob_[s] = scaled[s];
    alias_[s] = l;
    scaled[l] = (scaled[l] + scaled[s]) - 1.0;
    if (scaled[l] < 1.0) {
      large.pop_back();
      small.push_back(l);
    }
  }
  for (auto i : large) {
    prob_[i] = 1.0;
    alias_[i] = i;
  }
  // Leftovers here are rounding residue of columns that should be full.
  for (auto i : small) {
    prob_[i] = 1.0;
    alias_[i] = i;
  }
}

std::size_t AliasTable::sample(Rng& rng) const {
  const auto column = static_cast<std::size_t>(rng.below(prob_.size()));
  return rng.uniform01() < prob_[column] ? column : alias_[column];
}

SampleSummary sample_missing_mass(const DiscreteDistribution& dist, long long n,
                                  std::uint64_t seed, std::uint64_t trial) {
  return sample_missing_mass(dist, AliasTable(dist), n, seed, trial);
}

SampleSummary sample_missing_mass(const DiscreteDistribution& dist, const AliasTable& table,
                                  long long n, std::uint64_t seed, std::uint64_t trial) {
  if (n < 1) throw std::domain_error("sample_missing_mass: n must be positive");
  Rng rng(derive_seed(seed, trial));
  SampleSummary out;
  out.counts.assign(dist.size(), 0);
  for (long long j = 0; j < n; ++j) ++out.counts[table.sample(rng)];
  for (std::size_t i = 0; i < dist.size(); ++i) {
    if (out.counts[i] == 0) out.missing_mass += dist[i];
  }
  return out;
}

namespace {

// Missing mass of one trial. Uses the same stream as sample_missing_mass but
// stops drawing once every outcome with positive weight has been seen, since
// later draws cannot change the value.
double simulate_missing_mass(const DiscreteDistribution& dist, const AliasTable& table,
                             long long n, std::uint64_t seed, std::uint64_t trial,
                             std::vector<char>& seen) {
  Rng rng(derive_seed(seed, trial));
  std::fill(seen.begin(), seen.end(), 0);
  std::size_t unseen = 0;
  for (std::size_t i = 0; i < dist.size(); ++i) {
    if (dist[i] > 0.0) ++unseen;
  }
  for (long long j = 0; j < n && unseen > 0; ++j) {
    const std::size_t k = table.sample(rng);
    if (!seen[k]) {
      seen[k] = 1;
      --unseen;
    }
  }
  double y = 0.0;
  for (std::size_t i = 0; i < dist.size(); ++i) {
    if (!seen[i]) y += dist[i];
  }
  return y;
}

unsigned resolve_threads(unsigned threads, long long trials) {
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  return static_cast<unsigned>(std::min<long long>(threads, std::max(1LL, trials)));
}

}  // namespace

double ExactDistribution::total_probability() const {
  double s = 0.0;
  for (const auto& a : atoms) s += a.probability;
  return s;
}

double ExactDistribution::mean() const {
  double s = 0.0;
  for (const auto& a : atoms) s += a.value * a.probability;
  return s;
}

double ExactDistribution::variance() const {
  const double m = mean();
  double s = 0.0;
  for (const auto& a : atoms) s += (a.value - m) * (a.value - m) * a.probability;
  return s;
}

bool in_tail(double y, double mean, double epsilon, TailDirection direction) {
  constexpr double kSlack = 1e-12;
  const double d = y - mean;
  switch (direction) {
    case TailDirection::Upper: return d >= epsilon - kSlack;
    case TailDirection::Lower: return d <= -epsilon + kSlack;
    case TailDirection::TwoSided: return std::abs(d) >= epsilon - kSlack;
  }
  return false;
}

double ExactDistribution::tail(double mean, double epsilon, TailDirection direction) const {
  double s = 0.0;
  for (const auto& a : atoms) {
    if (in_tail(a.value, mean, epsilon, direction)) s += a.probability;
  }
  return s;
}

ExactDistribution exact_missing_mass_distribution(const DiscreteDistribution& dist, long long n) {
  const std::size_t big_n = dist.size();
  if (big_n > kMaxExactSupport) {
    throw std::invalid_argument("exact_missing_mass_distribution: support size " +
                                std::to_string(big_n) + " exceeds " +
                                std::to_string(kMaxExactSupport));
  }
  if (n < 1) throw std::domain_error("exact_missing_mass_distribution: n must be positive");
  const std::size_t full = (std::size_t{1} << big_n) - 1;
  const std::size_t count = full + 1;

  std::vector<double> subset_weight(count, 0.0);
  for (std::size_t m = 1; m < count; ++m) {
    const auto low = static_cast<std::size_t>(__builtin_ctzll(m));
    subset_weight[m] = subset_weight[m & (m - 1)] + dist[low];
  }

  // prob[T] starts as P(every outcome in T unseen) = (w(complement of T))^n.
  std::vector<double> prob(count);
  const double dn = static_cast<double>(n);
  for (std::size_t t = 0; t < count; ++t) {
    const double rest = subset_weight[full ^ t];
    prob[t] = rest > 0.0 ? std::pow(rest, dn) : 0.0;
  }
  // Superset Moebius transform: one butterfly level per outcome, so each
  // result is a depth-N pairwise combination of the superset terms.
  for (std::size_t bit = 1; bit < count; bit <<= 1) {
    for (std::size_t m = 0; m < count; ++m) {
      if (!(m & bit)) prob[m] -= prob[m | bit];
    }
  }

  // Unseen sets whose seen complement is empty, holds a zero-weight outcome or
  // has more than n outcomes are impossible; drop their cancellation residue.
  std::size_t zero_mask = 0;
  for (std::size_t i = 0; i < big_n; ++i) {
    if (dist[i] == 0.0) zero_mask |= std::size_t{1} << i;
  }
  std::vector<MissingMassAtom> raw;
  raw.reserve(count);
  for (std::size_t s = 0; s < count; ++s) {
    const std::size_t seen = full ^ s;
    const auto seen_count = static_cast<long long>(__builtin_popcountll(seen));
    if (seen == 0 || (seen & zero_mask) != 0 || seen_count > n) continue;
    if (prob[s] != 0.0) raw.push_back({subset_weight[s], prob[s]});
  }
  std::sort(raw.begin(), raw.end(),
            [](const MissingMassAtom& x, const MissingMassAtom& y) { return x.value < y.value; });

  ExactDistribution out;
  for (const auto& atom : raw) {
    if (!out.atoms.empty() && atom.value - out.atoms.back().value <= 1e-14) {
      out.atoms.back().probability += atom.probability;
    } else {
      out.atoms.push_back(atom);
    }
  }
  return out;
}

std::vector<TailEstimate> empirical_tails(const DiscreteDistribution& dist, long long n,
                                          const std::vector<double>& epsilons,
                                          const std::vector<TailDirection>& directions,
                                          long long trials, std::uint64_t seed,
                                          unsigned threads) {
  if (trials < 1) throw std::invalid_argument("empirical_tail: trials must be positive");
  if (n < 1) throw std::domain_error("empirical_tail: n must be positive");
  const AliasTable table(dist);
  const double mean = missing_mass_stats(dist, n).mean;
  const std::size_t cells = epsilons.size() * directions.size();

  const unsigned workers = resolve_threads(threads, trials);
  std::vector<std::vector<long long>> hits(workers, std::vector<long long>(cells, 0));
  auto work = [&](unsigned w) {
    std::vector<char> seen(dist.size());
    const long long begin = trials * w / workers;
    const long long end = trials * (w + 1) / workers;
    for (long long t = begin; t < end; ++t) {
      const double y = simulate_missing_mass(dist, table, n, seed, static_cast<std::uint64_t>(t), seen);
      std::size_t c = 0;
      for (double eps : epsilons) {
        for (TailDirection d : directions) {
          if (in_tail(y, mean, eps, d)) ++hits[w][c];
          ++c;
        }
      }
    }
  };
  if (workers == 1) {
    work(0);
  } else {
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work, w);
    for (auto& th : pool) th.join();
  }

  std::vector<TailEstimate> out;
  out.reserve(cells);
  std::size_t c = 0;
  for (double eps : epsilons) {
    for (TailDirection d : directions) {
      long long total = 0;
      for (const auto& h : hits) total += h[c];
      TailEstimate est;
      est.epsilon = eps;
      est.direction = d;
      est.trials = trials;
      est.seed = seed;
      est.estimate = static_cast<double>(total) / static_cast<double>(trials);
      est.std_error = std::sqrt(est.estimate * (1.0 - est.estimate) / static_cast<double>(trials));
      out.push_back(est);
      ++c;
    }
  }
  return out;
}

TailEstimate empirical_tail(const DiscreteDistribution& dist, long long n, double epsilon,
                            TailDirection direction, long long trials, std::uint64_t seed,
                            unsigned threads) {
  return empirical_tails(dist, n, {epsilon}, {direction}, trials, seed, threads).front();
}

namespace {

BoundReport evaluate_bound(BoundMethod method, long long n, double eps, TailDirection dir) {
  switch (method) {
    case BoundMethod::LinearNew: return linear_bound(n, eps, dir);
    case BoundMethod::QuadraticNew: return quadratic_bound(n, eps, dir);
    case BoundMethod::BaselinePrior: return baseline_prior_bound(n, eps, dir);
    default: break;
  }
  throw std::invalid_argument("validate_bounds: method '" + std::string(to_string(method)) +
                              "' needs distribution-specific inputs");
}

}  // namespace

std::vector<ValidationRow> validate_bounds(const DiscreteDistribution& dist, long long n,
                                           const ValidationConfig& config) {
  const bool exact =
      config.path == OraclePath::Exact ||
      (config.path == OraclePath::Auto && dist.size() <= kMaxExactSupport);

  std::vector<TailEstimate> tails;
  if (exact) {
    const ExactDistribution law = exact_missing_mass_distribution(dist, n);
    const double mean = missing_mass_stats(dist, n).mean;
    for (double eps : config.epsilons) {
      for (TailDirection d : config.directions) {
        TailEstimate est;
        est.epsilon = eps;
        est.direction = d;
        est.estimate = std::clamp(law.tail(mean, eps, d), 0.0, 1.0);
        tails.push_back(est);
      }
    }
  } else {
    tails = empirical_tails(dist, n, config.epsilons, config.directions, config.trials,
                            config.seed, config.threads);
  }

  std::vector<ValidationRow> rows;
  for (const auto& est : tails) {
    for (BoundMethod m : config.methods) {
      BoundReport b;
      try {
        b = evaluate_bound(m, n, est.epsilon, est.direction);
      } catch (const DomainError&) {
        continue;
      }
      ValidationRow row;
      row.epsilon = est.epsilon;
      row.direction = est.direction;
      row.method = m;
      row.bound = b.bound;
      row.estimate = est.estimate;
      row.std_error = est.std_error;
      row.trials = exact ? 0 : est.trials;
      row.violation = est.estimate - 3.0 * est.std_error > b.bound;
      rows.push_back(row);
    }
  }
  return rows;
}

void write_validation_csv(std::ostream& out, const std::vector<ValidationRow>& rows) {
  const auto old_precision = out.precision(17);
  out << "epsilon,direction,method,bound,estimate,std_error,trials,violation\n";
  for (const auto& r : rows) {
    out << r.epsilon << ',' << to_string(r.direction) << ',' << to_string(r.method) << ','
        << r.bound << ',' << r.estimate << ',' << r.std_error << ',' << r.trials << ','
        << (r.violation ? 1 : 0) << '\n';
  }
  out.precision(old_precision);
}

}  // namespace mmb
