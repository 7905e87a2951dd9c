#include "mmb/negdep.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>
#include <ostream>
#include <stdexcept>

#include "mmb/golden.hpp"
#include "mmb/rng.hpp"

namespace mmb {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double log_sum_exp(std::span<const double> logs) {
  double m = -kInf;
  for (double v : logs) m = std::max(m, v);
  if (m == -kInf) return -kInf;
  double s = 0.0;
  for (double v : logs) s += std::exp(v - m);
  return m + std::log(s);
}

// Calls fn(counts) for every composition of `total` into `parts` nonnegative parts.
void for_each_composition(long long total, std::size_t parts,
                          const std::function<void(const std::vector<long long>&)>& fn) {
  std::vector<long long> c(parts, 0);
  std::function<void(std::size_t, long long)> rec = [&](std::size_t i, long long left) {
    if (i + 1 == parts) {
      c[i] = left;
      fn(c);
      return;
    }
    for (long long v = 0; v <= left; ++v) {
      c[i] = v;
      rec(i + 1, left - v);
    }
  };
  if (parts == 0) return;
  rec(0, total);
}

double composition_count(long long total, std::size_t parts) {
  // C(total + parts - 1, parts - 1) in floating point.
  return std::exp(std::lgamma(static_cast<double>(total + parts)) -
                  std::lgamma(static_cast<double>(total + 1)) -
                  std::lgamma(static_cast<double>(parts)));
}

// log of the multinomial probability of `counts` under `probs`; -inf when a
// zero-probability cell has a positive count.
double log_multinomial(const std::vector<long long>& counts, std::span<const double> probs) {
  long long total = 0;
  double acc = 0.0;
  for (std::size_t i = 0; i < counts.size(); ++i) {
    total += counts[i];
    if (counts[i] == 0) continue;
    if (probs[i] <= 0.0) return -kInf;
    acc += static_cast<double>(counts[i]) * std::log(probs[i]) -
           std::lgamma(static_cast<double>(counts[i] + 1));
  }
  return acc + std::lgamma(static_cast<double>(total + 1));
}

std::vector<double> random_simplex(Rng& rng, std::size_t n) {
  std::vector<double> w(n);
  for (auto& v : w) v = -std::log(1.0 - rng.uniform01());
  const double s = std::accumulate(w.begin(), w.end(), 0.0);
  for (auto& v : w) v /= s;
  return w;
}

PartitionSpec random_partition(Rng& rng, std::size_t n) {
  const std::size_t m = 1 + rng.below(n);
  std::vector<std::vector<std::size_t>> groups(m);
  for (std::size_t i = 0; i < n; ++i) groups[rng.below(m)].push_back(i);
  PartitionSpec spec;
  for (auto& g : groups) {
    if (!g.empty()) spec.groups.push_back(std::move(g));
  }
  return spec;
}

}  // namespace

// ---------------------------------------------------------------------------
// Finite random variables, partitions, divergences

FiniteRandomVariable::FiniteRandomVariable(std::vector<double> support, std::vector<double> probs)
    : support_(std::move(support)), probs_(std::move(probs)) {
  if (support_.empty() || support_.size() != probs_.size()) {
    throw std::invalid_argument("FiniteRandomVariable: support and probs must be nonempty and equal length");
  }
  double s = 0.0;
  for (std::size_t i = 0; i < probs_.size(); ++i) {
    if (!(probs_[i] >= 0.0) || !std::isfinite(support_[i])) {
      throw std::invalid_argument("FiniteRandomVariable: negative probability or non-finite atom");
    }
    s += probs_[i];
  }
  if (std::abs(s - 1.0) > 1e-12) throw std::invalid_argument("FiniteRandomVariable: probs must sum to 1");
}

double FiniteRandomVariable::mean() const {
  double s = 0.0;
  for (std::size_t i = 0; i < size(); ++i) s += support_[i] * probs_[i];
  return s;
}

double FiniteRandomVariable::max_value() const {
  double m = -kInf;
  for (std::size_t i = 0; i < size(); ++i) {
    if (probs_[i] > 0.0) m = std::max(m, support_[i]);
  }
  return m;
}

double FiniteRandomVariable::min_value() const {
  double m = kInf;
  for (std::size_t i = 0; i < size(); ++i) {
    if (probs_[i] > 0.0) m = std::min(m, support_[i]);
  }
  return m;
}

double FiniteRandomVariable::log_mgf(double lambda) const {
  std::vector<double> logs(size());
  for (std::size_t i = 0; i < size(); ++i) {
    logs[i] = probs_[i] > 0.0 ? std::log(probs_[i]) + lambda * support_[i] : -kInf;
  }
  return log_sum_exp(logs);
}

std::vector<double> FiniteRandomVariable::tilted_probs(double lambda) const {
  std::vector<double> out(size(), 0.0);
  if (std::isinf(lambda)) {
    // Limit law: mass concentrates on the largest atom.
    const double top = max_value();
    double s = 0.0;
    for (std::size_t i = 0; i < size(); ++i) {
      if (probs_[i] > 0.0 && support_[i] == top) s += probs_[i];
    }
    for (std::size_t i = 0; i < size(); ++i) {
      if (probs_[i] > 0.0 && support_[i] == top) out[i] = probs_[i] / s;
    }
    return out;
  }
  const double lz = log_mgf(lambda);
  for (std::size_t i = 0; i < size(); ++i) {
    if (probs_[i] > 0.0) out[i] = std::exp(std::log(probs_[i]) + lambda * support_[i] - lz);
  }
  return out;
}

PartitionSpec PartitionSpec::identity(std::size_t size) {
  PartitionSpec p;
  for (std::size_t i = 0; i < size; ++i) p.groups.push_back({i});
  return p;
}

PartitionSpec PartitionSpec::single_group(std::size_t size) {
  PartitionSpec p;
  p.groups.emplace_back(size);
  std::iota(p.groups[0].begin(), p.groups[0].end(), std::size_t{0});
  return p;
}

void PartitionSpec::validate(std::size_t size) const {
  std::vector<char> hit(size, 0);
  for (const auto& g : groups) {
    if (g.empty()) throw std::invalid_argument("partition: empty group");
    for (std::size_t i : g) {
      if (i >= size) throw std::invalid_argument("partition: index out of range");
      if (hit[i]) throw std::invalid_argument("partition: groups overlap");
      hit[i] = 1;
    }
  }
  if (std::find(hit.begin(), hit.end(), 0) != hit.end()) {
    throw std::invalid_argument("partition: groups do not cover the support");
  }
}

std::vector<double> coarsen(std::span<const double> p, const PartitionSpec& partition) {
  partition.validate(p.size());
  std::vector<double> out;
  out.reserve(partition.groups.size());
  for (const auto& g : partition.groups) {
    double s = 0.0;
    for (std::size_t i : g) s += p[i];
    out.push_back(s);
  }
  return out;
}

double kl_divergence(std::span<const double> p, std::span<const double> q) {
  if (p.size() != q.size()) throw std::invalid_argument("kl_divergence: support mismatch");
  double s = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (p[i] == 0.0) continue;
    if (q[i] == 0.0) throw std::domain_error("kl_divergence: p not absolutely continuous w.r.t. q");
    s += p[i] * std::log(p[i] / q[i]);
  }
  return s;
}

// ---------------------------------------------------------------------------
// Chernoff entropy and the partitioning inequality

ChernoffEntropy chernoff_entropy(const FiniteRandomVariable& x, double epsilon) {
  const double top = x.max_value();
  const double scale = std::max({1.0, std::abs(top), std::abs(x.min_value())});
  if (epsilon > top + 1e-15 * scale) return {kInf, kInf, true};
  if (epsilon >= top - 1e-15 * scale) {
    double p_top = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
      if (x.probs()[i] > 0.0 && x.support()[i] == top) p_top += x.probs()[i];
    }
    return {-std::log(p_top), kInf, false};
  }
  if (epsilon <= x.mean()) return {0.0, 0.0, false};

  auto objective = [&](double lambda) { return lambda * epsilon - x.log_mgf(lambda); };
  auto slope = [&](double lambda) {
    const auto t = x.tilted_probs(lambda);
    double m = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) m += t[i] * x.support()[i];
    return epsilon - m;
  };
  double lo = 0.0;
  double hi = 1.0;
  while (slope(hi) > 0.0) {
    lo = hi;
    hi *= 2.0;
  }
  double lambda = golden_section_max(objective, lo, hi, 1e-12 * hi).x;
  // Newton polish on the stationarity condition E_lambda[X] = eps.
  for (int it = 0; it < 4; ++it) {
    const auto t = x.tilted_probs(lambda);
    double m = 0.0, m2 = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
      m += t[i] * x.support()[i];
      m2 += t[i] * x.support()[i] * x.support()[i];
    }
    const double var = m2 - m * m;
    if (!(var > 0.0)) break;
    const double next = lambda + (epsilon - m) / var;
    if (!(next >= lo && next <= hi)) break;
    lambda = next;
  }
  return {objective(lambda), lambda, false};
}

DeviationCheck deviation_vs_entropy_check(const FiniteRandomVariable& x, double epsilon) {
  DeviationCheck c;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (x.support()[i] >= epsilon) c.probability += x.probs()[i];
  }
  const auto s = chernoff_entropy(x, epsilon);
  c.entropy = s.value;
  c.bound = std::exp(-s.value);
  c.holds = c.probability <= c.bound + 1e-12;
  return c;
}

PartitioningCheck partitioning_check(const FiniteRandomVariable& x, const PartitionSpec& partition,
                                     double epsilon) {
  partition.validate(x.size());
  PartitioningCheck c;
  const auto s = chernoff_entropy(x, epsilon);
  c.entropy = s.value;
  if (s.infinite) {
    c.kl_tilted_full = kInf;
    c.kl_tilted_coarse = kInf;
    c.holds = true;
    return c;
  }
  const auto tilted = x.tilted_probs(s.lambda);
  c.kl_tilted_full = kl_divergence(tilted, x.probs());
  c.kl_tilted_coarse = kl_divergence(coarsen(tilted, partition), coarsen(x.probs(), partition));
  c.holds = c.kl_tilted_coarse <= c.entropy + 1e-10;
  return c;
}

InfoMonotonicity info_monotonicity_check(const DiscreteDistribution& p,
                                         const DiscreteDistribution& q,
                                         const PartitionSpec& partition) {
  if (p.size() != q.size()) throw std::invalid_argument("info_monotonicity_check: support mismatch");
  InfoMonotonicity r;
  r.kl_full = kl_divergence(p.weights(), q.weights());
  r.kl_coarse = kl_divergence(coarsen(p.weights(), partition), coarsen(q.weights(), partition));
  r.holds = r.kl_coarse <= r.kl_full + 1e-12;
  return r;
}

// ---------------------------------------------------------------------------
// Count laws and the negative association battery

CountLaw multinomial_count_law(std::span<const double> weights, long long n) {
  if (weights.empty()) throw std::invalid_argument("multinomial_count_law: no bins");
  if (n < 0) throw std::invalid_argument("multinomial_count_law: n must be nonnegative");
  if (composition_count(n, weights.size()) > static_cast<double>(kMaxEnumeratedOutcomes)) {
    throw std::length_error("multinomial_count_law: instance too large to enumerate");
  }
  CountLaw law;
  law.bins = weights.size();
  for_each_composition(n, weights.size(), [&](const std::vector<long long>& c) {
    const double lp = log_multinomial(c, weights);
    if (lp == -kInf) return;
    for (long long v : c) law.values.push_back(static_cast<double>(v));
    law.probs.push_back(std::exp(lp));
  });
  return law;
}

namespace {

struct BlockFunctions {
  std::vector<std::vector<double>> increasing;
  std::vector<std::vector<double>> decreasing;
};

BlockFunctions block_functions(const CountLaw& law, std::uint64_t mask, Rng& rng,
                               const std::vector<std::vector<double>>& levels) {
  const std::size_t rows = law.rows();
  std::vector<std::size_t> idx;
  for (std::size_t b = 0; b < law.bins; ++b) {
    if (mask >> b & 1) idx.push_back(b);
  }
  BlockFunctions fns;
  std::vector<double> sum(rows), mx(rows, -kInf), unseen(rows, 1.0), missing(rows, 0.0);
  std::vector<double> mass(idx.size());
  for (auto& m : mass) m = 0.1 + rng.uniform01();
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t k = 0; k < idx.size(); ++k) {
      const double v = law.at(r, idx[k]);
      sum[r] += v;
      mx[r] = std::max(mx[r], v);
      const bool at_floor = v <= levels[idx[k]].front();
      if (!at_floor) unseen[r] = 0.0;
      if (at_floor) missing[r] += mass[k];
    }
  }
  fns.increasing.push_back(sum);
  fns.increasing.push_back(mx);
  std::vector<double> sum_levels(sum);
  std::sort(sum_levels.begin(), sum_levels.end());
  sum_levels.erase(std::unique(sum_levels.begin(), sum_levels.end()), sum_levels.end());
  for (std::size_t t = 1; t < sum_levels.size(); ++t) {
    std::vector<double> ind(rows);
    for (std::size_t r = 0; r < rows; ++r) ind[r] = sum[r] >= sum_levels[t] ? 1.0 : 0.0;
    fns.increasing.push_back(std::move(ind));
  }
  // Random staircases: f(c) = sum_i sum_{level l of bin i} u_il 1[c_i >= l].
  for (int s = 0; s < 3; ++s) {
    std::vector<std::vector<double>> steps(idx.size());
    for (std::size_t k = 0; k < idx.size(); ++k) {
      steps[k].resize(levels[idx[k]].size());
      for (auto& u : steps[k]) u = rng.uniform01() < 0.5 ? 0.0 : rng.uniform01();
    }
    std::vector<double> f(rows, 0.0);
    for (std::size_t r = 0; r < rows; ++r) {
      for (std::size_t k = 0; k < idx.size(); ++k) {
        const double v = law.at(r, idx[k]);
        const auto& lv = levels[idx[k]];
        for (std::size_t l = 0; l < lv.size() && lv[l] <= v; ++l) f[r] += steps[k][l];
      }
    }
    fns.increasing.push_back(std::move(f));
  }
  fns.decreasing.push_back(unseen);
  fns.decreasing.push_back(missing);
  std::vector<double> neg(rows);
  for (std::size_t r = 0; r < rows; ++r) neg[r] = -sum[r];
  fns.decreasing.push_back(std::move(neg));
  return fns;
}

void score_pairs(const CountLaw& law, const std::vector<std::vector<double>>& fs,
                 const std::vector<std::vector<double>>& gs, NaReport& report) {
  const std::size_t rows = law.rows();
  for (const auto& f : fs) {
    double ef = 0.0, eaf = 0.0;
    for (std::size_t r = 0; r < rows; ++r) {
      ef += law.probs[r] * f[r];
      eaf += law.probs[r] * std::abs(f[r]);
    }
    for (const auto& g : gs) {
      double eg = 0.0, eag = 0.0, efg = 0.0;
      for (std::size_t r = 0; r < rows; ++r) {
        eg += law.probs[r] * g[r];
        eag += law.probs[r] * std::abs(g[r]);
        efg += law.probs[r] * f[r] * g[r];
      }
      const double residual = efg - ef * eg;
      ++report.instances;
      report.max_residual = std::max(report.max_residual, residual);
      if (residual > 1e-12 * std::max(1.0, eaf * eag)) ++report.violations;
    }
  }
}

}  // namespace

NaReport na_battery(const CountLaw& law, std::uint64_t seed) {
  if (law.bins < 2) throw std::invalid_argument("na_battery: need at least two bins");
  if (law.bins > 63) throw std::invalid_argument("na_battery: too many bins");
  Rng rng(seed);
  std::vector<std::vector<double>> levels(law.bins);
  for (std::size_t b = 0; b < law.bins; ++b) {
    for (std::size_t r = 0; r < law.rows(); ++r) levels[b].push_back(law.at(r, b));
    std::sort(levels[b].begin(), levels[b].end());
    levels[b].erase(std::unique(levels[b].begin(), levels[b].end()), levels[b].end());
  }

  std::vector<std::pair<std::uint64_t, std::uint64_t>> pairs;
  if (law.bins <= 6) {
    const std::uint64_t full = (std::uint64_t{1} << law.bins) - 1;
    for (std::uint64_t a = 1; a <= full; ++a) {
      const std::uint64_t rest = full & ~a;
      for (std::uint64_t b = rest; b > 0; b = (b - 1) & rest) {
        if (a < b) pairs.emplace_back(a, b);
      }
    }
  } else {
    while (pairs.size() < 200) {
      std::uint64_t a = 0, b = 0;
      for (std::size_t i = 0; i < law.bins; ++i) {
        const auto side = rng.below(3);
        if (side == 0) a |= std::uint64_t{1} << i;
        if (side == 1) b |= std::uint64_t{1} << i;
      }
      if (a && b) pairs.emplace_back(a, b);
    }
  }

  NaReport report;
  for (auto [a, b] : pairs) {
    const auto fa = block_functions(law, a, rng, levels);
    const auto fb = block_functions(law, b, rng, levels);
    score_pairs(law, fa.increasing, fb.increasing, report);
    score_pairs(law, fa.decreasing, fb.decreasing, report);
  }
  return report;
}

NaReport multinomial_na_check(const DiscreteDistribution& dist, long long n, std::uint64_t seed) {
  if (dist.size() < 2) throw std::invalid_argument("multinomial_na_check: need N >= 2");
  const CountLaw law = multinomial_count_law(dist.weights(), n);
  NaReport report = na_battery(law, seed);

  const std::size_t bins = law.bins;
  std::vector<double> mean(bins, 0.0);
  for (std::size_t r = 0; r < law.rows(); ++r) {
    for (std::size_t i = 0; i < bins; ++i) mean[i] += law.probs[r] * law.at(r, i);
  }
  const double dn = static_cast<double>(n);
  for (std::size_t i = 0; i < bins; ++i) {
    for (std::size_t j = i + 1; j < bins; ++j) {
      double cov = 0.0;
      for (std::size_t r = 0; r < law.rows(); ++r) {
        cov += law.probs[r] * (law.at(r, i) - mean[i]) * (law.at(r, j) - mean[j]);
      }
      report.covariance_error =
          std::max(report.covariance_error, std::abs(cov + dn * dist[i] * dist[j]));
    }
  }
  return report;
}

CountLaw transform_count_law(TransformKind kind, const DiscreteDistribution& dist, long long n,
                             const TransformSpec& spec) {
  switch (kind) {
    case TransformKind::Merge: {
      const auto* part = std::get_if<PartitionSpec>(&spec);
      if (!part) throw std::invalid_argument("merge needs a PartitionSpec");
      part->validate(dist.size());
      const CountLaw base = multinomial_count_law(dist.weights(), n);
      CountLaw out;
      out.bins = part->groups.size();
      out.probs = base.probs;
      for (std::size_t r = 0; r < base.rows(); ++r) {
        for (const auto& g : part->groups) {
          double s = 0.0;
          for (std::size_t i : g) s += base.at(r, i);
          out.values.push_back(s);
        }
      }
      return out;
    }
    case TransformKind::Split: {
      const auto* sp = std::get_if<SplitParams>(&spec);
      if (!sp) throw std::invalid_argument("split needs SplitParams");
      if (sp->bin >= dist.size() || sp->parts.empty()) throw std::invalid_argument("split: bad bin or parts");
      double total = 0.0;
      for (double v : sp->parts) {
        if (!(v > 0.0)) throw std::invalid_argument("split: parts must be positive");
        total += v;
      }
      if (std::abs(total - dist[sp->bin]) > 1e-12) throw std::invalid_argument("split: parts must sum to the bin weight");
      std::vector<double> frac(sp->parts);
      for (auto& v : frac) v /= total;

      const CountLaw base = multinomial_count_law(dist.weights(), n);
      CountLaw out;
      out.bins = dist.size() - 1 + frac.size();
      for (std::size_t r = 0; r < base.rows(); ++r) {
        const auto c = static_cast<long long>(base.at(r, sp->bin));
        for_each_composition(c, frac.size(), [&](const std::vector<long long>& sub) {
          const double lp = log_multinomial(sub, frac);
          if (lp == -kInf) return;
          for (std::size_t i = 0; i < dist.size(); ++i) {
            if (i == sp->bin) {
              for (long long v : sub) out.values.push_back(static_cast<double>(v));
            } else {
              out.values.push_back(base.at(r, i));
            }
          }
          out.probs.push_back(base.probs[r] * std::exp(lp));
        });
      }
      if (out.rows() > kMaxEnumeratedOutcomes) throw std::length_error("split: instance too large to enumerate");
      return out;
    }
    case TransformKind::Absorb: {
      const auto* ap = std::get_if<AbsorbParams>(&spec);
      if (!ap) throw std::invalid_argument("absorb needs AbsorbParams");
      if (dist.size() < 3) throw std::invalid_argument("absorb: need at least three bins");
      if (ap->bin >= dist.size()) throw std::invalid_argument("absorb: bad bin");
      const double share = dist[ap->bin] / static_cast<double>(dist.size() - 1);
      std::vector<double> w;
      for (std::size_t i = 0; i < dist.size(); ++i) {
        if (i != ap->bin) w.push_back(dist[i] + share);
      }
      CountLaw out = multinomial_count_law(w, n);
      for (auto& v : out.values) v += ap->shift;
      return out;
    }
  }
  throw std::invalid_argument("unknown transform");
}

NaReport transform_na_check(TransformKind kind, const DiscreteDistribution& dist, long long n,
                            const TransformSpec& spec, std::uint64_t seed) {
  const CountLaw law = transform_count_law(kind, dist, n, spec);
  if (law.bins < 2) {
    // A single merged bin has no disjoint pair of blocks to test.
    return NaReport{};
  }
  return na_battery(law, seed);
}

// ---------------------------------------------------------------------------
// Split condition and MGF domination

SplitConditionCheck split_condition_check(double w, std::span<const double> parts, long long n) {
  if (!(w > 0.0 && w < 1.0)) throw std::invalid_argument("split_condition_check: w must lie in (0,1)");
  if (parts.empty()) throw std::invalid_argument("split_condition_check: no parts");
  if (n < 1) throw std::invalid_argument("split_condition_check: n must be positive");
  double total = 0.0;
  double log_pieces = 0.0;
  for (double p : parts) {
    if (!(p > 0.0)) throw std::invalid_argument("split_condition_check: parts must be positive");
    total += p;
    log_pieces += std::log1p(-p);
  }
  if (std::abs(total - w) > 1e-12) throw std::invalid_argument("split_condition_check: parts must sum to w");
  const double dn = static_cast<double>(n);
  SplitConditionCheck c;
  c.whole = std::exp(dn * std::log1p(-w));
  c.pieces = std::exp(dn * log_pieces);
  c.holds = c.whole <= c.pieces + 1e-15;
  return c;
}

std::vector<double> default_lambda_grid() { return {0.01, 0.1, 0.5, 1.0, 2.0, 5.0, 10.0}; }

MgfReport mgf_domination_check(std::span<const FiniteRandomVariable> z_laws,
                               std::span<const double> bernoulli_means,
                               std::span<const double> weights,
                               std::span<const double> lambda_grid) {
  const std::size_t m = z_laws.size();
  if (bernoulli_means.size() != m || weights.size() != m) {
    throw std::invalid_argument("mgf_domination_check: length mismatch");
  }
  for (std::size_t i = 0; i < m; ++i) {
    const auto& z = z_laws[i];
    if (z.min_value() < 0.0 || z.max_value() > 1.0) {
      throw std::invalid_argument("mgf_domination_check: Z must be supported in [0,1]");
    }
    if (!(bernoulli_means[i] >= 0.0 && bernoulli_means[i] <= 1.0) ||
        z.mean() > bernoulli_means[i] + 1e-15) {
      throw std::invalid_argument("mgf_domination_check: requires E[Z_i] <= q_i <= 1");
    }
    if (!(weights[i] >= 0.0 && weights[i] <= 1.0)) {
      throw std::invalid_argument("mgf_domination_check: weights must lie in [0,1]");
    }
  }
  MgfReport report;
  auto record = [&](double lhs, double rhs) {
    const double rel = (lhs - rhs) / rhs;
    ++report.checks;
    report.max_residual = std::max(report.max_residual, rel);
    if (rel > 1e-12) ++report.violations;
  };
  for (double lambda : lambda_grid) {
    if (!(lambda > 0.0)) throw std::invalid_argument("mgf_domination_check: lambda must be positive");
    double log_lhs = 0.0, log_rhs = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
      const double lw = lambda * weights[i];
      const double lhs = std::exp(z_laws[i].log_mgf(lw));
      const double q = bernoulli_means[i];
      const double rhs = 1.0 - q + q * std::exp(lw);
      record(lhs, rhs);
      log_lhs += std::log(lhs);
      log_rhs += std::log(rhs);
    }
    // Product form under independence, compared in log space.
    ++report.checks;
    const double rel = std::expm1(log_lhs - log_rhs);
    report.max_residual = std::max(report.max_residual, rel);
    if (rel > 1e-12) ++report.violations;
  }
  return report;
}

// ---------------------------------------------------------------------------
// Seeded suites

namespace {

struct Accumulator {
  LemmaReport row;
  explicit Accumulator(std::string name) { row.lemma = std::move(name), row.max_residual = -kInf; }
  void add(double residual, bool violated) {
    ++row.instances;
    row.max_residual = std::max(row.max_residual, residual);
    if (violated) ++row.violations;
  }
  void absorb(const NaReport& r) {
    row.instances += r.instances;
    row.violations += r.violations;
    row.max_residual = std::max(row.max_residual, r.max_residual);
  }
};

std::vector<DiscreteDistribution> na_instances(Rng& rng) {
  std::vector<DiscreteDistribution> out;
  for (std::size_t n_bins : {2, 3, 4, 5}) {
    out.push_back(DiscreteDistribution::uniform(n_bins));
    out.push_back(DiscreteDistribution::zipf(n_bins));
    out.push_back(DiscreteDistribution::geometric(n_bins));
    out.emplace_back(random_simplex(rng, n_bins), DiscreteDistribution::Normalization::Renormalize);
  }
  return out;
}

const std::vector<long long> kNaSampleSizes{1, 2, 3, 4, 6};

}  // namespace

std::vector<LemmaReport> run_lemma_suites(const LemmaSuiteConfig& config) {
  Rng rng(config.seed);
  std::vector<LemmaReport> rows;

  {
    Accumulator cov("multinomial_covariance");
    Accumulator na("multinomial_negative_association");
    for (const auto& d : na_instances(rng)) {
      for (long long n : kNaSampleSizes) {
        const auto r = multinomial_na_check(d, n, rng());
        cov.add(r.covariance_error, r.covariance_error > 1e-12);
        na.absorb(r);
      }
    }
    rows.push_back(cov.row);
    rows.push_back(na.row);
  }

  {
    Accumulator split("splitting_negative_association");
    Accumulator merge("merging_negative_association");
    Accumulator absorb("absorption_negative_association");
    for (const auto& d : na_instances(rng)) {
      for (long long n : {2LL, 3LL, 4LL}) {
        const std::size_t bin = rng.below(d.size());
        const std::size_t k = 2 + rng.below(2);
        std::vector<double> parts = random_simplex(rng, k);
        for (auto& p : parts) p *= d[bin];
        split.absorb(transform_na_check(TransformKind::Split, d, n, SplitParams{bin, parts}, rng()));
        merge.absorb(transform_na_check(TransformKind::Merge, d, n, random_partition(rng, d.size()), rng()));
        if (d.size() >= 3) {
          const AbsorbParams ap{static_cast<std::size_t>(rng.below(d.size())), 1.0 + rng.below(3)};
          absorb.absorb(transform_na_check(TransformKind::Absorb, d, n, ap, rng()));
        }
      }
    }
    rows.push_back(split.row);
    rows.push_back(merge.row);
    rows.push_back(absorb.row);
  }

  {
    Accumulator acc("split_condition");
    for (long long t = 0; t < config.split_condition_trials; ++t) {
      const double w = 0.001 + 0.998 * rng.uniform01();
      std::vector<double> parts = random_simplex(rng, 1 + rng.below(6));
      for (auto& p : parts) p *= w;
      // Put the summation residue on the last part so the parts sum to w.
      const double s = std::accumulate(parts.begin(), parts.end() - 1, 0.0);
      parts.back() = w - s;
      if (!(parts.back() > 0.0)) continue;
      const long long n = 1 + static_cast<long long>(rng.below(200));
      const auto c = split_condition_check(w, parts, n);
      acc.add(c.whole - c.pieces, !c.holds);
    }
    rows.push_back(acc.row);
  }

  {
    Accumulator acc("information_monotonicity");
    for (long long t = 0; t < config.info_monotonicity_trials; ++t) {
      const std::size_t n = 2 + rng.below(7);
      const DiscreteDistribution p(random_simplex(rng, n), DiscreteDistribution::Normalization::Renormalize);
      const DiscreteDistribution q(random_simplex(rng, n), DiscreteDistribution::Normalization::Renormalize);
      const auto r = info_monotonicity_check(p, q, random_partition(rng, n));
      acc.add(r.kl_coarse - r.kl_full, !r.holds);
    }
    rows.push_back(acc.row);
  }

  {
    Accumulator acc("partitioning_entropy");
    for (long long t = 0; t < config.partitioning_trials; ++t) {
      std::vector<double> support(6);
      for (auto& v : support) v = 2.0 * rng.uniform01();
      const FiniteRandomVariable x(support, random_simplex(rng, 6));
      const double lo = x.mean();
      const double eps = lo + (x.max_value() - lo) * rng.uniform01();
      const auto r = partitioning_check(x, random_partition(rng, 6), eps);
      acc.add(r.kl_tilted_coarse - r.entropy, !r.holds);
    }
    rows.push_back(acc.row);
  }

  {
    Accumulator acc("mgf_domination");
    for (long long t = 0; t < config.mgf_trials; ++t) {
      const std::size_t m = 1 + rng.below(5);
      std::vector<FiniteRandomVariable> laws;
      std::vector<double> means, weights;
      for (std::size_t i = 0; i < m; ++i) {
        const std::size_t atoms = 2 + rng.below(4);
        std::vector<double> support(atoms);
        for (auto& v : support) v = rng.uniform01();
        laws.emplace_back(support, random_simplex(rng, atoms));
        const double mu = laws.back().mean();
        means.push_back(std::min(1.0, mu + (1.0 - mu) * rng.uniform01() * 0.5));
        weights.push_back(rng.uniform01());
      }
      std::vector<double> grid = default_lambda_grid();
      const auto r = mgf_domination_check(laws, means, weights, grid);
      acc.row.instances += r.checks;
      acc.row.violations += r.violations;
      acc.row.max_residual = std::max(acc.row.max_residual, r.max_residual);
    }
    rows.push_back(acc.row);
  }

  {
    Accumulator acc("chernoff_deviation");
    for (long long t = 0; t < config.chernoff_trials; ++t) {
      std::vector<double> support(5);
      for (auto& v : support) v = -1.0 + 3.0 * rng.uniform01();
      const FiniteRandomVariable x(support, random_simplex(rng, 5));
      const double eps = x.min_value() - 0.5 + (x.max_value() - x.min_value() + 1.0) * rng.uniform01();
      const auto r = deviation_vs_entropy_check(x, eps);
      acc.add(r.probability - r.bound, !r.holds);
    }
    rows.push_back(acc.row);
  }

  return rows;
}

void write_lemma_csv(std::ostream& out, const std::vector<LemmaReport>& rows) {
  const auto old_precision = out.precision(17);
  out << "lemma,instances,violations,max_residual\n";
  for (const auto& r : rows) {
    out << r.lemma << ',' << r.instances << ',' << r.violations << ',' << r.max_residual << '\n';
  }
  out.precision(old_precision);
}

}  // namespace mmb
