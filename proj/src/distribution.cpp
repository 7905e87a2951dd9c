#include "mmb/distribution.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace mmb {

namespace {

double checked_sum(const std::vector<double>& w) {
  if (w.empty()) throw std::invalid_argument("distribution: empty support");
  double sum = 0.0;
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (!std::isfinite(w[i]) || w[i] < 0.0) {
      throw std::invalid_argument("distribution: weight " + std::to_string(i) +
                                  " is negative or not finite");
    }
    sum += w[i];
  }
  return sum;
}

std::vector<double> normalized(std::vector<double> w) {
  const double sum = std::accumulate(w.begin(), w.end(), 0.0);
  for (auto& x : w) x /= sum;
  return w;
}

std::size_t parse_size(const std::string& s, const std::string& spec) {
  std::size_t pos = 0;
  long long v = 0;
  try {
    v = std::stoll(s, &pos);
  } catch (const std::exception&) {
    pos = 0;
  }
  if (pos != s.size() || v <= 0) {
    throw std::invalid_argument("bad support size in family spec '" + spec + "'");
  }
  return static_cast<std::size_t>(v);
}

double parse_real(const std::string& s, const std::string& spec) {
  std::size_t pos = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &pos);
  } catch (const std::exception&) {
    pos = 0;
  }
  if (pos != s.size()) throw std::invalid_argument("bad parameter in family spec '" + spec + "'");
  return v;
}

}  // namespace

DiscreteDistribution::DiscreteDistribution(std::vector<double> weights, Normalization mode) {
  const double sum = checked_sum(weights);
  if (mode == Normalization::Renormalize) {
    if (!(sum > 0.0)) throw std::invalid_argument("distribution: weights sum to zero");
    weights_ = normalized(std::move(weights));
    return;
  }
  if (std::abs(sum - 1.0) > kSumTolerance) {
    std::ostringstream os;
    os.precision(17);
    os << "distribution: weights sum to " << sum << ", expected 1";
    throw std::invalid_argument(os.str());
  }
  weights_ = std::move(weights);
}

DiscreteDistribution DiscreteDistribution::uniform(std::size_t n_outcomes) {
  if (n_outcomes == 0) throw std::invalid_argument("uniform: N must be positive");
  return DiscreteDistribution(std::vector<double>(n_outcomes, 1.0 / static_cast<double>(n_outcomes)),
                              Normalization::Renormalize);
}

DiscreteDistribution DiscreteDistribution::zipf(std::size_t n_outcomes, double s) {
  if (n_outcomes == 0) throw std::invalid_argument("zipf: N must be positive");
  if (!std::isfinite(s) || s < 0.0) throw std::invalid_argument("zipf: exponent must be >= 0");
  std::vector<double> w(n_outcomes);
  for (std::size_t i = 0; i < n_outcomes; ++i) w[i] = std::pow(static_cast<double>(i + 1), -s);
  return DiscreteDistribution(std::move(w), Normalization::Renormalize);
}

DiscreteDistribution DiscreteDistribution::geometric(std::size_t n_outcomes, double p) {
  if (n_outcomes == 0) throw std::invalid_argument("geometric: N must be positive");
  if (!(p > 0.0 && p < 1.0)) throw std::invalid_argument("geometric: p must lie in (0,1)");
  std::vector<double> w(n_outcomes);
  double term = p;
  for (std::size_t i = 0; i < n_outcomes; ++i) {
    w[i] = term;
    term *= 1.0 - p;
  }
  return DiscreteDistribution(std::move(w), Normalization::Renormalize);
}

DiscreteDistribution DiscreteDistribution::from_family(const std::string& spec) {
  std::vector<std::string> parts;
  std::stringstream ss(spec);
  for (std::string item; std::getline(ss, item, ':');) parts.push_back(item);
  if (parts.size() < 2 || parts.size() > 3) {
    throw std::invalid_argument("family spec must look like name:N[:param], got '" + spec + "'");
  }
  const std::size_t n = parse_size(parts[1], spec);
  const auto& name = parts[0];
  if (name == "uniform") {
    if (parts.size() != 2) throw std::invalid_argument("uniform takes no parameter");
    return uniform(n);
  }
  if (name == "zipf") return zipf(n, parts.size() == 3 ? parse_real(parts[2], spec) : 1.0);
  if (name == "geometric") return geometric(n, parts.size() == 3 ? parse_real(parts[2], spec) : 0.5);
  throw std::invalid_argument("unknown distribution family '" + name + "'");
}

DiscreteDistribution DiscreteDistribution::parse(std::istream& in, bool renormalize) {
  std::vector<double> w;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream ls(line);
    double v;
    if (!(ls >> v)) {
      ls.clear();
      std::string rest;
      if (ls >> rest) throw std::invalid_argument("line " + std::to_string(line_no) + ": not a number");
      continue;
    }
    std::string rest;
    if (ls >> rest) {
      throw std::invalid_argument("line " + std::to_string(line_no) + ": expected one weight per line");
    }
    if (v < 0.0) throw std::invalid_argument("line " + std::to_string(line_no) + ": negative weight");
    w.push_back(v);
  }
  const double sum = checked_sum(w);
  if (!renormalize && std::abs(sum - 1.0) > 1e-9) {
    std::ostringstream os;
    os.precision(17);
    os << "weights sum to " << sum << " (use --renormalize to rescale)";
    throw std::invalid_argument(os.str());
  }
  // Within the file tolerance the residual is rounding in the text; rescale.
  return DiscreteDistribution(std::move(w), Normalization::Renormalize);
}

DiscreteDistribution DiscreteDistribution::load(const std::string& path, bool renormalize) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open distribution file '" + path + "'");
  return parse(in, renormalize);
}

double DiscreteDistribution::max_weight() const {
  return *std::max_element(weights_.begin(), weights_.end());
}

double occupancy_prob(double w, long long n) {
  if (!(w > 0.0 && w <= 1.0)) throw std::domain_error("occupancy_prob: w must lie in (0,1]");
  if (n < 1) throw std::domain_error("occupancy_prob: n must be positive");
  const double dn = static_cast<double>(n);
  if (w < 0.5) return std::exp(dn * std::log1p(-w));
  return std::pow(1.0 - w, dn);
}

MissingMassStats missing_mass_stats(const DiscreteDistribution& dist, long long n) {
  if (n < 1) throw std::domain_error("missing_mass_stats: n must be positive");
  MissingMassStats s;
  s.n = n;
  for (double w : dist.weights()) {
    if (w == 0.0) continue;
    const double q = occupancy_prob(w, n);
    const double var_i = q * (1.0 - q);
    s.mean += w * q;
    s.variance += w * w * var_i;
    s.weighted_variance += w * var_i;
  }
  return s;
}

double exact_missing_mass_variance(const DiscreteDistribution& dist, long long n) {
  if (n < 1) throw std::domain_error("exact_missing_mass_variance: n must be positive");
  const double dn = static_cast<double>(n);
  const auto w = dist.weights();
  double v = 0.0;
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (w[i] == 0.0) continue;
    const double qi = occupancy_prob(w[i], n);
    v += w[i] * w[i] * qi * (1.0 - qi);
    for (std::size_t j = i + 1; j < w.size(); ++j) {
      if (w[j] == 0.0) continue;
      const double qj = occupancy_prob(w[j], n);
      // Cov(Y_i, Y_j) = (1 - w_i - w_j)^n - q_i q_j
      double cov;
      if (w[i] + w[j] >= 1.0) {
        cov = -qi * qj;
      } else {
        const double d = std::log1p(-w[i] - w[j]) - std::log1p(-w[i]) - std::log1p(-w[j]);
        cov = qi * qj * std::expm1(dn * d);
      }
      v += 2.0 * w[i] * w[j] * cov;
    }
  }
  return v;
}

bool satisfies_threshold_condition(double w, double a, long long n) {
  if (w <= a / static_cast<double>(n)) return true;
  return occupancy_prob(w, n) <= std::exp(-a);
}

ThresholdPartition threshold_partition(const DiscreteDistribution& dist, double a, long long n) {
  if (n < 2 || !(a > 1.0 && a < static_cast<double>(n))) {
    throw std::domain_error("threshold_partition: requires 1 < a < n");
  }
  ThresholdPartition part;
  part.a = a;
  part.n = n;
  part.tau = a / static_cast<double>(n);
  for (std::size_t i = 0; i < dist.size(); ++i) {
    (dist[i] <= part.tau ? part.small_indices : part.large_indices).push_back(i);
  }
  return part;
}

SplitWeights split_large_weights(const ThresholdPartition& partition,
                                 const DiscreteDistribution& dist) {
  const double tau = partition.tau;
  if (!(tau > 0.0)) throw std::invalid_argument("split_large_weights: invalid partition");
  SplitWeights out;
  for (std::size_t i : partition.large_indices) {
    const double w = dist[i];
    if (w < tau) throw std::invalid_argument("split_large_weights: index below threshold");
    auto k = static_cast<long long>(std::floor(w / tau));
    auto remainder = [&](long long kk) { return std::fma(-static_cast<double>(kk - 1), tau, w); };
    // floor(w / tau) can be off by one when w is a multiple of tau.
    while (remainder(k) >= 2.0 * tau) ++k;
    while (k > 1 && remainder(k) < tau) --k;
    for (long long j = 0; j + 1 < k; ++j) {
      out.pieces.push_back(tau);
      out.origin.push_back(i);
    }
    out.pieces.push_back(remainder(k));
    out.origin.push_back(i);
  }
  return out;
}

double variance_upper_bound(double a, long long n) {
  if (n < 2 || !(a > 1.0 && a < static_cast<double>(n))) {
    throw std::domain_error("variance_upper_bound: requires 1 < a < n");
  }
  return a / static_cast<double>(n) * std::exp(-a);
}

}  // namespace mmb
