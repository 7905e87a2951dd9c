#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <sstream>

#include "mmb/distribution.hpp"
#include "mmb/montecarlo.hpp"
#include "mmb/rng.hpp"
#include "oracles.hpp"

using namespace mmb;

TEST(Rng, DeterministicStreams) {
  Rng a(derive_seed(42, 7)), b(derive_seed(42, 7)), c(derive_seed(42, 8));
  bool differs = false;
  for (int i = 0; i < 100; ++i) {
    const auto x = a();
    EXPECT_EQ(x, b());
    differs = differs || x != c();
  }
  EXPECT_TRUE(differs);
  Rng r(1);
  for (int i = 0; i < 10000; ++i) {
    const double u = r.uniform01();
    EXPECT_GE(u, 0.0);
    EXPECT_LT(u, 1.0);
    EXPECT_LT(r.below(7), 7u);
  }
}

TEST(Alias, ReproducesWeights) {
  const auto d = DiscreteDistribution::zipf(6);
  AliasTable t(d);
  Rng r(3);
  std::vector<long long> counts(6, 0);
  const int draws = 600000;
  for (int i = 0; i < draws; ++i) ++counts[t.sample(r)];
  for (std::size_t i = 0; i < 6; ++i) {
    const double se = std::sqrt(d[i] * (1 - d[i]) / draws);
    EXPECT_NEAR(counts[i] / double(draws), d[i], 5 * se);
  }
  DiscreteDistribution with_zero({0.5, 0.0, 0.5});
  AliasTable z(with_zero);
  for (int i = 0; i < 10000; ++i) EXPECT_NE(z.sample(r), 1u);
}

TEST(Sample, TrivialCases) {
  for (std::uint64_t t = 0; t < 50; ++t) {
    EXPECT_EQ(sample_missing_mass(DiscreteDistribution({1.0}), 9, 5, t).missing_mass, 0.0);
    const auto s = sample_missing_mass(DiscreteDistribution::uniform(2), 1, 5, t);
    EXPECT_DOUBLE_EQ(s.missing_mass, 0.5);
  }
  const auto s = sample_missing_mass(DiscreteDistribution::geometric(8), 37, 1, 3);
  long long total = 0;
  for (auto c : s.counts) total += c;
  EXPECT_EQ(total, 37);
  EXPECT_GE(s.missing_mass, 0.0);
  EXPECT_LE(s.missing_mass, 1.0);
}

TEST(Sample, DeterministicGivenSeed) {
  const auto d = DiscreteDistribution::zipf(20);
  for (std::uint64_t t = 0; t < 20; ++t) {
    const auto a = sample_missing_mass(d, 50, 99, t);
    const auto b = sample_missing_mass(d, 50, 99, t);
    EXPECT_EQ(a.counts, b.counts);
    EXPECT_EQ(a.missing_mass, b.missing_mass);
  }
}

TEST(Sample, MomentsMatchClosedForm) {
  const auto d = DiscreteDistribution::uniform(10);
  const long long n = 20;
  const auto stats = missing_mass_stats(d, n);
  AliasTable table(d);
  const int trials = 1000000;
  double sum = 0.0, sum2 = 0.0;
  for (int t = 0; t < trials; ++t) {
    const double y = sample_missing_mass(d, table, n, 2024, t).missing_mass;
    sum += y;
    sum2 += y * y;
  }
  const double mean = sum / trials;
  const double var = sum2 / trials - mean * mean;
  const double exact_var = exact_missing_mass_variance(d, n);
  EXPECT_NEAR(mean, stats.mean, 4 * std::sqrt(exact_var / trials));
  EXPECT_NEAR(var, exact_var, 0.02 * exact_var);
  // The independent-surrogate variance is strictly larger here.
  EXPECT_GT(stats.variance, 1.2 * exact_var);
}

TEST(Exact, SmallExamples) {
  const auto u2 = exact_missing_mass_distribution(DiscreteDistribution::uniform(2), 2);
  ASSERT_EQ(u2.atoms.size(), 2u);
  EXPECT_NEAR(u2.atoms[0].value, 0.0, 1e-15);
  EXPECT_NEAR(u2.atoms[0].probability, 0.5, 1e-15);
  EXPECT_NEAR(u2.atoms[1].value, 0.5, 1e-15);
  EXPECT_NEAR(u2.atoms[1].probability, 0.5, 1e-15);
  const auto one = exact_missing_mass_distribution(DiscreteDistribution({1.0}), 4);
  ASSERT_EQ(one.atoms.size(), 1u);
  EXPECT_EQ(one.atoms[0].value, 0.0);
  EXPECT_NEAR(one.atoms[0].probability, 1.0, 1e-15);
  EXPECT_THROW(exact_missing_mass_distribution(DiscreteDistribution::uniform(23), 4),
               std::invalid_argument);
}

TEST(Exact, MatchesSequenceEnumeration) {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> U(0.05, 1.0);
  for (int t = 0; t < 30; ++t) {
    const std::size_t N = 2 + t % 4;
    const int n = 1 + t % 5;
    std::vector<double> w(N);
    for (auto& x : w) x = U(rng);
    DiscreteDistribution d(w, DiscreteDistribution::Normalization::Renormalize);
    const auto law = exact_missing_mass_distribution(d, n);
    const auto ref = oracle::missing_mass_by_sequences({d.weights().begin(), d.weights().end()}, n);
    for (const auto& [v, p] : ref) {
      double got = 0.0;
      for (const auto& a : law.atoms)
        if (std::abs(a.value - v) <= 1e-13) got += a.probability;
      EXPECT_NEAR(got, p, 1e-13) << "N=" << N << " n=" << n << " v=" << v;
    }
  }
}

TEST(Exact, MomentsAndMassOnRandomLaws) {
  std::mt19937_64 rng(23);
  std::exponential_distribution<double> E(1.0);
  for (int t = 0; t < 40; ++t) {
    std::vector<double> w(1 + t % 14);
    for (auto& x : w) x = E(rng);
    DiscreteDistribution d(w, DiscreteDistribution::Normalization::Renormalize);
    for (long long n : {1, 3, 10, 40}) {
      const auto law = exact_missing_mass_distribution(d, n);
      const auto s = missing_mass_stats(d, n);
      EXPECT_NEAR(law.total_probability(), 1.0, 1e-10);
      EXPECT_NEAR(law.mean(), s.mean, 1e-10);
      EXPECT_NEAR(law.variance(), exact_missing_mass_variance(d, n), 1e-10);
      EXPECT_LE(law.variance(), s.variance + 1e-10);
      for (const auto& a : law.atoms) {
        EXPECT_GE(a.value, -1e-15);
        EXPECT_LE(a.value, 1.0 + 1e-15);
      }
    }
  }
}

TEST(Tail, Examples) {
  const auto d2 = DiscreteDistribution::uniform(2);
  const auto none = empirical_tail(d2, 2, 1.0, TailDirection::Upper, 2000, 1);
  EXPECT_EQ(none.estimate, 0.0);
  const auto law = exact_missing_mass_distribution(d2, 2);
  EXPECT_NEAR(law.tail(0.25, 0.2, TailDirection::Upper), 0.5, 1e-15);
  const auto mc = empirical_tail(d2, 2, 0.2, TailDirection::Upper, 100000, 7);
  EXPECT_NEAR(mc.std_error, std::sqrt(mc.estimate * (1 - mc.estimate) / mc.trials), 1e-15);
  EXPECT_NEAR(mc.estimate, 0.5, 4 * mc.std_error);
  const auto other = empirical_tail(d2, 2, 0.2, TailDirection::Upper, 100000, 8);
  EXPECT_NEAR(mc.estimate, other.estimate, 6 * std::hypot(mc.std_error, other.std_error));
  // Lower tail of the same law: Y <= 0.25 - 0.2 only at Y = 0.
  EXPECT_NEAR(law.tail(0.25, 0.2, TailDirection::Lower), 0.5, 1e-15);
}

TEST(Tail, InTailBoundary) {
  EXPECT_TRUE(in_tail(0.5, 0.25, 0.25, TailDirection::Upper));
  EXPECT_FALSE(in_tail(0.49, 0.25, 0.25, TailDirection::Upper));
  EXPECT_TRUE(in_tail(0.0, 0.25, 0.25, TailDirection::Lower));
  EXPECT_TRUE(in_tail(0.0, 0.25, 0.25, TailDirection::TwoSided));
}

TEST(Tail, ThreadCountDoesNotChangeResults) {
  const auto d = DiscreteDistribution::geometric(30);
  const std::vector<double> eps{0.02, 0.05};
  const std::vector<TailDirection> dirs{TailDirection::Upper, TailDirection::Lower};
  const auto a = empirical_tails(d, 60, eps, dirs, 20000, 5, 1);
  const auto b = empirical_tails(d, 60, eps, dirs, 20000, 5, 4);
  ASSERT_EQ(a.size(), b.size());
  for (std::size_t i = 0; i < a.size(); ++i) EXPECT_EQ(a[i].estimate, b[i].estimate);
}

TEST(Validate, ExactPathZeroViolations) {
  ValidationConfig cfg;
  cfg.epsilons = {0.05, 0.1, 0.2, 0.4};
  cfg.directions = {TailDirection::Upper, TailDirection::Lower, TailDirection::TwoSided};
  cfg.path = OraclePath::Exact;
  const auto rows = validate_bounds(DiscreteDistribution::zipf(10), 10, cfg);
  EXPECT_FALSE(rows.empty());
  for (const auto& r : rows) {
    EXPECT_FALSE(r.violation);
    EXPECT_EQ(r.trials, 0);
    EXPECT_EQ(r.std_error, 0.0);
  }
}

TEST(Validate, LooseBoundNeverViolated) {
  ValidationConfig cfg;
  cfg.epsilons = {1e-9};
  cfg.methods = {BoundMethod::BaselinePrior};
  cfg.path = OraclePath::Exact;
  for (const auto& r : validate_bounds(DiscreteDistribution::uniform(3), 2, cfg)) {
    EXPECT_NEAR(r.bound, 1.0, 1e-12);
    EXPECT_FALSE(r.violation);
  }
}

TEST(Validate, CsvHeader) {
  ValidationConfig cfg;
  cfg.epsilons = {0.1};
  cfg.trials = 1000;
  cfg.path = OraclePath::MonteCarlo;
  std::ostringstream os;
  write_validation_csv(os, validate_bounds(DiscreteDistribution::uniform(5), 30, cfg));
  EXPECT_EQ(os.str().substr(0, os.str().find('\n')),
            "epsilon,direction,method,bound,estimate,std_error,trials,violation");
}
