#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "mmb/distribution.hpp"
#include "mmb/negdep.hpp"

using namespace mmb;

namespace {
FiniteRandomVariable bernoulli(double p) { return FiniteRandomVariable({0.0, 1.0}, {1 - p, p}); }
}  // namespace

TEST(FiniteRv, Basics) {
  const auto x = bernoulli(0.25);
  EXPECT_DOUBLE_EQ(x.mean(), 0.25);
  EXPECT_NEAR(x.log_mgf(1.0), std::log(0.75 + 0.25 * std::exp(1.0)), 1e-15);
  EXPECT_THROW(FiniteRandomVariable({0.0, 1.0}, {0.5, 0.6}), std::invalid_argument);
  EXPECT_THROW(FiniteRandomVariable({0.0}, {0.5, 0.5}), std::invalid_argument);
}

TEST(Chernoff, BernoulliClosedForm) {
  const auto s = chernoff_entropy(bernoulli(0.5), 0.75);
  EXPECT_NEAR(s.value, 0.75 * std::log(1.5) + 0.25 * std::log(0.5), 1e-12);
  EXPECT_NEAR(s.lambda, std::log(3.0), 1e-8);
  EXPECT_FALSE(s.infinite);
}

TEST(Chernoff, EdgeCases) {
  const FiniteRandomVariable c({0.3}, {1.0});
  EXPECT_EQ(chernoff_entropy(c, 0.3).value, 0.0);
  EXPECT_EQ(chernoff_entropy(c, 0.1).value, 0.0);
  EXPECT_TRUE(chernoff_entropy(c, 0.5).infinite);
  EXPECT_NEAR(chernoff_entropy(bernoulli(0.2), 1.0).value, -std::log(0.2), 1e-15);
  EXPECT_EQ(chernoff_entropy(bernoulli(0.2), 0.2).value, 0.0);
}

TEST(Chernoff, NonnegativeAndNondecreasing) {
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> U(0.0, 1.0);
  for (int t = 0; t < 100; ++t) {
    std::vector<double> s(5), p(5);
    double tot = 0;
    for (int i = 0; i < 5; ++i) { s[i] = 4 * U(rng) - 2; p[i] = U(rng) + 0.01; tot += p[i]; }
    for (auto& v : p) v /= tot;
    const FiniteRandomVariable x(s, p);
    double prev = 0.0;
    for (int k = 0; k < 20; ++k) {
      const double e = x.mean() + (x.max_value() - x.mean()) * k / 20.0;
      const double v = chernoff_entropy(x, e).value;
      EXPECT_GE(v, 0.0);
      EXPECT_GE(v, prev - 1e-12);
      prev = v;
    }
  }
}

TEST(Deviation, Examples) {
  const auto d = deviation_vs_entropy_check(bernoulli(0.5), 0.75);
  EXPECT_DOUBLE_EQ(d.probability, 0.5);
  EXPECT_TRUE(d.holds);
  const auto below = deviation_vs_entropy_check(bernoulli(0.5), -1.0);
  EXPECT_EQ(below.probability, 1.0);
  EXPECT_EQ(below.entropy, 0.0);
  EXPECT_TRUE(below.holds);
}

TEST(Partition, Validation) {
  PartitionSpec bad{{{0, 1}, {1, 2}}};
  EXPECT_THROW(bad.validate(3), std::invalid_argument);
  PartitionSpec gap{{{0}, {2}}};
  EXPECT_THROW(gap.validate(3), std::invalid_argument);
  PartitionSpec empty{{{0, 1, 2}, {}}};
  EXPECT_THROW(empty.validate(3), std::invalid_argument);
  EXPECT_NO_THROW(PartitionSpec::identity(4).validate(4));
  const std::vector<double> p{0.1, 0.2, 0.3, 0.4};
  EXPECT_EQ(coarsen(p, PartitionSpec{{{0, 3}, {1, 2}}}), (std::vector<double>{0.5, 0.5}));
}

TEST(Kl, Conventions) {
  const std::vector<double> p{0.0, 1.0}, q{0.5, 0.5};
  EXPECT_NEAR(kl_divergence(p, q), std::log(2.0), 1e-15);
  EXPECT_THROW(kl_divergence(q, p), std::domain_error);
  EXPECT_THROW(kl_divergence(std::vector<double>{1.0}, q), std::invalid_argument);
}

TEST(Partitioning, IdentityAndSingleGroup) {
  const FiniteRandomVariable x({0.0, 0.5, 1.0, 2.0}, {0.4, 0.3, 0.2, 0.1});
  const auto id = partitioning_check(x, PartitionSpec::identity(4), 1.2);
  EXPECT_NEAR(id.kl_tilted_coarse, id.entropy, 1e-10);
  EXPECT_TRUE(id.holds);
  const auto one = partitioning_check(x, PartitionSpec::single_group(4), 1.2);
  EXPECT_NEAR(one.kl_tilted_coarse, 0.0, 1e-15);
  EXPECT_LT(one.kl_tilted_coarse, one.entropy);
  EXPECT_NEAR(one.kl_tilted_full, one.entropy, 1e-10);
}

TEST(InfoMonotonicity, HandComputed) {
  DiscreteDistribution p({0.5, 0.25, 0.25}), q({0.25, 0.25, 0.5});
  const auto r = info_monotonicity_check(p, q, PartitionSpec{{{0}, {1, 2}}});
  EXPECT_NEAR(r.kl_full, 0.25 * std::log(2.0), 1e-15);
  EXPECT_NEAR(r.kl_coarse, 0.5 * std::log(2.0) + 0.5 * std::log(2.0 / 3.0), 1e-15);
  EXPECT_TRUE(r.holds);
  EXPECT_GT(r.kl_full - r.kl_coarse, 0.0);
  const auto same = info_monotonicity_check(p, p, PartitionSpec{{{0, 2}, {1}}});
  EXPECT_EQ(same.kl_full, 0.0);
  EXPECT_EQ(same.kl_coarse, 0.0);
  EXPECT_THROW(info_monotonicity_check(p, DiscreteDistribution::uniform(2), PartitionSpec::identity(3)),
               std::invalid_argument);
  const auto idp = info_monotonicity_check(p, q, PartitionSpec::identity(3));
  EXPECT_NEAR(idp.kl_full, idp.kl_coarse, 1e-15);
}

TEST(CountLaw, MultinomialEnumeration) {
  const std::vector<double> w{0.2, 0.3, 0.5};
  const auto law = multinomial_count_law(w, 4);
  EXPECT_EQ(law.rows(), 15u);  // C(6, 2)
  double total = 0;
  for (std::size_t r = 0; r < law.rows(); ++r) {
    total += law.probs[r];
    EXPECT_EQ(law.at(r, 0) + law.at(r, 1) + law.at(r, 2), 4.0);
  }
  EXPECT_NEAR(total, 1.0, 1e-15);
  EXPECT_THROW(multinomial_count_law(std::vector<double>(40, 1.0 / 40), 40), std::length_error);
}

TEST(MultinomialNa, TwoBinsCovarianceExact) {
  for (long long n : {1, 2, 5, 9}) {
    const auto r = multinomial_na_check(DiscreteDistribution({0.3, 0.7}), n);
    EXPECT_LE(r.covariance_error, 1e-12);
    EXPECT_TRUE(r.holds());
  }
}

TEST(MultinomialNa, UniformThreeByThree) {
  const auto r = multinomial_na_check(DiscreteDistribution::uniform(3), 3);
  EXPECT_GT(r.instances, 0);
  EXPECT_EQ(r.violations, 0);
  EXPECT_LE(r.max_residual, 1e-12);
  EXPECT_LE(r.covariance_error, 1e-12);
}

TEST(MultinomialNa, PositivelyAssociatedLawIsCaught) {
  // Two perfectly correlated counts: the battery must flag it.
  CountLaw law{2, {0, 0, 1, 1}, {0.5, 0.5}};
  EXPECT_FALSE(na_battery(law).holds());
}

TEST(MultinomialNa, RandomInstances) {
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> U(0.05, 1.0);
  for (int t = 0; t < 20; ++t) {
    std::vector<double> w(2 + t % 5);
    for (auto& x : w) x = U(rng);
    DiscreteDistribution d(w, DiscreteDistribution::Normalization::Renormalize);
    const auto r = multinomial_na_check(d, 1 + t % 6, t);
    EXPECT_TRUE(r.holds()) << t;
    EXPECT_LE(r.covariance_error, 1e-12);
  }
}

TEST(Transform, MergeIdentityMatchesPlain) {
  const auto d = DiscreteDistribution::zipf(4);
  const auto plain = multinomial_na_check(d, 4, 3);
  const auto merged = transform_na_check(TransformKind::Merge, d, 4, PartitionSpec::identity(4), 3);
  EXPECT_EQ(plain.instances, merged.instances);
  EXPECT_EQ(plain.violations, merged.violations);
  EXPECT_NEAR(plain.max_residual, merged.max_residual, 1e-15);
}

TEST(Transform, SplitAbsorbMerge) {
  const auto u2 = DiscreteDistribution::uniform(2);
  const auto split = transform_na_check(TransformKind::Split, u2, 2, SplitParams{0, {0.25, 0.25}});
  EXPECT_GT(split.instances, 0);
  EXPECT_TRUE(split.holds());
  const auto law = transform_count_law(TransformKind::Split, u2, 2, SplitParams{0, {0.25, 0.25}});
  EXPECT_EQ(law.bins, 3u);
  const auto u3 = DiscreteDistribution::uniform(3);
  const auto abs = transform_na_check(TransformKind::Absorb, u3, 2, AbsorbParams{2, 1.0});
  EXPECT_GT(abs.instances, 0);
  EXPECT_TRUE(abs.holds());
  const auto alaw = transform_count_law(TransformKind::Absorb, u3, 2, AbsorbParams{2, 1.0});
  EXPECT_EQ(alaw.bins, 2u);
  for (std::size_t r = 0; r < alaw.rows(); ++r) EXPECT_EQ(alaw.at(r, 0) + alaw.at(r, 1), 4.0);
  const auto merge = transform_na_check(TransformKind::Merge, DiscreteDistribution::zipf(5), 3,
                                        PartitionSpec{{{0, 4}, {1}, {2, 3}}});
  EXPECT_TRUE(merge.holds());
  EXPECT_THROW(transform_na_check(TransformKind::Split, u2, 2, SplitParams{0, {0.2, 0.2}}),
               std::invalid_argument);
}

TEST(SplitCondition, Examples) {
  const std::vector<double> halves{0.25, 0.25};
  const auto r = split_condition_check(0.5, halves, 1);
  EXPECT_DOUBLE_EQ(r.whole, 0.5);
  EXPECT_DOUBLE_EQ(r.pieces, 0.5625);
  EXPECT_TRUE(r.holds);
  const std::vector<double> single{0.3};
  const auto s = split_condition_check(0.3, single, 7);
  EXPECT_EQ(s.whole, s.pieces);
  const std::vector<double> wrong{0.1, 0.1};
  EXPECT_THROW(split_condition_check(0.3, wrong, 2), std::invalid_argument);
}

TEST(Mgf, EqualityAndConvexity) {
  const auto grid = default_lambda_grid();
  EXPECT_EQ(grid, (std::vector<double>{0.01, 0.1, 0.5, 1, 2, 5, 10}));
  std::vector<FiniteRandomVariable> same{bernoulli(0.3), bernoulli(0.6)};
  const std::vector<double> means{0.3, 0.6}, weights{0.4, 0.9};
  const auto eq = mgf_domination_check(same, means, weights, grid);
  EXPECT_TRUE(eq.holds());
  EXPECT_NEAR(eq.max_residual, 0.0, 1e-12);
  std::vector<FiniteRandomVariable> half{FiniteRandomVariable({0.5}, {1.0})};
  const std::vector<double> m1{0.5}, w1{1.0};
  const auto cv = mgf_domination_check(half, m1, w1, grid);
  EXPECT_TRUE(cv.holds());
  EXPECT_LT(cv.max_residual, 0.0);
  const std::vector<double> low{0.2};
  EXPECT_THROW(mgf_domination_check(half, low, w1, grid), std::invalid_argument);
}

TEST(LemmaSuites, AllHold) {
  LemmaSuiteConfig cfg;
  cfg.split_condition_trials = 500;
  cfg.info_monotonicity_trials = 100;
  cfg.partitioning_trials = 50;
  cfg.mgf_trials = 100;
  cfg.chernoff_trials = 100;
  const auto rows = run_lemma_suites(cfg);
  EXPECT_EQ(rows.size(), 10u);
  for (const auto& r : rows) {
    EXPECT_GT(r.instances, 0) << r.lemma;
    EXPECT_EQ(r.violations, 0) << r.lemma;
  }
  const auto again = run_lemma_suites(cfg);
  for (std::size_t i = 0; i < rows.size(); ++i) EXPECT_EQ(rows[i].max_residual, again[i].max_residual);
}
