import math

import pytest

import mmbound as mb


def test_lambert_and_gamma():
    assert mb.lambert_w_m1(-2 * math.exp(-2)) == pytest.approx(-2, abs=1e-12)
    eps = 6 * math.exp(-2.5)
    assert mb.gamma_eps(eps) == pytest.approx(6, rel=1e-12)
    assert mb.compensation_gap(eps) == pytest.approx(math.exp(-2.5), rel=1e-12)


def test_bounds():
    r = mb.linear_bound(100, 6 * math.exp(-2.5), mb.TailDirection.Upper)
    assert r.c_coeff == pytest.approx(5 / 36)
    assert r.bound == pytest.approx(math.exp(-r.exponent))
    q = mb.quadratic_bound(100, 0.1875)
    assert q.exponent == pytest.approx(mb.linear_bound(100, 0.1875).exponent)
    p = mb.baseline_prior_bound(1000, 0.05, mb.TailDirection.Lower)
    assert p.exponent == pytest.approx(4.8)
    with pytest.raises(ValueError):
        mb.linear_bound(10, 1.5)


def test_crossover():
    assert mb.epsilon_crossover() == 0.1875
    assert mb.c_prime_n(1910) >= 1.92
    r = mb.find_n_crossover(1.0)
    assert r.n_star <= 427


def test_distribution_and_oracle():
    d = mb.DiscreteDistribution.uniform(2)
    atoms = mb.exact_missing_mass_distribution(d, 2)
    assert atoms == [pytest.approx((0.0, 0.5)), pytest.approx((0.5, 0.5))]
    s = mb.missing_mass_stats(d, 2)
    assert s.mean == pytest.approx(0.25)
    assert mb.exact_missing_mass_variance(d, 2) == pytest.approx(0.0625)
    with pytest.raises(ValueError):
        mb.DiscreteDistribution([0.5, 0.6])


def test_tail_and_determinism():
    d = mb.DiscreteDistribution.from_family("zipf:10:1")
    a = mb.empirical_tail(d, 30, 0.05, mb.TailDirection.Upper, 5000, 3)
    b = mb.empirical_tail(d, 30, 0.05, mb.TailDirection.Upper, 5000, 3)
    assert a.estimate == b.estimate
    assert 0.0 <= a.estimate <= 1.0


def test_cli_and_lemmas():
    rc, out, err = mb.run_cli(["exact", "--family", "uniform:2", "--n", "2"])
    assert rc == 0, err
    assert out.startswith("# mmbound")
    rows = [r for r in mb.run_lemma_suites(1)]
    assert len(rows) == 10
    assert all(r.violations == 0 for r in rows)
