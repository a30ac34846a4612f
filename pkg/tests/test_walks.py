import math
from fractions import Fraction

import pytest

from diagnostics.cogrowth import cogrowth_rho
from diagnostics.walks import (
    decay_sigma,
    estimate_rho,
    monte_carlo_returns,
    return_probabilities,
)
from groups.balls import cayley_ball
from groups.exceptions import ExactnessError, PreconditionError
from schreier.cosets import schreier_ball
from tests.oracles import closed_word_count


def test_tree_return_probabilities(f2, ab):
    series = return_probabilities(schreier_ball(f2, [], 4), 8)
    assert series.p[0] == 1
    assert series.p[2] == Fraction(1, 4)
    assert series.p[3] == 0
    assert series.p[4] == Fraction(7, 64)
    assert series.counts[4] == 28 == closed_word_count(ab, 4)
    assert series.is_exact(8)
    assert not series.truncated


def test_lumped_space_matches_materialised_ball(f2, w):
    sb = schreier_ball(f2, [w("a a"), w("b a b")], 4)
    lumped = return_probabilities(sb, 8)
    explicit = return_probabilities(sb.graph, 8)
    assert lumped.p == explicit.p


def test_cayley_ball_and_trivial_subgroup_agree(f2):
    assert return_probabilities(cayley_ball(f2, 4), 8).p == return_probabilities(
        schreier_ball(f2, [], 4), 8
    ).p


def test_horizon_is_enforced(f2):
    sb = schreier_ball(f2, [], 3)
    with pytest.raises(ExactnessError):
        return_probabilities(sb, 7)
    series = return_probabilities(sb, 7, allow_truncation=True)
    assert series.truncated
    assert not series.is_exact(7)


def test_rho_of_the_tree():
    from groups.presentations import free_presentation

    sb = schreier_ball(free_presentation(2), [], 20)
    series = return_probabilities(sb, 40)
    estimate = estimate_rho(series)
    assert abs(estimate.rho_hat - math.sqrt(3) / 2) < 0.02
    # Every root-test value is a lower bound.
    assert all(r <= estimate.rho_hat + 1e-12 for _, r in series.even_roots())
    assert not series.supermultiplicativity_violations()


def test_rho_of_cyclic_subgroup(f2, w):
    series = return_probabilities(schreier_ball(f2, [w("a")], 12), 24)
    estimate = estimate_rho(series)
    assert abs(estimate.rho_hat - cogrowth_rho(1.0, 4)) < 0.03
    assert estimate.fit_window[1] == 12


def test_estimate_needs_enough_terms(f2):
    series = return_probabilities(schreier_ball(f2, [], 7), 14)
    with pytest.raises(PreconditionError):
        estimate_rho(series)


def test_decay_sigma(f2, w):
    series = return_probabilities(schreier_ball(f2, [w("a")], 8), 16)
    report = decay_sigma(series)
    assert report.max_ratio >= 1.0
    assert report.sigma == estimate_rho(series).rho_hat


def test_csv_rows(f2):
    rows = return_probabilities(schreier_ball(f2, [], 3), 6).to_rows()
    assert len(rows) == 7
    assert rows[2] == (2, 1, 4, 0.25)


def test_monte_carlo_is_reproducible(f2, w):
    sb = schreier_ball(f2, [w("a")], 6)
    first = monte_carlo_returns(sb, 12, 2000, seed=7, workers=3)
    second = monte_carlo_returns(sb, 12, 2000, seed=7, workers=3)
    assert first.p_hat == second.p_hat
    assert first.p_hat[0] == 1.0
    assert first.walks == 2000
    assert first.workers == 3


def test_monte_carlo_agrees_with_exact_returns(f2, w):
    sb = schreier_ball(f2, [w("a")], 12)
    exact = return_probabilities(sb, 24)
    sampled = monte_carlo_returns(sb, 24, 20000, seed=42)
    for n in range(25):
        p = float(exact.p[n])
        sigma = max(math.sqrt(p * (1 - p) / sampled.walks), sampled.stderr[n])
        assert abs(sampled.p_hat[n] - p) <= 4 * sigma, n


def test_monte_carlo_tree_return_at_two_steps(f2):
    sampled = monte_carlo_returns(schreier_ball(f2, [], 2), 2, 10**6, seed=42)
    sigma = math.sqrt(0.25 * 0.75 / 10**6)
    assert abs(sampled.p_hat[2] - 0.25) <= 3 * sigma
    assert sampled.p_hat[1] == 0.0


def test_monte_carlo_rejects_zero_walks(f2):
    with pytest.raises(PreconditionError):
        monte_carlo_returns(schreier_ball(f2, [], 2), 4, 0, seed=1)
