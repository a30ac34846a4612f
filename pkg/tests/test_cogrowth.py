import math

import pytest

from diagnostics.cogrowth import (
    alpha_from_rho,
    cogrowth_equivalence,
    cogrowth_rho,
    count_closed_paths,
    crosscheck_word_counts,
    series_within_bounds,
    subgroup_alpha_exact,
    verify_cogrowth_bound,
)
from diagnostics.walks import return_probabilities
from groups.exceptions import ExactnessError, PreconditionError
from groups.words import enumerate_reduced_words
from schreier.core import membership
from schreier.cosets import schreier_ball


def test_cyclic_subgroup_counts(f2, w):
    series = count_closed_paths(schreier_ball(f2, [w("a")], 8), 16)
    assert series.a[0] == 1
    assert all(a == 2 for a in series.a[1:])
    assert series.alpha_hat == pytest.approx(2.0)
    assert series_within_bounds(series, 2)
    assert len(series.to_rows()) == 17


def test_trivial_subgroup_counts(f2):
    series = count_closed_paths(schreier_ball(f2, [], 4), 8)
    assert series.b[4] == 28
    assert all(a == 0 for a in series.a[1:])


def test_b_matches_return_probabilities(f2, w):
    sb = schreier_ball(f2, [w("a a"), w("b b")], 6)
    cog = count_closed_paths(sb, 12)
    returns = return_probabilities(sb, 12)
    for n in range(13):
        assert cog.b[n] == returns.p[n] * 4**n


def test_horizon(f2, w):
    with pytest.raises(ExactnessError):
        count_closed_paths(schreier_ball(f2, [w("a")], 3), 7)


@pytest.mark.parametrize("gens", [["a"], ["a a", "b b"], ["a b a' b'"]])
def test_word_counts_agree_with_path_counts(f2, core_of, gens):
    core = core_of(*gens)
    sb = schreier_ball(f2, [f2.alphabet.word(g) for g in gens], 4)
    assert crosscheck_word_counts(core, sb, 8, all_words_limit=8).agreed
    series = count_closed_paths(sb, 8)
    for n in range(9):
        in_h = sum(1 for g in enumerate_reduced_words(f2.alphabet, n) if membership(core, g))
        assert in_h == series.a[n]


def test_cyclic_subgroup_word_counts_to_sixteen(f2, core_of, w):
    report = crosscheck_word_counts(core_of("a"), schreier_ball(f2, [w("a")], 8), 16)
    assert report.agreed
    assert [row.a_words for row in report.rows[1:]] == [2] * 16


def test_cogrowth_formula():
    assert cogrowth_rho(1.0, 4) == pytest.approx(math.sqrt(3) / 2)
    assert cogrowth_rho(math.sqrt(3), 4) == pytest.approx(math.sqrt(3) / 2)
    assert cogrowth_rho(3.0, 4) == pytest.approx(1.0)
    assert alpha_from_rho(cogrowth_rho(2.5, 4), 4) == pytest.approx(2.5)
    with pytest.raises(PreconditionError):
        cogrowth_rho(3.5, 4)


@pytest.mark.parametrize("d", [4, 6])
def test_cogrowth_formula_is_monotone_and_continuous(d):
    s = math.sqrt(d - 1)
    grid = [s + i * (d - 1 - s) / 200 for i in range(201)]
    values = [cogrowth_rho(a, d) for a in grid]
    assert all(x <= y + 1e-12 for x, y in zip(values, values[1:]))
    assert cogrowth_rho(s + 1e-9, d) == pytest.approx(2 * s / d)


def test_alpha_of_cyclic_subgroup(core_of):
    estimate = subgroup_alpha_exact(core_of("a"))
    assert estimate.alpha == pytest.approx(1.0, abs=1e-6)
    assert estimate.directed_edges == 2


def test_alpha_enclosure(core_of):
    estimate = subgroup_alpha_exact(core_of("a a", "b b"))
    assert estimate.alpha == pytest.approx(math.sqrt(3), abs=1e-6)
    assert estimate.lower <= estimate.alpha <= estimate.upper
    assert estimate.upper - estimate.lower < 1e-6


def test_alpha_of_squares_matches_word_counts(f2, core_of, w):
    core = core_of("a a", "b b")
    sb = schreier_ball(f2, [w("a a"), w("b b")], 7)
    report = crosscheck_word_counts(core, sb, 14, all_words_limit=6)
    a = [row.a_words for row in report.rows]
    # Reduced words of H are reduced words in a², b² of half the length.
    assert a[1::2] == [0] * 7
    assert a[2::2] == [4 * 3 ** (m - 1) for m in range(1, 8)]
    alpha = subgroup_alpha_exact(core).alpha
    assert abs(a[14] ** (1 / 14) - alpha) < 0.05


def test_alpha_of_trivial_subgroup(core_of):
    assert subgroup_alpha_exact(core_of()).alpha == 0.0


def test_bound_passes_for_cyclic_subgroup(core_of):
    report = verify_cogrowth_bound(core_of("a"), radius=12, n_max=24)
    assert report.passed
    assert report.to_dict()["bound"] == "PASS"
    assert report.beta_hat < 4


def test_bound_needs_infinite_index(core_of):
    with pytest.raises(PreconditionError):
        verify_cogrowth_bound(core_of("a", "b"))


def test_equivalence_check():
    assert cogrowth_equivalence(0.87, 1.0, 4)
    assert not cogrowth_equivalence(0.99, 1.0, 4)
