from fractions import Fraction

import pytest

from diagnostics.amenability import (
    boundary,
    cheeger_search,
    cheeger_witness_set,
    connected_subsets,
    doubling_check,
    interval_family,
    neighborhood,
    verify_cheeger_witness,
)
from groups.balls import cayley_ball
from groups.exceptions import ExactnessError, PreconditionError
from report.config import kernel_generators
from schreier.cosets import schreier_ball


@pytest.fixture
def tree(f2):
    return cayley_ball(f2, 3)


@pytest.fixture
def kernel_view(f2, ab):
    return schreier_ball(f2, kernel_generators(ab, 26), 24).view()


def test_boundary_and_neighbourhood(tree):
    assert len(boundary(tree, {tree.base})) == 4
    assert len(neighborhood(tree, {tree.base}, 2)) == 17


def test_margin_is_enforced(tree):
    outer = next(v for v in tree.vertices() if tree.distances[v] == 3)
    with pytest.raises(ExactnessError):
        boundary(tree, {outer})
    with pytest.raises(PreconditionError):
        neighborhood(tree, set(), 1)


@pytest.mark.parametrize("size, expected", [(1, 1), (2, 5), (3, 23)])
def test_connected_subsets_are_counted_once(tree, size, expected):
    sets = list(connected_subsets(tree, tree.base, size))
    assert len(sets) == expected
    assert len(set(sets)) == expected
    assert all(tree.base in S for S in sets)


def test_cheeger_on_the_tree(tree):
    report = cheeger_search(tree, 3)
    # In a 4-regular tree a set of n vertices has 2n + 2 boundary vertices.
    assert report.best_ratio == Fraction(8, 3)
    assert verify_cheeger_witness(tree, report)


def test_cheeger_on_cyclic_subgroup(f2, w):
    view = schreier_ball(f2, [w("a")], 10).view()
    report = cheeger_search(view, 6)
    assert report.best_ratio > 0
    assert report.search_mode == "exhaustive-connected(6)"
    assert verify_cheeger_witness(view, report)
    assert view.base in cheeger_witness_set(view, report)


def test_doubling_holds_for_cyclic_subgroup(f2, w):
    view = schreier_ball(f2, [w("a")], 10).view()
    report = doubling_check(view, 2, max_size=6, q=2)
    assert not report.refuted
    assert report.verdict == "supported-up-to(6)"
    assert report.checked > 0


def test_greedy_folner_on_kernel(kernel_view):
    report = cheeger_search(kernel_view, 20, "greedy")
    assert report.search_mode == "greedy-folner"
    assert report.best_ratio == Fraction(1, 10)
    assert verify_cheeger_witness(kernel_view, report)


@pytest.mark.parametrize("k", range(1, 11))
def test_intervals_refute_doubling_on_kernel(kernel_view, k):
    sets = interval_family(kernel_view, [2 * k + 1])
    report = doubling_check(kernel_view, k, sets=sets, q=2)
    assert report.refuted
    assert report.witness_sizes == (2 * k + 1, 4 * k + 1)


def test_doubling_argument_checks(kernel_view):
    with pytest.raises(PreconditionError):
        doubling_check(kernel_view, 2, max_size=3, q=1)
    with pytest.raises(PreconditionError):
        doubling_check(kernel_view, 2)


def test_unknown_cheeger_mode(tree):
    with pytest.raises(PreconditionError):
        cheeger_search(tree, 3, "random")
