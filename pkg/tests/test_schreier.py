import pytest

from groups.exceptions import BudgetExceededError, MalformedInputError, PreconditionError
from groups.presentations import free_presentation
from report.config import kernel_generators
from schreier.core import (
    free_basis,
    intersect_cores,
    is_infinite,
    membership,
    shortest_cycle_word,
    subgroup_index_info,
)
from schreier.cosets import CosetMode, schreier_ball


def test_cyclic_subgroup_core(core_of, w):
    core = core_of("a")
    assert core.n_vertices == 1
    assert core.rank == 1
    assert membership(core, w("a a a a a"))
    assert not membership(core, w("b"))
    assert not membership(core, w("b a b'"))
    assert not subgroup_index_info(core).finite


def test_squares_core(core_of, w):
    core = core_of("a a", "b b")
    assert core.n_vertices == 3
    assert core.rank == 2
    assert membership(core, w("a a b' b'"))
    assert not membership(core, w("a b"))
    assert str(subgroup_index_info(core)) == "infinite index"


def test_finite_index(core_of):
    core = core_of("a", "b a b'", "b b")
    info = subgroup_index_info(core)
    assert info.finite
    assert info.index == 2
    assert str(info) == "finite index 2"


def test_trivial_generators_fold_away(core_of):
    core = core_of("a a'")
    assert core.n_vertices == 1
    assert core.rank == 0
    assert not is_infinite(core)


def test_folding_merges_common_prefixes(core_of, w):
    core = core_of("a b", "a b'")
    assert core.n_vertices == 2
    assert core.rank == 2
    assert membership(core, w("a b a b'"))


def test_intersection(core_of, w):
    meet = intersect_cores(core_of("a"), core_of("a a", "b"))
    assert meet.rank == 1
    assert membership(meet, w("a a"))
    assert not membership(meet, w("a"))


def test_free_basis_lies_in_subgroup(core_of):
    core = core_of("a a", "b b")
    basis = free_basis(core)
    assert len(basis) == 2
    assert all(membership(core, g) for g in basis)


def test_shortest_cycle_word(core_of):
    assert str(shortest_cycle_word(core_of("a a", "b b"))) == "a a"
    assert str(shortest_cycle_word(core_of("a"))) == "a"


def test_exact_free_schreier_ball(f2, w):
    sb = schreier_ball(f2, [w("a")], 3)
    assert sb.mode is CosetMode.EXACT_FREE
    assert sb.certified
    graph = sb.graph
    assert graph.n_vertices == 27
    graph.check_invariants()
    assert graph.step(graph.base, 0) == graph.base


def test_trivial_subgroup_matches_cayley_ball(f2):
    assert schreier_ball(f2, [], 3).graph.n_vertices == 53


def test_kernel_ball_is_a_line(f2, ab):
    sb = schreier_ball(f2, kernel_generators(ab, 5), 3)
    graph = sb.graph
    assert graph.n_vertices == 7
    assert all(graph.step(v, 2) == v for v in graph.vertices())


def test_graph_at_smaller_radius(f2, w):
    sb = schreier_ball(f2, [w("a")], 4)
    assert sb.graph_at(2).n_vertices == 1 + 2 + 6
    with pytest.raises(PreconditionError):
        sb.graph_at(5)


def test_bounded_coset_ball(surface):
    sb = schreier_ball(surface, [surface.alphabet.word("a")], 1)
    assert sb.mode is CosetMode.BOUNDED_COSET
    assert sb.certified
    graph = sb.graph
    assert graph.n_vertices == 7
    assert graph.step(graph.base, 0) == graph.base
    graph.check_invariants()


def test_exact_free_view_distances(f2, w):
    view = schreier_ball(f2, [w("a a")], 4).view()
    v = view.base
    assert view.distance(v) == 0
    v = view.step(v, 0)
    assert view.distance(v) == 1
    v = view.step(v, 0)
    assert v == view.base
    assert str(view.word(view.step(view.base, 2))) == "b"


def test_budget_on_materialisation(f2):
    sb = schreier_ball(f2, [], 6, budget=100)
    with pytest.raises(BudgetExceededError):
        _ = sb.graph


def test_rejects_foreign_generator(f2):
    other = free_presentation(3).alphabet
    with pytest.raises(MalformedInputError):
        schreier_ball(f2, [other.word("c")], 2)
