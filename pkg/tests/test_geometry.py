from fractions import Fraction
from itertools import combinations

import networkx as nx
import pytest

from diagnostics.geometry import (
    coset_deficiency,
    estimate_delta_slim,
    estimate_delta_trim,
    four_point_delta,
    gromov_product,
    inscribed_triple,
    is_periodically_geodesic,
    quasiconvexity_epsilon,
    set_gromov_product,
    stabilization_table,
    subgroup_vertices,
)
from groups.balls import ball_distance, cayley_ball
from groups.exceptions import ExactnessError, InconsistentMetricError, PreconditionError


@pytest.fixture
def tree(f2):
    return cayley_ball(f2, 3)


def test_gromov_product():
    assert gromov_product(3, 4, 5) == 1
    assert gromov_product(2, 2, 0) == 2
    assert gromov_product(1, 2, 2) == Fraction(1, 2)
    with pytest.raises(InconsistentMetricError):
        gromov_product(1, 1, 5)


def _common_prefix(u, v):
    n = 0
    for x, y in zip(u.letters, v.letters):
        if x != y:
            break
        n += 1
    return n


def test_tree_product_is_common_prefix(tree):
    outer = [v for v in tree.vertices() if tree.distances[v] >= 2][:12]
    for x, y in combinations(outer, 2):
        dxy = ball_distance(tree, x, y).value
        product = gromov_product(tree.distances[x], tree.distances[y], dxy)
        assert product == _common_prefix(tree.words[x], tree.words[y])


def test_tree_is_zero_hyperbolic(tree):
    trim = estimate_delta_trim(tree)
    assert trim.delta == 0
    assert trim.provenance.triangle_radius == 3
    assert trim.provenance.mode == "exhaustive"
    assert estimate_delta_slim(tree).delta == 0
    assert four_point_delta(tree) == 0


def test_surface_triangles_need_room(surface):
    ball = cayley_ball(surface, 3)
    estimate = estimate_delta_trim(ball)
    assert estimate.provenance.triangle_radius == 1
    assert estimate.delta >= 0
    with pytest.raises(ExactnessError):
        estimate_delta_trim(ball, triangle_radius=2)


def test_sampled_mode_is_reproducible(surface):
    ball = cayley_ball(surface, 3)
    first = estimate_delta_trim(ball, "sampled", seed=5, count=50)
    second = estimate_delta_trim(ball, "sampled", seed=5, count=50)
    assert first == second
    assert first.provenance.to_dict()["seed"] == 5
    with pytest.raises(PreconditionError):
        estimate_delta_trim(ball, "sampled")


SURFACE_DELTA_TRIM = {3: (0, 1, 45), 4: (4, 2, 2145)}


@pytest.mark.slow
def test_surface_delta_over_growing_populations(surface):
    rows = stabilization_table(
        lambda r: cayley_ball(surface, r), [3, 4], lambda b: estimate_delta_trim(b)
    )
    for r, estimate in rows:
        delta, triangle_radius, count = SURFACE_DELTA_TRIM[r]
        assert estimate.provenance.triangle_radius == triangle_radius
        assert estimate.provenance.count == count
        assert estimate.delta == delta
    # Unit triangles are 0-trim; radius 2 reaches half-relator bigons of the octagon, whose
    # matched midpoints sit at distance 4 = 2r, the largest value the population allows.
    assert rows[0][1].provenance.count < rows[1][1].provenance.count


@pytest.mark.parametrize("radius", [1, 2, 3, 4])
def test_tree_balls_are_zero_hyperbolic(f2, radius):
    ball = cayley_ball(f2, radius)
    assert estimate_delta_trim(ball).delta == 0
    assert estimate_delta_trim(ball).provenance.triangle_radius == radius
    assert estimate_delta_slim(ball).delta == 0


@pytest.mark.parametrize("radius", [1, 2, 3])
def test_four_point_condition_on_whole_tree_balls(f2, radius):
    assert four_point_delta(cayley_ball(f2, radius), radius=radius) == 0


@pytest.mark.slow
def test_four_point_condition_on_tree_ball_of_radius_four(f2):
    assert four_point_delta(cayley_ball(f2, 4), radius=4) == 0


@pytest.mark.slow
def test_products_shrink_along_geodesics(surface):
    ball = cayley_ball(surface, 4)
    graph = ball.networkx
    points = [v for v in ball.vertices() if ball.distances[v] <= 2]
    rows = {u: nx.single_source_shortest_path_length(graph, u) for u in points}

    def product(u, v):
        return gromov_product(ball.distances[u], ball.distances[v], rows[u][v])

    for y, z in combinations(points, 2):
        ys = [ball.read(ball.words[y].letters[:i]) for i in range(len(ball.words[y]) + 1)]
        zs = [ball.read(ball.words[z].letters[:i]) for i in range(len(ball.words[z]) + 1)]
        for y1 in ys:
            for z1 in zs:
                assert product(y1, z1) <= product(y, z)


def test_set_products_on_tree_satisfy_the_zero_delta_bound(tree):
    points = [v for v in tree.vertices() if tree.distances[v] <= 2]
    single = {
        (u, v): set_gromov_product(tree, [u], [v]) for u in points for v in points
    }
    sets = [(u,) for u in points] + list(combinations(points, 2))

    def product(q1, q2):
        return max(single[u, v] for u in q1 for v in q2)

    table = {(q1, q2): product(q1, q2) for q1 in sets for q2 in sets}
    # Q ranges over single points: two-point sets break the implication.
    for q in sets[: len(points)]:
        for q1 in sets:
            for q2 in sets:
                # (Q', Q)_x > L and (Q'', Q)_x > L imply (Q', Q'')_x >= L for every L.
                assert table[q1, q2] >= min(table[q1, q], table[q2, q])


def test_inscribed_triple_degenerate(tree):
    x = tree.vertex_of(tree.alphabet.word("a b"))
    y = tree.vertex_of(tree.alphabet.word("b"))
    triple = inscribed_triple(tree, x, y, x)
    assert triple.p == triple.q == triple.r == x
    assert triple.positions == (0, 0, 0)


def test_inscribed_triple_in_tree(tree):
    word = tree.alphabet.word
    x, y = tree.vertex_of(word("a b")), tree.vertex_of(word("a b'"))
    triple = inscribed_triple(tree, x, y, tree.base)
    # In a tree the three points coincide at the branch point.
    assert triple.p == triple.q == triple.r == tree.vertex_of(word("a"))


def test_quasiconvexity_of_cyclic_subgroup(f2, core_of):
    ball = cayley_ball(f2, 4)
    members = subgroup_vertices(ball, core_of("a"))
    assert len(members) == 9
    assert quasiconvexity_epsilon(ball, members) == 0
    with pytest.raises(PreconditionError):
        quasiconvexity_epsilon(ball, [])


def test_coset_deficiency(f2, core_of, w):
    ball = cayley_ball(f2, 4)
    core = core_of("a")
    report = coset_deficiency(ball, core, w("b"))
    assert report.k_hat == 0
    assert report.tested == 9
    with pytest.raises(PreconditionError):
        coset_deficiency(ball, core, w("a b"))


def test_set_product_of_independent_subgroups(f2, core_of):
    ball = cayley_ball(f2, 4)
    hset = subgroup_vertices(ball, core_of("a"))
    fset = subgroup_vertices(ball, core_of("b"))
    assert set_gromov_product(ball, hset, fset) == 0
    assert set_gromov_product(ball, hset, hset) == 4


@pytest.mark.parametrize("radius", [2, 3, 4, 5])
def test_set_product_stops_at_shared_prefix(f2, core_of, radius):
    ball = cayley_ball(f2, radius)
    hset = subgroup_vertices(ball, core_of("a"))
    fset = subgroup_vertices(ball, core_of("a b"))
    assert set_gromov_product(ball, hset, fset) == 1


def test_quasiconvexity_of_squares(f2, core_of):
    ball = cayley_ball(f2, 4)
    members = subgroup_vertices(ball, core_of("a a", "b b"))
    # The geodesic from a a to b' b' runs through a and b', each one step from H.
    assert quasiconvexity_epsilon(ball, members) == 1


def test_deficiency_is_twice_the_product(f2, core_of, w):
    ball = cayley_ball(f2, 4)
    report = coset_deficiency(ball, core_of("a b"), w("b'"))
    assert report.k_hat == 2
    assert report.max_product == 1
    assert report.k_hat == 2 * report.max_product


def test_periodic_geodesics(f2, w):
    ball = cayley_ball(f2, 6)
    assert is_periodically_geodesic(ball, w("a b"), 3) == (True, None)
    assert is_periodically_geodesic(ball, w("a b a'"), 2) == (False, 2)
    with pytest.raises(ExactnessError):
        is_periodically_geodesic(ball, w("a b"), 4)
