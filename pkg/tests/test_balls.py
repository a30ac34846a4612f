import pytest

from groups.balls import ball_distance, cayley_ball
from groups.exceptions import BudgetExceededError, PreconditionError


@pytest.mark.parametrize("radius", range(5))
def test_free_ball_sizes(f2, radius):
    ball = cayley_ball(f2, radius)
    assert ball.n_vertices == 2 * 3**radius - 1
    assert ball.convex
    ball.check_invariants()


def test_free_ball_layers(f2):
    ball = cayley_ball(f2, 3)
    assert ball.n_vertices == 53
    assert max(ball.distances) == 3
    assert len(ball.interior_vertices()) == 17
    # A tree: one fewer edge than vertices.
    assert ball.n_edges == 52
    assert ball.summary() == {"radius": 3, "vertices": 53, "edges": 52, "interior": 17}


def test_vertex_lookup(f2):
    ball = cayley_ball(f2, 3)
    word = f2.alphabet.word("a b")
    v = ball.vertex_of(word)
    assert v is not None
    assert ball.words[v] == word
    assert ball.read(word.letters) == v
    assert ball.read(f2.alphabet.word("a a a a").letters) is None


def test_restrict(f2):
    ball = cayley_ball(f2, 3)
    small = ball.restrict(2)
    assert small.n_vertices == 17
    small.check_invariants()
    with pytest.raises(PreconditionError):
        ball.restrict(-1)


def test_surface_ball(surface):
    ball = cayley_ball(surface, 2)
    assert ball.n_vertices == 1 + 8 + 56
    assert not ball.convex
    ball.check_invariants()


def test_surface_ball_distance_exactness(surface):
    ball = cayley_ball(surface, 2)
    outer = [v for v in ball.vertices() if ball.distances[v] == 2]
    assert ball_distance(ball, ball.base, outer[0]) == type(ball_distance(ball, 0, 0))(2, True)
    far = ball_distance(ball, outer[0], outer[-1])
    assert not far.exact


def test_budget_exceeded_reports_completed_radius(f2):
    with pytest.raises(BudgetExceededError) as info:
        cayley_ball(f2, 3, budget=10)
    assert info.value.completed_radius == 1
    assert info.value.exit_code == 3


def test_networkx_view(f2):
    graph = cayley_ball(f2, 2).networkx
    assert graph.number_of_nodes() == 17
    assert graph.number_of_edges() == 16
