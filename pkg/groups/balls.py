"""Finite radius-R views of Cayley and Schreier graphs.

A :class:`BallGraph` stores, per vertex, the target of each of the ``2k`` letters (``None`` when
the target lies outside the ball), the BFS distance from the base and the shortlex-least word
reaching the vertex. Vertices are numbered in BFS order, which is shortlex order of those words.

Two builders share the BFS:

* :func:`explore_canonical` for ambient graphs with a canonical state per vertex (free groups,
  and free-host Schreier graphs where a vertex is a core vertex plus a reduced tail);
* :func:`explore_with_oracle` for presented hosts, where a candidate ``u·x`` is merged into an
  existing vertex when an equality oracle says so. Candidates are bucketed by an invariant key
  and only compared with vertices of the same key at distance ``d-1``, ``d`` or ``d+1``.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from functools import cached_property
from typing import (
    Callable,
    Dict,
    Hashable,
    Iterator,
    List,
    Optional,
    Protocol,
    Sequence,
    Tuple,
)

import networkx as nx

from storage.logging_compat import get_logger
from utils.env import int_env

from .exceptions import BudgetExceededError, InvariantBreachError, PreconditionError
from .presentations import Presentation
from .words import Letters, MarkedAlphabet, Word, _reduce

logger = get_logger(__name__)

DEFAULT_VERTEX_BUDGET = 2_000_000


def default_vertex_budget() -> int:
    return int_env("ATLAS_VERTEX_BUDGET", DEFAULT_VERTEX_BUDGET)


class GraphView(Protocol):
    """What the combinatorial diagnostics need from a ball: distances and labelled steps."""

    alphabet: MarkedAlphabet
    radius: int

    @property
    def base(self) -> Hashable: ...

    def distance(self, v) -> int: ...

    def step(self, v, x: int): ...


@dataclass(frozen=True, eq=False)
class BallGraph:
    alphabet: MarkedAlphabet
    radius: int
    targets: Tuple[Tuple[Optional[int], ...], ...]
    distances: Tuple[int, ...]
    words: Tuple[Word, ...]
    convex: bool = False
    base: int = 0
    _vertex_of: Dict[Letters, int] = field(init=False, repr=False)

    def __post_init__(self):
        object.__setattr__(self, "_vertex_of", {w.letters: i for i, w in enumerate(self.words)})

    def __len__(self) -> int:
        return len(self.targets)

    @property
    def n_vertices(self) -> int:
        return len(self.targets)

    @property
    def n_edges(self) -> int:
        """Positive edges, counting a loop once."""
        return sum(1 for _ in self.positive_edges())

    def distance(self, v: int) -> int:
        return self.distances[v]

    def step(self, v: int, x: int) -> Optional[int]:
        return self.targets[v][x]

    def is_interior(self, v: int) -> bool:
        return self.distances[v] <= self.radius - 1

    def vertices(self) -> range:
        return range(len(self.targets))

    def interior_vertices(self) -> List[int]:
        return [v for v in self.vertices() if self.is_interior(v)]

    def vertex_of(self, w: Word) -> Optional[int]:
        """The vertex whose stored shortlex representative is ``w`` (None otherwise)."""
        return self._vertex_of.get(w.letters)

    def read(self, letters: Sequence[int], start: Optional[int] = None) -> Optional[int]:
        """Follow ``letters`` from ``start`` (default the base); None if the path leaves the ball."""
        v = self.base if start is None else start
        for x in letters:
            v = self.targets[v][x]
            if v is None:
                return None
        return v

    def positive_edges(self) -> Iterator[Tuple[int, int, int]]:
        """``(u, letter, v)`` for every positive letter edge inside the ball."""
        for u, row in enumerate(self.targets):
            for x in range(0, len(row), 2):
                v = row[x]
                if v is not None:
                    yield u, x, v

    def check_invariants(self) -> None:
        """Raise :class:`InvariantBreachError` unless determinism, involution and completeness hold."""
        size = self.alphabet.size
        for u, row in enumerate(self.targets):
            if len(row) != size:
                raise InvariantBreachError(f"vertex {u} has {len(row)} letter slots, expected {size}")
            for x, v in enumerate(row):
                if v is None:
                    if self.is_interior(u):
                        raise InvariantBreachError(f"interior vertex {u} misses letter {x}")
                    continue
                if self.targets[v][x ^ 1] != u:
                    raise InvariantBreachError(f"edge {u} -{x}-> {v} has no reverse")
                if abs(self.distances[u] - self.distances[v]) > 1:
                    raise InvariantBreachError(f"edge {u} -> {v} jumps more than one layer")
        if self.distances[self.base] != 0:
            raise InvariantBreachError("base is not at distance 0")
        seen = _bfs_distances(self, self.base)
        if any(seen.get(v) != d for v, d in enumerate(self.distances)):
            raise InvariantBreachError("stored distances disagree with BFS")

    def restrict(self, radius: int) -> "BallGraph":
        """The sub-ball of the given smaller radius (vertex order preserved)."""
        if radius >= self.radius:
            return self
        if radius < 0:
            raise PreconditionError(f"radius must be nonnegative, got {radius}")
        keep = [v for v in self.vertices() if self.distances[v] <= radius]
        renum = {v: i for i, v in enumerate(keep)}
        targets = tuple(
            tuple(renum.get(t) if t is not None else None for t in self.targets[v]) for v in keep
        )
        return BallGraph(
            self.alphabet,
            radius,
            targets,
            tuple(self.distances[v] for v in keep),
            tuple(self.words[v] for v in keep),
            self.convex,
            renum[self.base],
        )

    @cached_property
    def networkx(self) -> nx.MultiGraph:
        """Undirected multigraph: one edge per positive letter edge, ``label`` = letter name."""
        graph = nx.MultiGraph()
        for v in self.vertices():
            graph.add_node(v, distance=self.distances[v], word=str(self.words[v]))
        for u, x, v in self.positive_edges():
            graph.add_edge(u, v, label=self.alphabet.name(x))
        return graph

    def summary(self) -> Dict[str, int]:
        return {
            "radius": self.radius,
            "vertices": self.n_vertices,
            "edges": self.n_edges,
            "interior": len(self.interior_vertices()),
        }


def _bfs_distances(ball: BallGraph, source: int) -> Dict[int, int]:
    dist = {source: 0}
    queue = deque([source])
    while queue:
        u = queue.popleft()
        for v in ball.targets[u]:
            if v is not None and v not in dist:
                dist[v] = dist[u] + 1
                queue.append(v)
    return dist


def _check_budget(count: int, budget: int, completed: int) -> None:
    if count > budget:
        raise BudgetExceededError(
            f"ball exceeded the vertex budget of {budget} after completing radius {completed}",
            completed_radius=completed,
            budget=budget,
        )


def explore_canonical(
    alphabet: MarkedAlphabet,
    radius: int,
    start,
    step: Callable[[Hashable, int], Hashable],
    *,
    budget: Optional[int] = None,
    convex: bool = False,
) -> BallGraph:
    """BFS over an ambient graph whose vertices have canonical hashable states.

    ``step(state, x)`` must be total (every ambient vertex has all ``2k`` edges).
    """
    if radius < 0:
        raise PreconditionError(f"radius must be nonnegative, got {radius}")
    budget = default_vertex_budget() if budget is None else budget
    size = alphabet.size
    order = alphabet.letters
    index = {start: 0}
    states = [start]
    words: List[Letters] = [()]
    dists = [0]
    targets: List[List[Optional[int]]] = [[None] * size]
    layer = [0]
    for d in range(radius):
        nxt = []
        for u in layer:
            su, wu, row = states[u], words[u], targets[u]
            for x in order:
                if row[x] is not None:
                    continue
                t = step(su, x)
                v = index.get(t)
                if v is None:
                    v = len(states)
                    index[t] = v
                    states.append(t)
                    words.append(wu + (x,))
                    dists.append(d + 1)
                    targets.append([None] * size)
                    nxt.append(v)
                row[x] = v
                targets[v][x ^ 1] = u
        _check_budget(len(states), budget, d)
        layer = nxt
    # Edges among boundary vertices.
    for u in layer:
        su, row = states[u], targets[u]
        for x in order:
            if row[x] is None:
                v = index.get(step(su, x))
                if v is not None:
                    row[x] = v
                    targets[v][x ^ 1] = u
    return BallGraph(
        alphabet,
        radius,
        tuple(tuple(r) for r in targets),
        tuple(dists),
        tuple(Word(alphabet, w, True) for w in words),
        convex,
    )


def explore_with_oracle(
    alphabet: MarkedAlphabet,
    radius: int,
    key: Callable[[Letters], Hashable],
    equal: Callable[[Letters, Letters], Optional[bool]],
    *,
    budget: Optional[int] = None,
) -> Tuple[BallGraph, int]:
    """BFS where a candidate word is merged into an existing vertex when ``equal`` says so.

    ``equal(u, v)`` returns True, False, or None when it cannot decide; undecided comparisons
    count as distinct and are returned as the second element so callers can mark the result
    uncertified.
    """
    if radius < 0:
        raise PreconditionError(f"radius must be nonnegative, got {radius}")
    budget = default_vertex_budget() if budget is None else budget
    size = alphabet.size
    order = alphabet.letters
    words: List[Letters] = [()]
    dists = [0]
    targets: List[List[Optional[int]]] = [[None] * size]
    buckets: Dict[Hashable, List[int]] = {key(()): [0]}
    by_word: Dict[Letters, int] = {(): 0}
    unresolved = 0

    def locate(candidate: Letters, du: int) -> Tuple[Optional[int], Hashable]:
        nonlocal unresolved
        reduced = _reduce(candidate)
        hit = by_word.get(reduced)
        if hit is not None:
            return hit, None
        k = key(reduced)
        for v in buckets.get(k, ()):
            if abs(dists[v] - du) > 1:
                continue
            verdict = equal(reduced, words[v])
            if verdict is None:
                unresolved += 1
            elif verdict:
                return v, k
        return None, k

    layer = [0]
    for d in range(radius):
        nxt = []
        for u in layer:
            wu, row = words[u], targets[u]
            for x in order:
                if row[x] is not None:
                    continue
                v, k = locate(wu + (x,), d)
                if v is None:
                    v = len(words)
                    words.append(_reduce(wu + (x,)))
                    by_word[words[v]] = v
                    dists.append(d + 1)
                    targets.append([None] * size)
                    buckets.setdefault(k, []).append(v)
                    nxt.append(v)
                row[x] = v
                targets[v][x ^ 1] = u
        _check_budget(len(words), budget, d)
        layer = nxt
    for u in layer:
        wu, row = words[u], targets[u]
        for x in order:
            if row[x] is None:
                v, _ = locate(wu + (x,), radius)
                if v is not None:
                    row[x] = v
                    targets[v][x ^ 1] = u
    ball = BallGraph(
        alphabet,
        radius,
        tuple(tuple(r) for r in targets),
        tuple(dists),
        tuple(Word(alphabet, w, True) for w in words),
    )
    return ball, unresolved


def cayley_ball(p: Presentation, radius: int, *, budget: Optional[int] = None) -> BallGraph:
    """The radius-``R`` ball around the identity in the Cayley graph of ``p``."""
    if p.is_free:

        def step(state: Letters, x: int) -> Letters:
            if state and state[-1] == x ^ 1:
                return state[:-1]
            return state + (x,)

        ball = explore_canonical(p.alphabet, radius, (), step, budget=budget, convex=True)
    else:
        ball, unresolved = explore_with_oracle(
            p.alphabet,
            radius,
            p.abelian_key,
            lambda u, v: p.equal_letters(u, v),
            budget=budget,
        )
        if unresolved:
            raise InvariantBreachError("word-problem oracle left comparisons undecided")
    logger.debug(f"Built Cayley ball R={radius}: {ball.n_vertices} vertices")
    return ball


@dataclass(frozen=True)
class BallDistance:
    """A distance inside a ball; ``exact`` is False when only a lower bound is guaranteed."""

    value: int
    exact: bool

    def __int__(self) -> int:
        return self.value


def ball_distance(ball: BallGraph, u: int, v: int) -> BallDistance:
    if u == v:
        return BallDistance(0, True)
    dist = _bfs_distances(ball, u).get(v)
    if dist is None:
        raise PreconditionError(f"vertices {u} and {v} are not connected inside the ball")
    exact = ball.convex or ball.distances[u] + ball.distances[v] <= ball.radius
    return BallDistance(dist, exact)
