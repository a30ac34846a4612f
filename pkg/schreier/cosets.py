"""Schreier coset graphs ``Γ(G, H, A)`` restricted to a ball around the coset ``H·1``.

Free hosts (ExactFree) read the coset graph off the Stallings core: every coset is a core vertex
followed by a reduced tail that leaves the core through a missing letter, so states are canonical
and the ball is exact. Presented hosts (BoundedCoset) run the oracle BFS over coset words; two
words ``g1``, ``g2`` name the same coset iff ``g1·g2⁻¹ ∈ H``, decided by :class:`BoundedMembership`.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from functools import cached_property
from typing import Dict, List, Optional, Sequence, Tuple

from groups.abelian import Lattice, exponent_vector
from groups.balls import BallGraph, default_vertex_budget, explore_canonical, explore_with_oracle
from groups.exceptions import BudgetExceededError, PreconditionError
from groups.presentations import Presentation
from groups.words import Letters, Word, _reduce, free_reduce
from storage.log import PerformanceLogger
from storage.logging_compat import get_logger
from utils.env import int_env

from .core import CoreGraph, free_basis, stallings_core
from .walkspace import WalkSpace, ball_walk_space, lumped_walk_space

logger = get_logger(__name__)

DEFAULT_COSET_BUDGET = 6


def default_coset_budget() -> int:
    return int_env("ATLAS_COSET_BUDGET", DEFAULT_COSET_BUDGET)


class CosetMode(str, Enum):
    EXACT_FREE = "ExactFree"
    BOUNDED_COSET = "BoundedCoset"


class BoundedMembership:
    """Sound, budgeted membership in ``H = ⟨generators⟩`` for a small-cancellation host.

    ``decide(w)`` is False when the exponent vector of ``w`` is outside the lattice spanned by the
    relators and the generators (a certificate of non-membership), True when ``w`` equals a
    product of at most ``budget`` generators, and None otherwise.
    """

    def __init__(self, host: Presentation, generators: Sequence[Word], budget: int):
        self.host = host
        self.budget = budget
        k = host.alphabet.rank
        vectors = [exponent_vector(k, r.letters) for r in host.relators]
        vectors += [exponent_vector(k, g.letters) for g in generators]
        self.lattice = Lattice(k, vectors)
        self._buckets: Dict[Tuple[int, ...], List[Letters]] = {}
        self.n_elements = 0
        self._enumerate([host.dehn_reduce_letters(g.letters) for g in generators])

    def _enumerate(self, gens: List[Letters]) -> None:
        steps = [g for g in gens if g] + [tuple(x ^ 1 for x in reversed(g)) for g in gens if g]
        seen = {()}
        layer = [()]
        self._add(())
        for _ in range(self.budget):
            nxt = []
            for h in layer:
                for s in steps:
                    w = self.host.dehn_reduce_letters(h + s)
                    if w not in seen:
                        seen.add(w)
                        nxt.append(w)
                        self._add(w)
            layer = nxt
        logger.debug(f"Bounded membership enumerated {self.n_elements} subgroup elements")

    def _add(self, w: Letters) -> None:
        self._buckets.setdefault(self.host.abelian_key(w), []).append(w)
        self.n_elements += 1

    def coset_key(self, letters: Sequence[int]) -> Tuple[int, ...]:
        return self.lattice.reduce(exponent_vector(self.host.alphabet.rank, letters))

    def decide(self, letters: Sequence[int]) -> Optional[bool]:
        if any(self.coset_key(letters)):
            return False
        for h in self._buckets.get(self.host.abelian_key(letters), ()):
            if self.host.equal_letters(letters, h):
                return True
        return None

    def same_coset(self, u: Sequence[int], v: Sequence[int]) -> Optional[bool]:
        return self.decide(tuple(u) + tuple(x ^ 1 for x in reversed(v)))


@dataclass(frozen=True)
class FreeSchreierView:
    """Lazy view of the ExactFree ball: states are ``(core vertex, reduced tail)``."""

    core: CoreGraph
    radius: int
    alphabet: object = field(init=False)

    def __post_init__(self):
        object.__setattr__(self, "alphabet", self.core.alphabet)

    @property
    def base(self) -> Tuple[int, Letters]:
        return (self.core.base, ())

    def distance(self, state: Tuple[int, Letters]) -> int:
        v, tail = state
        return self.core.depths[v] + len(tail)

    def ambient_step(self, state: Tuple[int, Letters], x: int) -> Tuple[int, Letters]:
        v, tail = state
        if tail:
            if tail[-1] == x ^ 1:
                return (v, tail[:-1])
            return (v, tail + (x,))
        t = self.core.targets[v][x]
        return (t, ()) if t is not None else (v, (x,))

    def step(self, state: Tuple[int, Letters], x: int) -> Optional[Tuple[int, Letters]]:
        t = self.ambient_step(state, x)
        return t if self.distance(t) <= self.radius else None

    def word(self, state: Tuple[int, Letters]) -> Word:
        v, tail = state
        return Word(self.alphabet, _reduce(self.core.tree_words[v] + tail), True)


@dataclass(frozen=True, eq=False)
class SchreierBall:
    host: Presentation
    generators: Tuple[Word, ...]
    radius: int
    mode: CosetMode
    certified: bool
    core: Optional[CoreGraph] = None
    unresolved: int = 0
    budget: Optional[int] = None
    materialized: Optional[BallGraph] = field(default=None, repr=False)

    @property
    def alphabet(self):
        return self.host.alphabet

    @cached_property
    def graph(self) -> BallGraph:
        if self.materialized is not None:
            return self.materialized
        return self.graph_at(self.radius)

    def graph_at(self, radius: int, budget: Optional[int] = None) -> BallGraph:
        """The materialised ball of a radius no larger than this one."""
        if radius > self.radius:
            raise PreconditionError(f"radius {radius} exceeds the built radius {self.radius}")
        if self.mode is CosetMode.BOUNDED_COSET:
            return self.graph.restrict(radius)
        view = FreeSchreierView(self.core, radius)
        with PerformanceLogger(logger, f"materialise Schreier ball R={radius}"):
            return explore_canonical(
                self.alphabet, radius, view.base, view.ambient_step, budget=budget or self.budget
            )

    def view(self):
        """A graph view for the subset diagnostics (lazy for ExactFree balls)."""
        if self.mode is CosetMode.EXACT_FREE:
            return FreeSchreierView(self.core, self.radius)
        return self.graph

    def walk_space(self) -> WalkSpace:
        if self.mode is CosetMode.EXACT_FREE:
            return lumped_walk_space(self.core, self.radius)
        return ball_walk_space(self.graph)

    def summary(self) -> Dict[str, object]:
        out: Dict[str, object] = {
            "mode": self.mode.value,
            "radius": self.radius,
            "certified": self.certified,
            "generators": [str(g) for g in self.generators],
        }
        if self.core is not None:
            out["core"] = self.core.describe()
        if self.materialized is not None:
            out["vertices"] = self.materialized.n_vertices
        if self.unresolved:
            out["unresolved"] = self.unresolved
        return out


def schreier_ball(
    host: Presentation,
    generators: Sequence[Word],
    radius: int,
    *,
    budget: Optional[int] = None,
    coset_budget: Optional[int] = None,
    strict: bool = False,
) -> SchreierBall:
    """The radius-``R`` neighbourhood of ``H·1`` in the Schreier graph of ``H = ⟨generators⟩``."""
    if radius < 0:
        raise PreconditionError(f"radius must be nonnegative, got {radius}")
    gens = tuple(free_reduce(g) for g in generators)
    budget = default_vertex_budget() if budget is None else budget
    if host.is_free:
        core = stallings_core(host.alphabet, gens)
        logger.debug(f"ExactFree Schreier ball R={radius} over a {core.n_vertices}-vertex core")
        return SchreierBall(host, gens, radius, CosetMode.EXACT_FREE, True, core, budget=budget)

    coset_budget = default_coset_budget() if coset_budget is None else coset_budget
    oracle = BoundedMembership(host, gens, coset_budget)
    with PerformanceLogger(logger, f"bounded coset BFS R={radius}"):
        graph, unresolved = explore_with_oracle(
            host.alphabet, radius, oracle.coset_key, oracle.same_coset, budget=budget
        )
    if unresolved:
        if strict:
            raise BudgetExceededError(
                f"{unresolved} coset comparison(s) unresolved with membership budget {coset_budget}",
                completed_radius=-1,
                budget=coset_budget,
            )
        logger.warning(
            f"Schreier ball R={radius} is not certified: {unresolved} coset comparison(s) "
            f"unresolved within membership budget {coset_budget}"
        )
    return SchreierBall(
        host,
        gens,
        radius,
        CosetMode.BOUNDED_COSET,
        unresolved == 0,
        None,
        unresolved,
        budget,
        graph,
    )


def schreier_ball_from_core(core: CoreGraph, radius: int, host: Optional[Presentation] = None):
    """ExactFree ball straight from an already folded core."""
    host = host or Presentation.create(core.alphabet)
    return SchreierBall(
        host,
        tuple(free_basis(core)),
        radius,
        CosetMode.EXACT_FREE,
        True,
        core,
        budget=default_vertex_budget(),
    )
