"""Closed-path counts, subgroup growth and the cogrowth formula.

``a_n`` counts reduced closed paths of length ``n`` at the base (no step immediately undoes the
previous one; a loop's two directions are mutually reverse) and ``b_n`` counts all closed walks.
For a free host, reduced closed paths at the base of the Schreier graph are exactly the reduced
words of ``H``, so ``α = limsup a_n^(1/n)`` is the growth of ``H`` in the free group; it is the
Perron root of the non-backtracking operator on the directed edges of the core.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np

from groups.exceptions import (
    ExactnessError,
    InvariantBreachError,
    NumericalError,
    PreconditionError,
)
from groups.words import enumerate_reduced_words
from schreier.core import CoreGraph, membership_letters, subgroup_index_info
from schreier.cosets import CosetMode, SchreierBall, schreier_ball_from_core
from storage.logging_compat import get_logger

from .walks import as_walk_space, estimate_rho, return_probabilities, walk_counts

logger = get_logger(__name__)

ALPHA_TOLERANCE = 1e-9
ENCLOSURE_WIDTH = 1e-6
ITERATION_CAP = 100_000
COR_MARGIN = 1e-6


def nonbacktracking_counts(
    step: Callable[[int, int], Optional[int]],
    size: int,
    base: int,
    n_max: int,
) -> List[int]:
    """``a_0..a_n_max`` by DP over ``(vertex, last letter)`` states."""
    counts = [1]
    state: Dict[Tuple[int, int], int] = {}
    for x in range(size):
        t = step(base, x)
        if t is not None:
            state[(t, x)] = state.get((t, x), 0) + 1
    for n in range(1, n_max + 1):
        if n > 1:
            nxt: Dict[Tuple[int, int], int] = {}
            for (v, last), c in state.items():
                for y in range(size):
                    if y == last ^ 1:
                        continue
                    t = step(v, y)
                    if t is not None:
                        nxt[(t, y)] = nxt.get((t, y), 0) + c
            state = nxt
        counts.append(sum(c for (v, _), c in state.items() if v == base))
    return counts


@dataclass(frozen=True)
class CogrowthSeries:
    degree: int
    a: Tuple[int, ...]
    b: Tuple[int, ...]
    exact_horizon: int
    alpha_hat: float
    beta_hat: float

    @property
    def n_max(self) -> int:
        return len(self.b) - 1

    def to_rows(self) -> List[Tuple[int, int, int]]:
        return [(n, a, b) for n, (a, b) in enumerate(zip(self.a, self.b))]


def _root_test(values: Sequence[int]) -> float:
    best = 0.0
    for n, v in enumerate(values):
        if n >= 1 and v > 0:
            best = max(best, math.exp(math.log(v) / n))
    return best


def count_closed_paths(ball, n_max: int, *, allow_truncation: bool = False) -> CogrowthSeries:
    """Exact ``a_n`` and ``b_n`` for ``n <= n_max``.

    For an ExactFree Schreier ball ``a_n`` is read off the whole core (reduced closed paths never
    enter the hanging trees), so only ``b_n`` is bound by the ``2R`` horizon.
    """
    space = as_walk_space(ball)
    if n_max > space.horizon and not allow_truncation:
        raise ExactnessError(f"n_max={n_max} exceeds the exactness horizon {space.horizon} (2R)")
    b, _ = walk_counts(space, n_max)
    if isinstance(ball, SchreierBall) and ball.mode is CosetMode.EXACT_FREE:
        core = ball.core
        a = nonbacktracking_counts(core.step, core.alphabet.size, core.base, n_max)
    else:
        graph = ball.graph if isinstance(ball, SchreierBall) else ball
        a = nonbacktracking_counts(graph.step, graph.alphabet.size, graph.base, n_max)
    for n, (an, bn) in enumerate(zip(a, b)):
        if an > bn:
            raise InvariantBreachError(f"a_{n}={an} exceeds b_{n}={bn}")
    return CogrowthSeries(
        degree=space.degree,
        a=tuple(a),
        b=tuple(b),
        exact_horizon=space.horizon,
        alpha_hat=_root_test(a),
        beta_hat=_root_test(b),
    )


@dataclass(frozen=True)
class CrosscheckRow:
    n: int
    a_words: int
    a_paths: int
    b_words: Optional[int]
    b_paths: int


@dataclass(frozen=True)
class CrosscheckReport:
    rows: Tuple[CrosscheckRow, ...]

    @property
    def agreed(self) -> bool:
        return all(
            r.a_words == r.a_paths and (r.b_words is None or r.b_words == r.b_paths)
            for r in self.rows
        )


def crosscheck_word_counts(
    core: CoreGraph,
    ball,
    n_max: int,
    *,
    all_words_limit: int = 8,
) -> CrosscheckReport:
    """Count words of ``H`` directly and compare with the path counts of its Schreier ball.

    Reduced words are enumerated with pruning on core readability; all words (for ``b_n``) are
    enumerated outright up to ``all_words_limit``. Any disagreement is a bug and raises.
    """
    series = count_closed_paths(ball, n_max)
    alphabet = core.alphabet
    rows = []
    for n in range(n_max + 1):
        a_words = sum(
            1
            for w in enumerate_reduced_words(alphabet, n, prune=core.readable)
            if core.read(w.letters) == core.base
        )
        b_words = None
        if n <= all_words_limit:
            b_words = sum(
                1
                for letters in itertools.product(range(alphabet.size), repeat=n)
                if membership_letters(core, letters)
            )
        row = CrosscheckRow(n, a_words, series.a[n], b_words, series.b[n])
        if row.a_words != row.a_paths or (b_words is not None and b_words != row.b_paths):
            raise InvariantBreachError(
                f"word counts disagree with path counts at n={n}: "
                f"reduced {a_words} vs {row.a_paths}, all {b_words} vs {row.b_paths}"
            )
        rows.append(row)
    return CrosscheckReport(tuple(rows))


def cogrowth_rho(alpha: float, d: int) -> float:
    """Spectral radius of a ``d``-regular Schreier graph of a free group from its cogrowth ``α``.

    ``2√(d-1)/d`` for ``α <= √(d-1)``, else ``(√(d-1)/d)(√(d-1)/α + α/√(d-1))``. Values of ``α``
    below 1 (trees) are treated as the first branch.
    """
    if d < 3:
        raise PreconditionError(f"degree must be at least 3, got {d}")
    if alpha < 0 or alpha > d - 1 + 1e-12:
        raise PreconditionError(f"alpha={alpha} is outside [0, {d - 1}]")
    s = math.sqrt(d - 1)
    if alpha <= s:
        return 2 * s / d
    return min(1.0, (s / d) * (s / alpha + alpha / s))


def alpha_from_rho(rho: float, d: int) -> float:
    """Inverse of the second branch of :func:`cogrowth_rho` (``√(d-1)`` at or below the knee)."""
    if d < 3:
        raise PreconditionError(f"degree must be at least 3, got {d}")
    if not 0 < rho <= 1:
        raise PreconditionError(f"rho={rho} is outside (0, 1]")
    s = math.sqrt(d - 1)
    if rho <= 2 * s / d:
        return s
    # α/s + s/α = ρd/s; take the root >= s.
    c = rho * d / s
    t = (c + math.sqrt(max(c * c - 4, 0.0))) / 2
    return min(float(d - 1), t * s)


@dataclass(frozen=True)
class AlphaEstimate:
    alpha: float
    lower: float
    upper: float
    iterations: int
    directed_edges: int

    def to_dict(self) -> dict:
        return {
            "alpha": self.alpha,
            "alpha_enclosure": [self.lower, self.upper],
            "iterations": self.iterations,
            "directed_edges": self.directed_edges,
        }


def _cyclic_core(core: CoreGraph) -> List[int]:
    """Vertices left after repeatedly deleting vertices of degree <= 1 (the base included)."""
    alive = [True] * core.n_vertices
    degree = [core.degree(v) for v in range(core.n_vertices)]
    stack = [v for v in range(core.n_vertices) if degree[v] <= 1]
    while stack:
        v = stack.pop()
        if not alive[v]:
            continue
        alive[v] = False
        for t in core.targets[v]:
            if t is not None and t != v and alive[t]:
                degree[t] -= 1
                if degree[t] <= 1:
                    stack.append(t)
    return [v for v in range(core.n_vertices) if alive[v]]


def nonbacktracking_matrix(core: CoreGraph) -> Tuple[np.ndarray, List[Tuple[int, int, int]]]:
    """``B[e, f] = 1`` when directed edge ``f`` may follow ``e`` without reversing it."""
    keep = set(_cyclic_core(core))
    directed = [
        (u, x, core.targets[u][x])
        for u in sorted(keep)
        for x in range(core.alphabet.size)
        if core.targets[u][x] is not None and core.targets[u][x] in keep
    ]
    index = {(u, x): i for i, (u, x, _) in enumerate(directed)}
    B = np.zeros((len(directed), len(directed)))
    for i, (_, x, v) in enumerate(directed):
        for y in range(core.alphabet.size):
            if y == x ^ 1:
                continue
            j = index.get((v, y))
            if j is not None:
                B[i, j] = 1.0
    return B, directed


def subgroup_alpha_exact(core: CoreGraph) -> AlphaEstimate:
    """Perron root of the non-backtracking operator, with Collatz–Wielandt bounds.

    Power iteration runs on ``B + I`` (same Perron vector, and aperiodic); the bounds
    ``min (Mx)_i/x_i <= μ <= max (Mx)_i/x_i`` enclose the root of ``M``, and ``α = μ - 1``.
    """
    B, directed = nonbacktracking_matrix(core)
    n = len(directed)
    if n == 0:
        return AlphaEstimate(0.0, 0.0, 0.0, 0, 0)
    M = B + np.eye(n)
    x = np.ones(n) / n
    lower, upper = 0.0, float("inf")
    for it in range(1, ITERATION_CAP + 1):
        y = M @ x
        ratios = y / x
        lower, upper = float(ratios.min()), float(ratios.max())
        x = y / y.sum()
        if upper - lower <= max(ALPHA_TOLERANCE * upper, 1e-15):
            break
    else:
        raise NumericalError(
            f"power iteration did not converge in {ITERATION_CAP} steps", residual=upper - lower
        )
    if upper - lower >= ENCLOSURE_WIDTH:
        raise NumericalError("Collatz–Wielandt enclosure too wide", residual=upper - lower)
    alpha = (lower + upper) / 2 - 1
    logger.debug(f"alpha={alpha:.9f} from {n} directed edges after {it} iterations")
    return AlphaEstimate(max(alpha, 0.0), lower - 1, upper - 1, it, n)


@dataclass(frozen=True)
class CogrowthBoundReport:
    """Both growth bounds for an infinite-index subgroup of ``F_k``: ``α < 2k-1`` and ``β < 2k``."""

    alpha: AlphaEstimate
    beta_hat: float
    k: int
    rho_from_formula: float

    @property
    def alpha_margin(self) -> float:
        return (2 * self.k - 1) - self.alpha.upper

    @property
    def beta_margin(self) -> float:
        return 2 * self.k - self.beta_hat

    @property
    def passed(self) -> bool:
        return self.alpha_margin > COR_MARGIN and self.beta_margin > COR_MARGIN

    def to_dict(self) -> dict:
        out = self.alpha.to_dict()
        out.update(
            {
                "beta_hat": self.beta_hat,
                "rho_from_formula": self.rho_from_formula,
                "alpha_margin": self.alpha_margin,
                "beta_margin": self.beta_margin,
                "bound": "PASS" if self.passed else "FAIL",
            }
        )
        return out


def verify_cogrowth_bound(
    core: CoreGraph,
    k: Optional[int] = None,
    *,
    radius: int = 12,
    n_max: int = 24,
    ball=None,
) -> CogrowthBoundReport:
    """Check ``α < 2k - 1`` exactly and ``β̂ = 2k·ρ̂ < 2k`` on the Schreier ball."""
    k = core.alphabet.rank if k is None else k
    if k != core.alphabet.rank:
        raise PreconditionError(f"k={k} does not match the alphabet rank {core.alphabet.rank}")
    info = subgroup_index_info(core)
    if info.finite:
        raise PreconditionError(
            f"subgroup has finite index {info.index}; the growth bounds need infinite index"
        )
    alpha = subgroup_alpha_exact(core)
    ball = ball if ball is not None else schreier_ball_from_core(core, radius)
    estimate = estimate_rho(return_probabilities(ball, n_max))
    beta_hat = 2 * k * estimate.rho_hat
    report = CogrowthBoundReport(alpha, beta_hat, k, cogrowth_rho(alpha.alpha, 2 * k))
    logger.info(
        f"Cogrowth bounds: alpha={alpha.alpha:.6f} < {2 * k - 1}, beta_hat={beta_hat:.6f} < {2 * k}: "
        + ("PASS" if report.passed else "FAIL")
    )
    return report


def cogrowth_equivalence(rho_hat: float, alpha: float, d: int, margin: float = 0.02) -> bool:
    """Consistency of ``ρ̂ < 1`` with ``α < d - 1`` (both sides judged with ``margin``)."""
    return (rho_hat < 1 - margin) == (alpha < d - 1 - 1e-6)


def reduced_count_bound(k: int, n: int) -> int:
    return 1 if n == 0 else 2 * k * (2 * k - 1) ** (n - 1)


def series_within_bounds(series: CogrowthSeries, k: int) -> bool:
    return all(
        a <= b <= (2 * k) ** n and a <= reduced_count_bound(k, n)
        for n, (a, b) in enumerate(zip(series.a, series.b))
    )


__all__ = [
    "AlphaEstimate",
    "CogrowthBoundReport",
    "CogrowthSeries",
    "CrosscheckReport",
    "alpha_from_rho",
    "cogrowth_equivalence",
    "cogrowth_rho",
    "count_closed_paths",
    "crosscheck_word_counts",
    "nonbacktracking_counts",
    "subgroup_alpha_exact",
    "verify_cogrowth_bound",
]
