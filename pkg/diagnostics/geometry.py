"""Hyperbolicity diagnostics restricted to a finite ball.

Distances come from BFS inside the ball (networkx). Triangles are anchored at the base with the
other two corners within ``r`` of it. With ``2r <= R`` every side and every distance between
matched points of the sides has a geodesic inside the ball, so trim defects are exact. Slim
defects measure the distance from a side to the nearest point of the other two and need
``3r <= R``. Tree balls of free groups are geodesically convex and allow any ``r <= R``.

Gromov products on graphs are half-integers; inscribed-triple positions round toward the apex.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Dict, Iterable, List, Optional, Sequence, Tuple

import networkx as nx
import numpy as np

from groups.balls import BallGraph
from groups.exceptions import ExactnessError, InconsistentMetricError, PreconditionError
from groups.words import Word, free_reduce
from schreier.core import CoreGraph, membership
from storage.logging_compat import get_logger

logger = get_logger(__name__)


def gromov_product(dzx: int, dzy: int, dxy: int) -> Fraction:
    """``(x, y)_z = ½ (d(z,x) + d(z,y) − d(x,y))``."""
    for a, b, c in ((dzx, dzy, dxy), (dzy, dxy, dzx), (dxy, dzx, dzy)):
        if a < 0 or a > b + c:
            raise InconsistentMetricError(
                f"distances ({dzx}, {dzy}, {dxy}) violate the triangle inequality"
            )
    return Fraction(dzx + dzy - dxy, 2)


class _Metric:
    """Cached single-source BFS distances inside a ball."""

    def __init__(self, ball: BallGraph):
        self.ball = ball
        self.graph = ball.networkx
        self._rows: Dict[int, Dict[int, int]] = {}

    def row(self, u: int) -> Dict[int, int]:
        row = self._rows.get(u)
        if row is None:
            row = nx.single_source_shortest_path_length(self.graph, u)
            self._rows[u] = row
        return row

    def d(self, u: int, v: int) -> int:
        return self.row(u)[v]

    def geodesic(self, u: int, v: int) -> List[int]:
        """Shortlex geodesic from ``u`` to ``v``: at each step take the smallest useful letter."""
        to_v = self.row(v)
        path = [u]
        cur = u
        order = self.ball.alphabet.letters
        while cur != v:
            for x in order:
                t = self.ball.targets[cur][x]
                if t is not None and to_v.get(t) == to_v[cur] - 1:
                    cur = t
                    break
            path.append(cur)
        return path

    def all_geodesic_vertices(self, u: int, v: int) -> List[int]:
        """Every vertex lying on some geodesic from ``u`` to ``v``."""
        du, dv = self.row(u), self.row(v)
        total = du[v]
        return [w for w, a in du.items() if a <= total and dv.get(w, total + 1) + a == total]


def _triangle_radius(ball: BallGraph, triangle_radius: Optional[int], room: int) -> int:
    if triangle_radius is None:
        return ball.radius if ball.convex else ball.radius // room
    if triangle_radius < 0:
        raise PreconditionError(f"triangle radius must be nonnegative, got {triangle_radius}")
    if not ball.convex and room * triangle_radius > ball.radius:
        raise ExactnessError(
            f"triangles of radius {triangle_radius} need a ball of radius {room * triangle_radius}"
        )
    if triangle_radius > ball.radius:
        raise ExactnessError(f"triangle radius {triangle_radius} exceeds the ball radius")
    return triangle_radius


@dataclass(frozen=True)
class Provenance:
    mode: str
    radius: int
    triangle_radius: int
    count: int
    seed: Optional[int] = None

    def to_dict(self) -> dict:
        out = {
            "mode": self.mode,
            "radius": self.radius,
            "triangle_radius": self.triangle_radius,
            "count": self.count,
        }
        if self.seed is not None:
            out["seed"] = self.seed
            out["bound"] = "lower bound for the maximum"
        return out


@dataclass(frozen=True)
class DeltaEstimate:
    delta: int
    provenance: Provenance


def _pairs(
    ball: BallGraph, r: int, mode: str, seed: Optional[int], count: Optional[int]
) -> Tuple[List[Tuple[int, int]], Provenance]:
    corners = [v for v in ball.vertices() if ball.distances[v] <= r]
    if mode == "exhaustive":
        pairs = list(itertools.combinations_with_replacement(corners, 2))
        return pairs, Provenance("exhaustive", ball.radius, r, len(pairs))
    if mode == "sampled":
        if seed is None or count is None:
            raise PreconditionError("sampled mode needs a seed and a count")
        rng = np.random.default_rng(seed)
        idx = rng.integers(0, len(corners), size=(count, 2))
        pairs = [(corners[i], corners[j]) for i, j in idx]
        return pairs, Provenance("sampled", ball.radius, r, count, seed)
    raise PreconditionError(f"unknown mode {mode!r}")


def _trim_defect(metric: _Metric, z: int, x: int, y: int) -> int:
    """Largest distance between matched points of the three sides of the triangle ``z, x, y``."""
    zx, zy, xy = metric.geodesic(z, x), metric.geodesic(z, y), metric.geodesic(x, y)
    dzx, dzy, dxy = len(zx) - 1, len(zy) - 1, len(xy) - 1
    worst = 0
    # Corner z: [z,x] against [z,y].
    for t in range(int(gromov_product(dzx, dzy, dxy)) + 1):
        worst = max(worst, metric.d(zx[t], zy[t]))
    # Corner x: [x,z] against [x,y].
    for t in range(int(gromov_product(dzx, dxy, dzy)) + 1):
        worst = max(worst, metric.d(zx[dzx - t], xy[t]))
    # Corner y: [y,z] against [y,x].
    for t in range(int(gromov_product(dzy, dxy, dzx)) + 1):
        worst = max(worst, metric.d(zy[dzy - t], xy[dxy - t]))
    return worst


def _slim_defect(metric: _Metric, z: int, x: int, y: int) -> int:
    sides = [metric.geodesic(z, x), metric.geodesic(z, y), metric.geodesic(x, y)]
    worst = 0
    for i, side in enumerate(sides):
        others = [w for j, s in enumerate(sides) if j != i for w in s]
        for p in side:
            row = metric.row(p)
            worst = max(worst, min(row[w] for w in others))
    return worst


def _estimate(
    ball: BallGraph,
    defect: Callable[[_Metric, int, int, int], int],
    room: int,
    mode: str,
    seed: Optional[int],
    count: Optional[int],
    triangle_radius: Optional[int],
) -> DeltaEstimate:
    r = _triangle_radius(ball, triangle_radius, room)
    metric = _Metric(ball)
    pairs, provenance = _pairs(ball, r, mode, seed, count)
    worst = 0
    for x, y in pairs:
        worst = max(worst, defect(metric, ball.base, x, y))
    return DeltaEstimate(worst, provenance)


def estimate_delta_trim(
    ball: BallGraph,
    mode: str = "exhaustive",
    *,
    seed: Optional[int] = None,
    count: Optional[int] = None,
    triangle_radius: Optional[int] = None,
) -> DeltaEstimate:
    """Least ``δ`` making every tested triangle ``δ``-trim (matched points within ``δ``)."""
    return _estimate(ball, _trim_defect, 2, mode, seed, count, triangle_radius)


def estimate_delta_slim(
    ball: BallGraph,
    mode: str = "exhaustive",
    *,
    seed: Optional[int] = None,
    count: Optional[int] = None,
    triangle_radius: Optional[int] = None,
) -> DeltaEstimate:
    """Least ``δ`` making every tested triangle ``δ``-slim (each side near the other two)."""
    return _estimate(ball, _slim_defect, 3, mode, seed, count, triangle_radius)


def four_point_delta(ball: BallGraph, radius: Optional[int] = None) -> Fraction:
    """Least ``δ`` with ``(x,y)_p >= min((x,z)_p, (y,z)_p) − 2δ`` for ``p`` the base.

    ``x, y, z`` range over the vertices within ``radius`` (default ``R // 2``, which keeps every
    distance exact).
    """
    r = ball.radius // 2 if radius is None else radius
    if not ball.convex and 2 * r > ball.radius:
        raise ExactnessError(f"four-point radius {r} needs a ball of radius {2 * r}")
    metric = _Metric(ball)
    p = ball.base
    points = [v for v in ball.vertices() if ball.distances[v] <= r]
    worst = Fraction(0)
    for x, y, z in itertools.product(points, repeat=3):
        xy = gromov_product(metric.d(p, x), metric.d(p, y), metric.d(x, y))
        xz = gromov_product(metric.d(p, x), metric.d(p, z), metric.d(x, z))
        yz = gromov_product(metric.d(p, y), metric.d(p, z), metric.d(y, z))
        gap = (min(xz, yz) - xy) / 2
        if gap > worst:
            worst = gap
    return worst


@dataclass(frozen=True)
class InscribedTriple:
    """Points ``p ∈ [z,x]``, ``q ∈ [z,y]``, ``r ∈ [x,y]`` and their distances from the corners."""

    p: int
    q: int
    r: int
    positions: Tuple[int, int, int]


def inscribed_triple(ball: BallGraph, x: int, y: int, z: int) -> InscribedTriple:
    """The inscribed triple of the shortlex triangle ``x, y, z``.

    ``p`` sits ``⌊(x,y)_z⌋`` from ``z`` on ``[z,x]``, ``q`` the same distance on ``[z,y]``, ``r``
    ``⌊(y,z)_x⌋`` from ``x`` on ``[x,y]``.
    """
    for u, v in ((x, y), (y, z), (x, z)):
        if not ball.convex and ball.distances[u] + ball.distances[v] > ball.radius:
            raise ExactnessError(f"distance between vertices {u} and {v} is not exact in this ball")
    metric = _Metric(ball)
    zx, zy, xy = metric.geodesic(z, x), metric.geodesic(z, y), metric.geodesic(x, y)
    dzx, dzy, dxy = len(zx) - 1, len(zy) - 1, len(xy) - 1
    at_z = int(gromov_product(dzx, dzy, dxy))
    at_x = int(gromov_product(dzx, dxy, dzy))
    return InscribedTriple(zx[at_z], zy[at_z], xy[at_x], (at_z, at_z, at_x))


def subgroup_vertices(ball: BallGraph, core: CoreGraph) -> List[int]:
    """Vertices of a free-group Cayley ball whose element lies in ``H``."""
    return [v for v in ball.vertices() if membership(core, ball.words[v])]


def quasiconvexity_epsilon(ball: BallGraph, subgroup: Sequence[int]) -> int:
    """Largest distance from a vertex on a geodesic between two tested points of ``H`` to ``H``.

    Pairs are tested when their distance is exact in the ball; all geodesics are covered by
    taking every vertex ``w`` with ``d(h1,w) + d(w,h2) = d(h1,h2)``.
    """
    members = list(subgroup)
    if not members:
        raise PreconditionError("the subgroup vertex set is empty")
    metric = _Metric(ball)
    to_h = nx.multi_source_dijkstra_path_length(metric.graph, set(members))
    worst = 0
    for h1, h2 in itertools.combinations(members, 2):
        if not ball.convex and ball.distances[h1] + ball.distances[h2] > ball.radius:
            continue
        for w in metric.all_geodesic_vertices(h1, h2):
            worst = max(worst, to_h[w])
    return worst


def set_gromov_product(ball: BallGraph, hset: Iterable[int], fset: Iterable[int]) -> Fraction:
    """``max (h, f)_base`` over pairs whose distance is exact in the ball."""
    metric = _Metric(ball)
    p = ball.base
    best = Fraction(0)
    fs = list(fset)
    for h in hset:
        for f in fs:
            if not ball.convex and ball.distances[h] + ball.distances[f] > ball.radius:
                continue
            best = max(best, gromov_product(metric.d(p, h), metric.d(p, f), metric.d(h, f)))
    return best


@dataclass(frozen=True)
class CosetDeficiency:
    """``K̂ = max |h| + |g| − |hg|`` over in-ball ``h ∈ H`` and the largest ``(g, h)_1``."""

    k_hat: int
    max_product: Fraction
    tested: int


def coset_deficiency(ball: BallGraph, core: CoreGraph, g: Word) -> CosetDeficiency:
    """For a free host: how much ``|hg|`` can fall short of ``|h| + |g|`` with ``g`` shortest in ``Hg``."""
    g = free_reduce(g)
    k_hat, best, tested = 0, Fraction(0), 0
    for v in subgroup_vertices(ball, core):
        h = ball.words[v]
        hg = h * g
        if len(hg) < len(g):
            raise PreconditionError(
                f"{g} is not shortest in its coset: h = {h} gives |hg| = {len(hg)} < {len(g)}"
            )
        tested += 1
        k_hat = max(k_hat, len(h) + len(g) - len(hg))
        best = max(best, gromov_product(len(g), len(h), len(g.inverse() * h)))
    return CosetDeficiency(k_hat, best, tested)


def is_periodically_geodesic(ball: BallGraph, w: Word, n_max: int) -> Tuple[bool, Optional[int]]:
    """Whether the path labelled ``w^n`` from the base is geodesic for every ``n <= n_max``.

    Returns ``(True, None)`` or ``(False, first failing n)``.
    """
    if not w:
        raise PreconditionError("w must be nonempty")
    v = ball.base
    for n in range(1, n_max + 1):
        for x in w.letters:
            v = ball.targets[v][x]
            if v is None:
                raise ExactnessError(f"{w}^{n} leaves the ball of radius {ball.radius}")
        if ball.distances[v] != n * len(w):
            return False, n
    return True, None


@dataclass(frozen=True)
class GeometryEstimates:
    delta_trim: int
    provenance: Provenance
    delta_slim: Optional[int] = None
    epsilon_qc: Dict[str, int] = field(default_factory=dict)
    k_deficiency: Optional[int] = None
    hf_product: Optional[Fraction] = None

    def to_dict(self) -> dict:
        out = {
            "delta_trim": self.delta_trim,
            "sample_provenance": self.provenance.to_dict(),
            "epsilon_qc": dict(self.epsilon_qc),
        }
        if self.delta_slim is not None:
            out["delta_slim"] = self.delta_slim
        if self.k_deficiency is not None:
            out["K_deficiency"] = self.k_deficiency
        if self.hf_product is not None:
            out["HF_product"] = self.hf_product
        return out


def stabilization_table(
    build: Callable[[int], BallGraph],
    radii: Sequence[int],
    measure: Callable[[BallGraph], object],
) -> List[Tuple[int, object]]:
    """Rows ``(R, measure(build(R)))`` for a CSV stabilisation table."""
    rows = []
    for r in radii:
        value = measure(build(r))
        logger.debug(f"stabilisation R={r}: {value}")
        rows.append((r, value))
    return rows
