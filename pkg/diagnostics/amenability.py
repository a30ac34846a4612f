"""Isoperimetric diagnostics on finite balls: boundaries, Cheeger ratios, doubling and Følner sets.

Everything here works on a graph view (``base``, ``radius``, ``alphabet``, ``distance(v)``,
``step(v, x)``): a materialised :class:`~groups.balls.BallGraph` or the lazy free-host Schreier
view, which keeps exhaustive subset searches cheap at radii where the ball itself is huge.

A set ``S`` is only examined when every vertex sits at distance ``<= R - k`` from the base, so
its ``k``-neighbourhood is the same as in the infinite graph.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Dict, Hashable, Iterable, Iterator, List, Optional, Sequence, Tuple

from groups.exceptions import ExactnessError, PreconditionError
from storage.logging_compat import get_logger

logger = get_logger(__name__)

Vertex = Hashable


def _neighbors(view, v: Vertex) -> List[Vertex]:
    out = []
    for x in view.alphabet.letters:
        t = view.step(v, x)
        if t is not None and t not in out:
            out.append(t)
    return out


def vertex_label(view, v: Vertex) -> str:
    """Human-readable name of a vertex: its representative word."""
    if hasattr(view, "words"):
        return str(view.words[v])
    if hasattr(view, "word"):
        return str(view.word(v))
    return str(v)


def _require_margin(view, S: Iterable[Vertex], k: int) -> None:
    limit = view.radius - k
    for v in S:
        if view.distance(v) > limit:
            raise ExactnessError(
                f"vertex {vertex_label(view, v)} at distance {view.distance(v)} is within {k} "
                f"of the ball boundary (R={view.radius})"
            )


def neighborhood(view, S: Iterable[Vertex], k: int) -> frozenset:
    """``N_k(S)``: vertices within distance ``k`` of ``S``."""
    S = frozenset(S)
    if not S:
        raise PreconditionError("S must be nonempty")
    if k < 0:
        raise PreconditionError(f"k must be nonnegative, got {k}")
    _require_margin(view, S, k)
    seen = set(S)
    layer = list(S)
    for _ in range(k):
        nxt = []
        for v in layer:
            for t in _neighbors(view, v):
                if t not in seen:
                    seen.add(t)
                    nxt.append(t)
        layer = nxt
    return frozenset(seen)


def boundary(view, S: Iterable[Vertex]) -> frozenset:
    """``∂S = N_1(S) - S``."""
    S = frozenset(S)
    return neighborhood(view, S, 1) - S


def connected_subsets(
    view,
    root: Vertex,
    max_size: int,
    allowed: Optional[Callable[[Vertex], bool]] = None,
) -> Iterator[frozenset]:
    """Every connected vertex set containing ``root`` with at most ``max_size`` vertices, once each.

    Each branch includes the next frontier vertex or excludes it for good, so no set repeats.
    """
    allowed = allowed or (lambda _: True)
    if not allowed(root):
        return

    def extend(current: frozenset, frontier: List[Vertex], excluded: set) -> Iterator[frozenset]:
        yield current
        if len(current) >= max_size:
            return
        excluded = set(excluded)
        frontier = list(frontier)
        while frontier:
            v = frontier.pop(0)
            grown = current | {v}
            additions = [
                w
                for w in _neighbors(view, v)
                if w not in grown and w not in excluded and w not in frontier and allowed(w)
            ]
            yield from extend(grown, frontier + additions, excluded)
            excluded.add(v)

    start = frozenset([root])
    first = [w for w in _neighbors(view, root) if w != root and allowed(w)]
    yield from extend(start, first, set())


@dataclass(frozen=True)
class DoublingReport:
    k: int
    q: int
    family: str
    checked: int
    failures: int
    witness: Optional[Tuple[str, ...]] = None
    witness_sizes: Optional[Tuple[int, int]] = None

    @property
    def verdict(self) -> str:
        return "refuted" if self.failures else f"supported-up-to({self.family})"

    @property
    def refuted(self) -> bool:
        return self.failures > 0

    def to_dict(self) -> dict:
        out = {
            "k": self.k,
            "q": self.q,
            "family": self.family,
            "checked": self.checked,
            "failures": self.failures,
            "verdict": self.verdict,
        }
        if self.witness is not None:
            out["counterexample"] = list(self.witness)
            out["counterexample_sizes"] = {
                "S": self.witness_sizes[0],
                "N_k": self.witness_sizes[1],
            }
        return out


@dataclass(frozen=True)
class CheegerReport:
    best_ratio: Fraction
    witness: Tuple[str, ...]
    search_mode: str
    sets_examined: int
    doubling: Tuple[DoublingReport, ...] = field(default=())
    boundary_size: int = 0

    def to_dict(self) -> dict:
        return {
            "best_ratio": self.best_ratio,
            "witness_S": list(self.witness),
            "witness_boundary": self.boundary_size,
            "search_mode": self.search_mode,
            "sets_examined": self.sets_examined,
            "doubling": [d.to_dict() for d in self.doubling],
        }


def _exhaustive(view, max_size: int, roots: Sequence[Vertex]):
    allowed = lambda w: view.distance(w) <= view.radius - 1  # noqa: E731
    best: Optional[Tuple[Fraction, frozenset, int]] = None
    examined = 0
    for root in roots:
        for S in connected_subsets(view, root, max_size, allowed):
            examined += 1
            size = len(boundary(view, S))
            ratio = Fraction(size, len(S))
            if best is None or ratio < best[0]:
                best = (ratio, S, size)
    return best, examined


def _greedy(view, max_size: int, root: Vertex):
    _require_margin(view, [root], 1)
    allowed = lambda w: view.distance(w) <= view.radius - 1  # noqa: E731
    order: Dict[Vertex, int] = {root: 0}

    def note(vertices: Iterable[Vertex]) -> None:
        for w in vertices:
            order.setdefault(w, len(order))

    def rank(v: Vertex) -> int:
        return v if isinstance(v, int) else order[v]

    S = {root}
    note(_neighbors(view, root))
    bnd = set(_neighbors(view, root)) - S
    best = (Fraction(len(bnd), 1), frozenset(S), len(bnd))
    examined = 1
    while len(S) < max_size:
        choice = None
        for v in bnd:
            if not allowed(v):
                continue
            new_bnd = (bnd - {v}) | (set(_neighbors(view, v)) - S - {v})
            key = (Fraction(len(new_bnd), len(S) + 1), rank(v))
            if choice is None or key < choice[0]:
                choice = (key, v, new_bnd)
        if choice is None:
            logger.debug(f"Greedy Følner search stopped at |S|={len(S)}: no exact frontier left")
            break
        _, v, bnd = choice
        S.add(v)
        note(_neighbors(view, v))
        examined += 1
        ratio = Fraction(len(bnd), len(S))
        if ratio < best[0]:
            best = (ratio, frozenset(S), len(bnd))
    return best, examined


def cheeger_search(
    view,
    max_size: int,
    mode: str = "exhaustive",
    *,
    roots: Optional[Sequence[Vertex]] = None,
) -> CheegerReport:
    """Smallest ``|∂S| / |S|`` over a family of finite sets (an upper bound on the Cheeger constant).

    ``mode="exhaustive"``: all connected sets of size ``<= max_size`` containing a root.
    ``mode="greedy"``: grow from the root, always adding the frontier vertex that minimises the
    new ratio (ties to the lowest vertex index).
    """
    if max_size < 1:
        raise PreconditionError(f"max_size must be at least 1, got {max_size}")
    roots = list(roots) if roots is not None else [view.base]
    if mode == "exhaustive":
        best, examined = _exhaustive(view, max_size, roots)
        label = f"exhaustive-connected({max_size})"
    elif mode == "greedy":
        best, examined = _greedy(view, max_size, roots[0])
        label = "greedy-folner"
    else:
        raise PreconditionError(f"unknown Cheeger search mode {mode!r}")
    if best is None:
        raise ExactnessError("no set of the family lies inside the exact part of the ball")
    ratio, S, size = best
    logger.debug(f"Cheeger search ({label}) examined {examined} sets, best ratio {ratio}")
    return CheegerReport(
        best_ratio=ratio,
        witness=tuple(sorted(vertex_label(view, v) for v in S)),
        search_mode=label,
        sets_examined=examined,
        boundary_size=size,
    )


def cheeger_witness_set(view, report: CheegerReport) -> frozenset:
    """Re-locate the witness vertices of a report by reading their words from the base."""
    alphabet = view.alphabet
    out = set()
    for text in report.witness:
        v = view.base
        if text != "1":
            for token in text.split():
                v = view.step(v, alphabet.letter(token))
                if v is None:
                    raise ExactnessError(f"witness vertex {text} is outside this ball")
        out.add(v)
    return frozenset(out)


def verify_cheeger_witness(view, report: CheegerReport) -> bool:
    S = cheeger_witness_set(view, report)
    size = len(boundary(view, S))
    return size == report.boundary_size and Fraction(size, len(S)) == report.best_ratio


def doubling_check(
    view,
    k: int,
    *,
    max_size: Optional[int] = None,
    sets: Optional[Sequence[Iterable[Vertex]]] = None,
    q: int = 2,
    roots: Optional[Sequence[Vertex]] = None,
) -> DoublingReport:
    """Check ``|N_k(S)| >= q|S|`` over all connected ``S`` up to ``max_size`` or over ``sets``."""
    if q < 2:
        raise PreconditionError(f"q must be at least 2, got {q}")
    if k < 1:
        raise PreconditionError(f"k must be at least 1, got {k}")
    if sets is not None:
        family = [frozenset(S) for S in sets]
        label = f"samples:{len(family)}"
    elif max_size is not None:
        allowed = lambda w: view.distance(w) <= view.radius - k  # noqa: E731
        roots = list(roots) if roots is not None else [view.base]
        family = (S for r in roots for S in connected_subsets(view, r, max_size, allowed))
        label = f"{max_size}"
    else:
        raise PreconditionError("give either max_size or sets")

    checked = failures = 0
    witness = sizes = None
    for S in family:
        if not S:
            raise PreconditionError("doubling is only defined for nonempty sets")
        checked += 1
        grown = len(neighborhood(view, S, k))
        if grown < q * len(S):
            failures += 1
            if witness is None:
                witness = tuple(sorted(vertex_label(view, v) for v in S))
                sizes = (len(S), grown)
    report = DoublingReport(k, q, label, checked, failures, witness, sizes)
    logger.debug(f"Doubling k={k} q={q}: {report.verdict} over {checked} sets")
    return report


def smallest_doubling_k(view, q: int, max_size: int, k_max: int) -> Optional[int]:
    """Least ``k <= k_max`` for which the ``q``-doubling check passes on all connected sets."""
    for k in range(1, k_max + 1):
        if view.radius - k < 0:
            break
        if not doubling_check(view, k, max_size=max_size, q=q).refuted:
            return k
    return None


def interval_family(view, lengths: Sequence[int], letter: int = 0) -> List[frozenset]:
    """Sets ``{base·x^i}`` of consecutive powers of one letter, roughly centred on the base."""
    out = []
    for n in lengths:
        if n < 1:
            raise PreconditionError(f"interval length must be positive, got {n}")
        lo = -(n // 2)
        S = set()
        for i in range(lo, lo + n):
            v = view.base
            x = letter if i >= 0 else letter ^ 1
            for _ in range(abs(i)):
                v = view.step(v, x)
                if v is None:
                    raise ExactnessError(f"interval of length {n} leaves the ball")
            S.add(v)
        out.append(frozenset(S))
    return out
