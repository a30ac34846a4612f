"""Return probabilities of the simple random walk and spectral-radius estimates.

Every Schreier graph is ``2k``-regular once a loop counts as two directed moves, so the walk
picks one of ``2k`` letters uniformly at each step. Counts are kept as exact integers ``b_n``
(closed walks of length ``n`` at the base) and ``p_n = b_n / (2k)^n``. A closed walk of length
``n`` stays within distance ``n/2`` of the base, so a radius-``R`` ball gives exact values up to
``n = 2R``.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import List, Optional, Tuple, Union

import numpy as np

from groups.balls import BallGraph
from groups.exceptions import DegenerateSeriesError, ExactnessError, PreconditionError
from schreier.walkspace import ESCAPE, WalkSpace, ball_walk_space
from storage.logging_compat import get_logger

logger = get_logger(__name__)

EXACT_LIMIT = 60
MIN_EVEN_TERMS = 8


def as_walk_space(obj) -> WalkSpace:
    """Accept a :class:`WalkSpace`, a :class:`BallGraph` or anything with ``walk_space()``."""
    if isinstance(obj, WalkSpace):
        return obj
    if isinstance(obj, BallGraph):
        return ball_walk_space(obj)
    if hasattr(obj, "walk_space"):
        return obj.walk_space()
    raise PreconditionError(f"cannot walk on {type(obj).__name__}")


def _check_horizon(space: WalkSpace, n_max: int, allow_truncation: bool) -> None:
    if n_max < 0:
        raise PreconditionError(f"n_max must be nonnegative, got {n_max}")
    if n_max > space.horizon and not allow_truncation:
        raise ExactnessError(
            f"n_max={n_max} exceeds the exactness horizon {space.horizon} (2R); "
            "pass allow_truncation to accept flagged values"
        )


def walk_counts(space: WalkSpace, n_max: int) -> Tuple[List[int], List[int]]:
    """Exact closed-walk counts ``b_0..b_n_max`` at the base, plus cumulative escaped counts.

    Conservation: ``sum(vector) + escaped[n] == degree**n`` at every step.
    """
    moves = space.moves.tolist()
    vec = {space.base: 1}
    counts, escaped = [1], [0]
    for _ in range(n_max):
        nxt: dict = {}
        lost = 0
        for s, c in vec.items():
            for t in moves[s]:
                if t == ESCAPE:
                    lost += c
                else:
                    nxt[t] = nxt.get(t, 0) + c
        vec = nxt
        counts.append(vec.get(space.base, 0))
        escaped.append(escaped[-1] * space.degree + lost)
    return counts, escaped


@dataclass(frozen=True)
class ReturnSeries:
    """``p_n`` for ``n = 0..n_max``; Fractions up to ``exact_through``, floats after that."""

    degree: int
    n_max: int
    p: Tuple[Union[Fraction, float], ...]
    counts: Tuple[int, ...]
    exact_horizon: int
    exact_through: int
    truncated: bool = False

    def value(self, n: int) -> float:
        return float(self.p[n])

    def is_exact(self, n: int) -> bool:
        return n <= min(self.exact_horizon, self.exact_through)

    def even_roots(self) -> List[Tuple[int, float]]:
        """``(m, p_2m^(1/2m))`` for every nonzero even term ``m >= 1``."""
        out = []
        for m in range(1, self.n_max // 2 + 1):
            pv = self.value(2 * m)
            if pv > 0:
                out.append((m, math.exp(math.log(pv) / (2 * m))))
        return out

    def supermultiplicativity_violations(self) -> List[Tuple[int, int]]:
        """Pairs ``(n, m)`` with ``p_2(n+m) < p_2n · p_2m`` among exact terms."""
        bad = []
        top = min(self.n_max, self.exact_horizon, self.exact_through) // 2
        for n in range(1, top + 1):
            for m in range(n, top - n + 1):
                if self.p[2 * (n + m)] < self.p[2 * n] * self.p[2 * m]:
                    bad.append((n, m))
        return bad

    def to_rows(self) -> List[Tuple[int, int, int, float]]:
        """CSV rows ``n, p_n_num, p_n_den, p_n_float`` (num/den only for exact terms)."""
        rows = []
        for n, pv in enumerate(self.p):
            if isinstance(pv, Fraction):
                rows.append((n, pv.numerator, pv.denominator, float(pv)))
            else:
                rows.append((n, None, None, float(pv)))
        return rows


def return_probabilities(ball, n_max: int, *, allow_truncation: bool = False) -> ReturnSeries:
    """Exact ``p_n(base, base)`` by dynamic programming over the ball's move table."""
    space = as_walk_space(ball)
    _check_horizon(space, n_max, allow_truncation)
    exact_n = min(n_max, EXACT_LIMIT)
    counts, _ = walk_counts(space, exact_n)
    d = space.degree
    p: List[Union[Fraction, float]] = [Fraction(c, d**n) for n, c in enumerate(counts)]
    if n_max > exact_n:
        p.extend(_float_tail(space, exact_n, n_max))
        logger.debug(f"Switched to floating point after n={exact_n}")
    return ReturnSeries(
        degree=d,
        n_max=n_max,
        p=tuple(p),
        counts=tuple(counts),
        exact_horizon=space.horizon,
        exact_through=exact_n,
        truncated=n_max > space.horizon,
    )


def _float_tail(space: WalkSpace, start: int, n_max: int) -> List[float]:
    # float64 rerun from n=0; only the steps after ``start`` are kept.
    d = space.degree
    moves = space.moves
    src = np.repeat(np.arange(space.n_states), d)
    dst = moves.reshape(-1)
    keep = dst != ESCAPE
    src, dst = src[keep], dst[keep]
    vec = np.zeros(space.n_states)
    vec[space.base] = 1.0
    for _ in range(start):
        nxt = np.zeros_like(vec)
        np.add.at(nxt, dst, vec[src] / d)
        vec = nxt
    out = []
    for _ in range(start, n_max):
        nxt = np.zeros_like(vec)
        np.add.at(nxt, dst, vec[src] / d)
        vec = nxt
        out.append(float(vec[space.base]))
    return out


@dataclass(frozen=True)
class SpectralEstimate:
    rho_hat: float
    method: str
    root_test: float
    ratio_estimate: Optional[float]
    fit_window: Tuple[int, int]
    root_test_decreases: Tuple[int, ...] = ()
    confidence_note: str = ""

    def to_dict(self) -> dict:
        return {
            "rho_hat": self.rho_hat,
            "method": self.method,
            "root_test": self.root_test,
            "ratio_estimate": self.ratio_estimate,
            "fit_window": list(self.fit_window),
            "root_test_decreases": list(self.root_test_decreases),
            "confidence_note": self.confidence_note,
        }


def estimate_rho(series: ReturnSeries) -> SpectralEstimate:
    """Extrapolate ``r_m = p_2m^(1/2m)`` to ``m → ∞``.

    ``log r_m`` is fitted as ``log ρ + c1/m + c2·log(m)/m`` over the later half of the even terms
    (least squares). By supermultiplicativity every ``r_m`` is a lower bound for ``ρ``, so the
    estimate never drops below the largest ``r_m``; it is capped at 1.
    """
    total_even = series.n_max // 2
    if total_even < MIN_EVEN_TERMS:
        raise PreconditionError(
            f"need at least {MIN_EVEN_TERMS} even terms, got {total_even} (n_max={series.n_max})"
        )
    roots = series.even_roots()
    if not roots:
        raise DegenerateSeriesError("every even return probability is zero")

    ms = np.array([m for m, _ in roots], dtype=float)
    logs = np.log(np.array([r for _, r in roots]))
    lo = max(0, len(roots) // 2 - 1)
    window = slice(lo, len(roots))
    m_fit, y_fit = ms[window], logs[window]
    if len(m_fit) >= 3:
        design = np.column_stack([np.ones_like(m_fit), 1.0 / m_fit, np.log(m_fit) / m_fit])
        coef, *_ = np.linalg.lstsq(design, y_fit, rcond=None)
        fitted = float(np.exp(coef[0]))
        method = "even-subsequence-extrapolation"
    else:
        fitted = float(np.exp(logs[-1]))
        method = "root-test"

    root_test = float(np.exp(logs[-1]))
    floor = float(np.exp(logs.max()))
    rho_hat = min(1.0, max(fitted, floor))

    ratio = None
    last_m = roots[-1][0]
    prev = series.value(2 * last_m - 2)
    if last_m >= 2 and prev > 0:
        ratio = min(1.0, math.sqrt(series.value(2 * last_m) / prev))

    decreases = tuple(int(ms[i]) for i in range(1, len(ms)) if logs[i] < logs[i - 1] - 1e-15)
    if decreases:
        logger.warning(f"Root-test sequence decreases at m={list(decreases)}")
    note = (
        f"fit over m={int(m_fit[0])}..{int(m_fit[-1])}; root-test values are lower bounds; "
        + ("exact terms" if series.exact_through >= series.n_max else "float tail")
    )
    return SpectralEstimate(
        rho_hat=rho_hat,
        method=method,
        root_test=root_test,
        ratio_estimate=ratio,
        fit_window=(int(m_fit[0]), int(m_fit[-1])),
        root_test_decreases=decreases,
        confidence_note=note,
    )


@dataclass(frozen=True)
class DecayReport:
    """``p_n ≤ C σ^n`` with ``σ = ρ̂``: the largest observed ``p_n / σ^n`` on the horizon."""

    sigma: float
    max_ratio: float
    argmax: int


def decay_sigma(series: ReturnSeries, estimate: Optional[SpectralEstimate] = None) -> DecayReport:
    estimate = estimate or estimate_rho(series)
    sigma = estimate.rho_hat
    best, arg = 0.0, 0
    for n in range(series.n_max + 1):
        ratio = series.value(n) / sigma**n
        if ratio > best:
            best, arg = ratio, n
    return DecayReport(sigma, best, arg)


@dataclass(frozen=True)
class MonteCarloSeries:
    walks: int
    seed: int
    workers: int
    p_hat: Tuple[float, ...]
    stderr: Tuple[float, ...]
    censored: Tuple[float, ...]
    censoring_warning: bool = False
    notes: Tuple[str, ...] = field(default=())


def _run_block(
    table: np.ndarray, base: int, sink: int, n_max: int, walks: int, seed_seq
) -> Tuple[np.ndarray, np.ndarray]:
    rng = np.random.default_rng(seed_seq)
    degree = table.shape[1]
    pos = np.full(walks, base, dtype=np.int64)
    hits = np.zeros(n_max + 1, dtype=np.int64)
    lost = np.zeros(n_max + 1, dtype=np.int64)
    hits[0] = walks
    for n in range(1, n_max + 1):
        pos = table[pos, rng.integers(0, degree, size=walks)]
        hits[n] = int(np.count_nonzero(pos == base))
        lost[n] = int(np.count_nonzero(pos == sink))
    return hits, lost


def monte_carlo_returns(
    ball,
    n_max: int,
    walks: int,
    seed: int,
    *,
    workers: int = 4,
    allow_truncation: bool = False,
) -> MonteCarloSeries:
    """Empirical return frequencies; walks that leave the ball are absorbed and counted.

    Walks are split into ``workers`` blocks, each seeded from ``SeedSequence(seed).spawn``, so the
    result depends only on ``(seed, workers)``.
    """
    if walks < 1:
        raise PreconditionError(f"walks must be at least 1, got {walks}")
    space = as_walk_space(ball)
    _check_horizon(space, n_max, allow_truncation)
    workers = max(1, workers)
    table = space.sink_table()
    sink = space.n_states
    sizes = [walks // workers + (1 if i < walks % workers else 0) for i in range(workers)]
    seeds = np.random.SeedSequence(seed).spawn(workers)
    with ThreadPoolExecutor(max_workers=workers) as pool:
        futures = [
            pool.submit(_run_block, table, space.base, sink, n_max, size, s)
            for size, s in zip(sizes, seeds)
            if size
        ]
        results = [f.result() for f in futures]
    hits = sum(r[0] for r in results)
    lost = sum(r[1] for r in results)
    p_hat = hits / walks
    stderr = np.sqrt(p_hat * (1 - p_hat) / walks)
    censored = lost / walks
    warn = bool(np.any(censored > 0.5))
    notes = ()
    if warn:
        first = int(np.argmax(censored > 0.5))
        notes = (f"more than half of the walks left the ball by n={first}",)
        logger.warning(f"Monte Carlo censoring exceeds 50% from n={first}")
    return MonteCarloSeries(
        walks=walks,
        seed=seed,
        workers=workers,
        p_hat=tuple(float(x) for x in p_hat),
        stderr=tuple(float(x) for x in stderr),
        censored=tuple(float(x) for x in censored),
        censoring_warning=warn,
        notes=notes,
    )
