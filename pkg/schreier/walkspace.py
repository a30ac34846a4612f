"""Move tables for random walks on balls.

A :class:`WalkSpace` lists, for each state, the ``2k`` equally likely moves; ``-1`` marks a move
that leaves the part of the graph where the walk is tracked exactly. Two constructions:

* :func:`ball_walk_space` reads the moves straight off a materialised :class:`BallGraph`;
* :func:`lumped_walk_space` never materialises the free-host Schreier ball. Outside the core every
  tree vertex at depth ``j`` below ``(v, x)`` behaves the same way (one move back up, ``2k-1``
  moves further down), so one state per ``(v, x, j)`` gives the same return counts at the base.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import List, Tuple

import numpy as np

from groups.balls import BallGraph

from .core import CoreGraph

ESCAPE = -1


@dataclass(frozen=True, eq=False)
class WalkSpace:
    degree: int
    moves: np.ndarray  # (n_states, degree) int64, ESCAPE for moves out of range
    base: int
    horizon: int
    kind: str

    @property
    def n_states(self) -> int:
        return int(self.moves.shape[0])

    def sink_table(self) -> np.ndarray:
        """Moves with an extra absorbing sink state appended in place of ``ESCAPE``."""
        sink = self.n_states
        table = np.where(self.moves == ESCAPE, sink, self.moves)
        return np.vstack([table, np.full((1, self.degree), sink, dtype=table.dtype)])


def ball_walk_space(ball: BallGraph) -> WalkSpace:
    moves = np.array(
        [[ESCAPE if t is None else t for t in row] for row in ball.targets], dtype=np.int64
    )
    return WalkSpace(ball.alphabet.size, moves, ball.base, 2 * ball.radius, "ball")


def lumped_walk_space(core: CoreGraph, radius: int) -> WalkSpace:
    size = core.alphabet.size
    depths = core.depths
    index = {("core", v): v for v in range(core.n_vertices)}
    rows: List[List[object]] = []
    for v in range(core.n_vertices):
        row = []
        for x in range(size):
            t = core.targets[v][x]
            if t is not None:
                row.append(("core", t) if depths[t] <= radius else None)
            elif depths[v] + 1 <= radius:
                row.append(("tree", v, x, 1))
            else:
                row.append(None)
        rows.append(row)

    states: List[Tuple] = [("core", v) for v in range(core.n_vertices)]
    pending = [s for row in rows for s in row if s is not None and s[0] == "tree"]
    while pending:
        s = pending.pop()
        if s in index:
            continue
        index[s] = len(states)
        states.append(s)
        _, v, x, j = s
        back = ("core", v) if j == 1 else ("tree", v, x, j - 1)
        deeper = ("tree", v, x, j + 1) if depths[v] + j + 1 <= radius else None
        rows.append([back] + [deeper] * (size - 1))
        if deeper is not None:
            pending.append(deeper)

    moves = np.full((len(states), size), ESCAPE, dtype=np.int64)
    for i, row in enumerate(rows):
        for x, s in enumerate(row):
            if s is not None:
                moves[i, x] = index[s]
    # Core vertices beyond the radius are unreachable within it; keep them as dead rows.
    for v in range(core.n_vertices):
        if depths[v] > radius:
            moves[v, :] = ESCAPE
    return WalkSpace(size, moves, core.base, 2 * radius, "lumped")
