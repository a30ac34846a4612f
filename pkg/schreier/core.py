"""Stallings cores of finitely generated subgroups of free groups.

Folding follows the coset-enumeration bookkeeping: vertices live in a union-find, each vertex
keeps one target slot per letter (``-1`` when empty) and a label clash queues the two targets for
identification. After folding, vertices are renumbered in BFS order from the base (letter order
positives first) and hanging trees away from the base are trimmed.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from functools import cached_property
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from groups.exceptions import MalformedInputError, PreconditionError
from groups.words import Letters, MarkedAlphabet, Word, _reduce, enumerate_reduced_words, free_reduce
from storage.logging_compat import get_logger

logger = get_logger(__name__)

SENTINEL = -1


@dataclass(frozen=True, eq=False)
class CoreGraph:
    """A folded based graph; ``targets[v][x]`` is the end of the ``x``-edge at ``v`` (or None)."""

    alphabet: MarkedAlphabet
    targets: Tuple[Tuple[Optional[int], ...], ...]
    base: int = 0
    folded: bool = True

    @property
    def n_vertices(self) -> int:
        return len(self.targets)

    @cached_property
    def edges(self) -> Tuple[Tuple[int, int, int], ...]:
        """``(u, positive letter, v)`` once per positive edge, in vertex then letter order."""
        out = []
        for u, row in enumerate(self.targets):
            for x in range(0, len(row), 2):
                v = row[x]
                if v is not None:
                    out.append((u, x, v))
        return tuple(out)

    @property
    def n_edges(self) -> int:
        return len(self.edges)

    @property
    def rank(self) -> int:
        """Rank of the subgroup: ``E - V + 1`` (the core is connected)."""
        return self.n_edges - self.n_vertices + 1

    def step(self, v: int, x: int) -> Optional[int]:
        return self.targets[v][x]

    def degree(self, v: int) -> int:
        return sum(1 for t in self.targets[v] if t is not None)

    def read(self, letters: Iterable[int], start: Optional[int] = None) -> Optional[int]:
        v = self.base if start is None else start
        for x in letters:
            v = self.targets[v][x]
            if v is None:
                return None
        return v

    def readable(self, letters: Sequence[int], start: Optional[int] = None) -> bool:
        return self.read(letters, start) is not None

    @cached_property
    def depths(self) -> Tuple[int, ...]:
        """BFS distance of every vertex from the base."""
        dist = [-1] * self.n_vertices
        dist[self.base] = 0
        queue = deque([self.base])
        while queue:
            u = queue.popleft()
            for v in self.targets[u]:
                if v is not None and dist[v] < 0:
                    dist[v] = dist[u] + 1
                    queue.append(v)
        return tuple(dist)

    @cached_property
    def tree_words(self) -> Tuple[Letters, ...]:
        """Shortlex-least word labelling a path from the base to each vertex."""
        words: List[Optional[Letters]] = [None] * self.n_vertices
        words[self.base] = ()
        queue = deque([self.base])
        while queue:
            u = queue.popleft()
            for x in self.alphabet.letters:
                v = self.targets[u][x]
                if v is not None and words[v] is None:
                    words[v] = words[u] + (x,)
                    queue.append(v)
        return tuple(words)  # type: ignore[arg-type]

    def describe(self) -> Dict[str, int]:
        return {"vertices": self.n_vertices, "edges": self.n_edges, "rank": self.rank}


def _finalize(
    alphabet: MarkedAlphabet,
    rows: Sequence[Sequence[int]],
    base: int,
) -> CoreGraph:
    """Trim hanging trees away from ``base`` and renumber the rest in BFS order from it."""
    alive = [True] * len(rows)
    degree = [sum(1 for t in row if t != SENTINEL) for row in rows]
    stack = [v for v in range(len(rows)) if v != base and degree[v] <= 1]
    while stack:
        v = stack.pop()
        if not alive[v] or v == base or degree[v] > 1:
            continue
        alive[v] = False
        for t in rows[v]:
            if t != SENTINEL and alive[t] and t != v:
                degree[t] -= 1
                if t != base and degree[t] <= 1:
                    stack.append(t)

    renum = {base: 0}
    queue = deque([base])
    while queue:
        u = queue.popleft()
        for x in alphabet.letters:
            t = rows[u][x]
            if t != SENTINEL and alive[t] and t not in renum:
                renum[t] = len(renum)
                queue.append(t)
    targets: List[Tuple[Optional[int], ...]] = [()] * len(renum)
    for old, new in renum.items():
        targets[new] = tuple(
            renum[t] if t != SENTINEL and alive[t] else None for t in rows[old]
        )
    return CoreGraph(alphabet, tuple(targets))


class _Folder:
    """Union-find folding of a labelled graph, one slot per (vertex, letter)."""

    def __init__(self, size: int):
        self.size = size
        self.labels: List[int] = []
        self.neighbors: List[List[int]] = []

    def add_vertex(self) -> int:
        self.labels.append(len(self.labels))
        self.neighbors.append([SENTINEL] * self.size)
        return len(self.labels) - 1

    def find(self, c: int) -> int:
        root = c
        while self.labels[root] != root:
            root = self.labels[root]
        while self.labels[c] != root:
            self.labels[c], c = root, self.labels[c]
        return root

    def add_edge(self, u: int, x: int, v: int) -> None:
        self._attach(u, x, v)
        self._attach(self.find(v), x ^ 1, self.find(u))

    def _attach(self, u: int, x: int, v: int) -> None:
        u, v = self.find(u), self.find(v)
        current = self.neighbors[u][x]
        if current == SENTINEL:
            self.neighbors[u][x] = v
        else:
            self.unify(current, v)

    def unify(self, c1: int, c2: int) -> None:
        to_unify = [(c1, c2)]
        while to_unify:
            c1, c2 = to_unify.pop()
            c1, c2 = self.find(c1), self.find(c2)
            if c1 == c2:
                continue
            if c2 < c1:
                c1, c2 = c2, c1
            self.labels[c2] = c1
            for d in range(self.size):
                n2 = self.neighbors[c2][d]
                if n2 == SENTINEL:
                    continue
                n1 = self.neighbors[c1][d]
                if n1 == SENTINEL:
                    self.neighbors[c1][d] = n2
                else:
                    to_unify.append((n1, n2))

    def resolved(self) -> Tuple[List[List[int]], Dict[int, int]]:
        """Rows indexed by compact ids over the surviving classes, plus the id map."""
        roots = sorted({self.find(c) for c in range(len(self.labels))})
        ids = {r: i for i, r in enumerate(roots)}
        rows = []
        for r in roots:
            rows.append(
                [ids[self.find(t)] if t != SENTINEL else SENTINEL for t in self.neighbors[r]]
            )
        return rows, ids


def stallings_core(alphabet: MarkedAlphabet, generators: Sequence[Word]) -> CoreGraph:
    """Fold the bouquet of generator petals into the core of ``⟨generators⟩``."""
    folder = _Folder(alphabet.size)
    base = folder.add_vertex()
    for g in generators:
        if g.alphabet != alphabet:
            raise MalformedInputError(f"generator {g} is over a different alphabet")
        letters = free_reduce(g).letters
        if not letters:
            continue
        u = base
        for i, x in enumerate(letters):
            v = base if i == len(letters) - 1 else folder.add_vertex()
            folder.add_edge(u, x, v)
            u = v
    rows, ids = folder.resolved()
    core = _finalize(alphabet, rows, ids[folder.find(base)])
    logger.debug(
        f"Folded {len(generators)} generator(s) into a core with {core.n_vertices} vertices, "
        f"rank {core.rank}"
    )
    return core


def membership(core: CoreGraph, w: Word) -> bool:
    """Whether ``w`` (free-reduced first) labels a closed path at the base."""
    return core.read(free_reduce(w).letters) == core.base


def membership_letters(core: CoreGraph, letters: Sequence[int]) -> bool:
    return core.read(_reduce(letters)) == core.base


def intersect_cores(c1: CoreGraph, c2: CoreGraph) -> CoreGraph:
    """Core of ``H1 ∩ H2``: the base component of the fiber product, trimmed."""
    if c1.alphabet != c2.alphabet:
        raise MalformedInputError("cores are over different alphabets")
    alphabet = c1.alphabet
    start = (c1.base, c2.base)
    index = {start: 0}
    pairs = [start]
    rows: List[List[int]] = [[SENTINEL] * alphabet.size]
    queue = deque([0])
    while queue:
        i = queue.popleft()
        u1, u2 = pairs[i]
        for x in alphabet.letters:
            v1, v2 = c1.targets[u1][x], c2.targets[u2][x]
            if v1 is None or v2 is None:
                continue
            j = index.get((v1, v2))
            if j is None:
                j = len(pairs)
                index[(v1, v2)] = j
                pairs.append((v1, v2))
                rows.append([SENTINEL] * alphabet.size)
                queue.append(j)
            rows[i][x] = j
    return _finalize(alphabet, rows, 0)


@dataclass(frozen=True)
class IndexInfo:
    finite: bool
    index: Optional[int] = None

    def __str__(self) -> str:
        return f"finite index {self.index}" if self.finite else "infinite index"


def subgroup_index_info(core: CoreGraph) -> IndexInfo:
    """Finite index iff every core vertex carries all ``2k`` edges; the index is then ``|V|``."""
    if all(all(t is not None for t in row) for row in core.targets):
        return IndexInfo(True, core.n_vertices)
    return IndexInfo(False)


def free_basis(core: CoreGraph) -> List[Word]:
    """One basis element per edge outside the BFS spanning tree, in edge order."""
    words = core.tree_words
    tree = set()
    for v, w in enumerate(words):
        if w:
            parent = core.read(w[:-1])
            tree.add((parent, w[-1], v) if w[-1] % 2 == 0 else (v, w[-1] ^ 1, parent))
    basis = []
    for u, x, v in core.edges:
        if (u, x, v) in tree:
            continue
        letters = _reduce(words[u] + (x,) + tuple(y ^ 1 for y in reversed(words[v])))
        basis.append(Word(core.alphabet, letters, True))
    return basis


def is_infinite(core: CoreGraph) -> bool:
    return core.rank > 0


def shortest_cycle_word(core: CoreGraph, max_length: Optional[int] = None) -> Word:
    """The shortlex-least nontrivial reduced word labelling a closed path at the base."""
    if core.rank == 0:
        raise PreconditionError("the trivial subgroup has no nontrivial elements")
    # A shortest based cycle runs out along a tree path, round a simple cycle and back.
    limit = max_length if max_length is not None else 2 * core.n_vertices + 1
    for n in range(1, limit + 1):
        for w in enumerate_reduced_words(core.alphabet, n, prune=core.readable):
            if core.read(w.letters) == core.base:
                return w
    raise PreconditionError(f"no based cycle of length <= {limit}")
