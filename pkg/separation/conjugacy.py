"""Exact conjugacy-separation decisions for subgroups of free groups.

A power of ``c`` is conjugate into ``H`` iff the cyclic word of some ``cⁿ`` is read as a closed
path somewhere in the core of ``H``; two subgroups meet after conjugation iff the unbased fiber
product of their cores carries a cycle. Both turn a quantifier over conjugators into a finite
scan.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Dict, List, Optional, Tuple

from groups.exceptions import (
    InvariantBreachError,
    MalformedInputError,
    NotFoundError,
    PreconditionError,
)
from groups.words import (
    Letters,
    Word,
    _reduce,
    cyclic_reduce,
    enumerate_reduced_words,
    free_reduce,
    is_cyclically_reduced,
)
from schreier.core import CoreGraph, shortest_cycle_word, stallings_core, subgroup_index_info
from storage.log import PerformanceLogger
from storage.logging_compat import get_logger

from .certificates import ConjugacyWitness, SeparationCertificate

logger = get_logger(__name__)

DEFAULT_SEARCH_LENGTH = 8
DEFAULT_POWER_BUDGET = 6


def _inverse(letters: Letters) -> Letters:
    return tuple(x ^ 1 for x in reversed(letters))


def _cyclic_period(core: CoreGraph, c: Letters) -> Optional[Tuple[int, int]]:
    """First cycle of ``v ↦ end of reading c from v``, as ``(vertex on the cycle, period)``."""
    image: List[Optional[int]] = [core.read(c, v) for v in range(core.n_vertices)]
    state = [0] * core.n_vertices  # 0 new, 1 on the current trail, 2 done
    for start in range(core.n_vertices):
        trail: List[int] = []
        v: Optional[int] = start
        while v is not None and state[v] == 0:
            state[v] = 1
            trail.append(v)
            v = image[v]
        if v is not None and state[v] == 1:
            return v, len(trail) - trail.index(v)
        for u in trail:
            state[u] = 2
    return None


def is_cyclic_conjugate_into(core: CoreGraph, c: Word) -> SeparationCertificate:
    """Decide whether some ``cⁿ`` (``n ≠ 0``) is conjugate into ``H``.

    ``c`` is cyclically reduced first; the witness conjugator accounts for that.
    """
    if not c:
        raise PreconditionError("c must be a nonempty word")
    reduced = free_reduce(c)
    if not reduced:
        raise PreconditionError(f"{c} is trivial")
    cyclic, outer = cyclic_reduce(reduced)
    subject = {"c": str(reduced), "H": core.describe()}
    hit = _cyclic_period(core, cyclic.letters)
    if hit is None:
        return SeparationCertificate(
            "cyclic-scan", subject, None, {"core_vertices": core.n_vertices}, core
        )
    v, n = hit
    # t·cyclicⁿ·t⁻¹ ∈ H for t the tree word of v, and c = outer·cyclic·outer⁻¹.
    t = core.tree_words[v]
    g = Word(core.alphabet, _reduce(outer.letters + _inverse(t)), True)
    power = reduced ** n
    target = free_reduce(g.inverse() * power * g)
    witness = ConjugacyWitness(g, power, target, n)
    logger.debug(f"{reduced}^{n} is conjugate into H via g = {g}")
    return SeparationCertificate(
        "cyclic-scan", subject, witness, {"core_vertices": core.n_vertices, "vertex": v}, core
    )


def find_separated_cyclic(core: CoreGraph, search_length: int = DEFAULT_SEARCH_LENGTH) -> Word:
    """The shortlex-least cyclically reduced ``c`` with ``⟨c⟩`` conjugacy separated from ``H``."""
    info = subgroup_index_info(core)
    if info.finite:
        raise PreconditionError(f"H has {info}; every cyclic subgroup meets a conjugate of it")
    for n in range(1, search_length + 1):
        for c in enumerate_reduced_words(core.alphabet, n):
            if not is_cyclically_reduced(c):
                continue
            if _cyclic_period(core, c.letters) is None:
                logger.debug(f"Separated cyclic subgroup found: <{c}>")
                return c
    raise NotFoundError(f"no separated cyclic word of length <= {search_length}")


def _component_cycle(
    rows: List[Dict[int, int]], root: int, members: List[int]
) -> Optional[Letters]:
    """A nontrivial reduced closed word at ``root`` inside one fiber-product component."""
    words: Dict[int, Letters] = {root: ()}
    queue = deque([root])
    tree = set()
    while queue:
        u = queue.popleft()
        for x, v in sorted(rows[u].items()):
            if v not in words:
                words[v] = words[u] + (x,)
                tree.add((u, x))
                tree.add((v, x ^ 1))
                queue.append(v)
    for u in sorted(members):
        for x, v in sorted(rows[u].items()):
            if (u, x) in tree:
                continue
            loop = _reduce(words[u] + (x,) + _inverse(words[v]))
            if loop:
                return loop
    return None


def subgroups_conjugacy_separated(core_h: CoreGraph, core_f: CoreGraph) -> SeparationCertificate:
    """Decide whether ``g⁻¹Hg ∩ F = 1`` for every ``g`` via the unbased fiber product."""
    if core_h.alphabet != core_f.alphabet:
        raise MalformedInputError("cores are over different alphabets")
    alphabet = core_h.alphabet
    index: Dict[Tuple[int, int], int] = {}
    pairs: List[Tuple[int, int]] = []
    for u in range(core_h.n_vertices):
        for v in range(core_f.n_vertices):
            index[(u, v)] = len(pairs)
            pairs.append((u, v))
    rows: List[Dict[int, int]] = [{} for _ in pairs]
    for i, (u, v) in enumerate(pairs):
        for x in alphabet.letters:
            a, b = core_h.targets[u][x], core_f.targets[v][x]
            if a is not None and b is not None:
                rows[i][x] = index[(a, b)]

    seen = [False] * len(pairs)
    components = cyclic = 0
    witness = None
    for root in range(len(pairs)):
        if seen[root]:
            continue
        components += 1
        members = [root]
        seen[root] = True
        queue = deque([root])
        while queue:
            u = queue.popleft()
            for t in rows[u].values():
                if not seen[t]:
                    seen[t] = True
                    members.append(t)
                    queue.append(t)
        n_edges = sum(len(rows[m]) for m in members) // 2
        if n_edges - len(members) + 1 <= 0:
            continue
        cyclic += 1
        if witness is not None:
            continue
        loop = _component_cycle(rows, root, members)
        if loop is None:
            raise InvariantBreachError("cyclic fiber-product component without a reduced loop")
        u0, v0 = pairs[root]
        th, tf = core_h.tree_words[u0], core_f.tree_words[v0]
        h = Word(alphabet, _reduce(th + loop + _inverse(th)), True)
        g = Word(alphabet, _reduce(th + _inverse(tf)), True)
        f = free_reduce(g.inverse() * h * g)
        witness = ConjugacyWitness(g, h, f)

    details = {
        "product_vertices": len(pairs),
        "components": components,
        "cyclic_components": cyclic,
    }
    subject = {"H": core_h.describe(), "F": core_f.describe()}
    cert = SeparationCertificate(
        "exact-fiber-product", subject, witness, details, core_f, core_h
    )
    if not cert.verify():
        raise InvariantBreachError(f"separation witness failed re-verification: {witness}")
    return cert


@dataclass(frozen=True)
class SeparatedPair:
    """A rank-two free subgroup ``⟨x, y⟩`` conjugacy separated from ``H``."""

    x: Word
    y: Word
    c: Word
    h_prime: Word
    m: int
    core: CoreGraph
    certificate: SeparationCertificate

    def to_dict(self) -> dict:
        return {
            "x": str(self.x),
            "y": str(self.y),
            "c": str(self.c),
            "h_prime": str(self.h_prime),
            "m": self.m,
            "freeness": {"rank": self.core.rank, **self.core.describe()},
            "separation": self.certificate.to_dict(),
        }


def construct_separated_free(
    core_h: CoreGraph,
    budget: int = DEFAULT_POWER_BUDGET,
    *,
    search_length: int = DEFAULT_SEARCH_LENGTH,
) -> SeparatedPair:
    """``x = cᵐ`` and ``y = h′⁻¹cᵐh′`` for the least ``m <= budget`` that certifies.

    ``c`` is the shortlex-least separated cyclic word and ``h′`` the shortlex-least based cycle
    word of the core. A pair is accepted when ``⟨x, y⟩`` folds to a rank-two core and the pair
    test finds no conjugate of ``H`` meeting it.
    """
    if core_h.rank == 0:
        raise PreconditionError("H is finite; the construction needs an infinite subgroup")
    with PerformanceLogger(logger, "construct separated free subgroup"):
        c = find_separated_cyclic(core_h, search_length)
        h_prime = shortest_cycle_word(core_h)
        for m in range(1, budget + 1):
            x = c**m
            y = free_reduce(h_prime.inverse() * x * h_prime)
            core = stallings_core(core_h.alphabet, [x, y])
            if core.rank != 2:
                logger.debug(f"m={m}: <{x}, {y}> has rank {core.rank}")
                continue
            cert = subgroups_conjugacy_separated(core_h, core)
            if not cert.separated:
                logger.debug(f"m={m}: <{x}, {y}> meets a conjugate of H")
                continue
            return SeparatedPair(x, y, c, h_prime, m, core, cert)
    raise NotFoundError(f"no certified pair with m <= {budget} for c = {c}, h' = {h_prime}")
