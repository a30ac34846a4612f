"""Exponent-sum invariants.

A word's exponent vector in ``Z^k`` modulo a lattice (the relators' vectors, optionally plus a
subgroup's generators) is invariant under the group relations, so two words with different
reduced vectors can never be equal (or coset-equal). The BFS builders bucket candidates by this
key and only run the word-problem oracle inside a bucket.
"""

from __future__ import annotations

from typing import Iterable, List, Sequence, Tuple

Vector = Tuple[int, ...]


def exponent_vector(k: int, letters: Iterable[int]) -> Vector:
    vec = [0] * k
    for x in letters:
        vec[x >> 1] += -1 if x & 1 else 1
    return tuple(vec)


class Lattice:
    """An integer lattice in ``Z^k`` kept in Hermite normal form.

    ``reduce(v)`` returns the canonical representative of ``v + L``: each pivot coordinate lands
    in ``[0, pivot)``.
    """

    def __init__(self, k: int, generators: Iterable[Sequence[int]] = ()):
        self.k = k
        rows = [list(v) for v in generators if any(v)]
        basis: List[Tuple[int, List[int]]] = []
        for col in range(k):
            while True:
                nonzero = [i for i, r in enumerate(rows) if r[col] != 0]
                if len(nonzero) <= 1:
                    break
                nonzero.sort(key=lambda i: abs(rows[i][col]))
                pivot = rows[nonzero[0]]
                for i in nonzero[1:]:
                    q = rows[i][col] // pivot[col]
                    rows[i] = [a - q * b for a, b in zip(rows[i], pivot)]
                rows = [r for r in rows if any(r)]
            nonzero = [i for i, r in enumerate(rows) if r[col] != 0]
            if nonzero:
                row = rows.pop(nonzero[0])
                if row[col] < 0:
                    row = [-a for a in row]
                basis.append((col, row))
        # Reduce entries above each pivot.
        for j, (col, prow) in enumerate(basis):
            for i in range(j):
                c, row = basis[i]
                q = row[col] // prow[col]
                if q:
                    basis[i] = (c, [a - q * b for a, b in zip(row, prow)])
        self._basis = basis

    @property
    def rank(self) -> int:
        return len(self._basis)

    def reduce(self, v: Sequence[int]) -> Vector:
        out = list(v)
        for col, row in self._basis:
            q = out[col] // row[col]
            if q:
                out = [a - q * b for a, b in zip(out, row)]
        return tuple(out)

    def contains(self, v: Sequence[int]) -> bool:
        return not any(self.reduce(v))

    def __repr__(self) -> str:
        return f"Lattice(k={self.k}, basis={[row for _, row in self._basis]})"
