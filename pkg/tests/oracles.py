"""Brute-force reference answers for the free group on ``a, b``."""

from itertools import product

from groups.words import Word, enumerate_reduced_words, free_reduce
from schreier.core import membership


def words_up_to(alphabet, n):
    for length in range(n + 1):
        yield from enumerate_reduced_words(alphabet, length)


def conjugate_power_into(core, c: Word, max_g: int, max_n: int):
    """A pair ``(g, n)`` with ``g⁻¹cⁿg ∈ H``, ``|g| <= max_g`` and ``1 <= |n| <= max_n``."""
    powers = [c**n for n in range(1, max_n + 1)] + [c**-n for n in range(1, max_n + 1)]
    for g in words_up_to(core.alphabet, max_g):
        for n, cn in zip(list(range(1, max_n + 1)) + list(range(-1, -max_n - 1, -1)), powers):
            if membership(core, free_reduce(g.inverse() * cn * g)):
                return g, n
    return None


def closed_word_count(alphabet, n):
    """Number of all words of length ``n`` that freely reduce to the identity."""
    count = 0
    for letters in product(alphabet.letters, repeat=n):
        if not free_reduce(Word(alphabet, letters)).letters:
            count += 1
    return count


def conjugate_into(core, gens, max_g: int, max_len: int):
    """A pair ``(g, f)`` with ``f ≠ 1`` a product of at most ``max_len`` of ``gens`` and their
    inverses, ``|g| <= max_g`` and ``g⁻¹fg ∈ H``."""
    letters = list(gens) + [x.inverse() for x in gens]
    elements = {}
    for n in range(1, max_len + 1):
        for combo in product(letters, repeat=n):
            f = combo[0]
            for x in combo[1:]:
                f = free_reduce(f * x)
            f = free_reduce(f)
            if f.letters:
                elements.setdefault(f.letters, f)
    for g in words_up_to(core.alphabet, max_g):
        for f in elements.values():
            if membership(core, free_reduce(g.inverse() * f * g)):
                return g, f
    return None


def rewriting_table(relators):
    """``u -> v⁻¹`` for every split ``u·v`` of a cyclic conjugate of ``r^±1`` with ``|v| <= |u|``."""
    table = {}
    for r in relators:
        for letters in (r.letters, r.inverse().letters):
            for s in range(len(letters)):
                rotation = letters[s:] + letters[:s]
                for j in range(len(rotation) // 2, len(rotation) + 1):
                    u, v = rotation[:j], rotation[j:]
                    if u:
                        table.setdefault(u, set()).add(tuple(x ^ 1 for x in reversed(v)))
    return table


def rewrites_to_identity(table, letters) -> bool:
    """Search every order of free cancellations and length-nonincreasing relator rewrites."""
    lengths = sorted({len(u) for u in table})
    start = tuple(letters)
    seen = {start}
    frontier = [start]
    while frontier:
        word = frontier.pop()
        if not word:
            return True
        moves = []
        for i in range(len(word) - 1):
            if word[i] == word[i + 1] ^ 1:
                moves.append(word[:i] + word[i + 2 :])
        for i in range(len(word)):
            for n in lengths:
                for v in table.get(word[i : i + n], ()):
                    moves.append(word[:i] + v + word[i + n :])
        for nxt in moves:
            if nxt not in seen:
                seen.add(nxt)
                frontier.append(nxt)
    return False


def reduced_letter_tuples(size: int, n: int):
    """Freely reduced words of length ``n`` over letters ``0..size-1`` (inverse ``x ^ 1``)."""
    if n == 0:
        yield ()
        return
    for prefix in reduced_letter_tuples(size, n - 1):
        last = prefix[-1] ^ 1 if prefix else None
        for x in range(size):
            if x != last:
                yield prefix + (x,)
