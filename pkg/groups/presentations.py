"""Group presentations with a pluggable word-problem oracle.

A presentation with no relators is a free group and uses free reduction as its oracle. A
presentation with relators must satisfy the C'(1/6) metric condition, checked when it is
built; its oracle is Dehn's algorithm (repeatedly replace the leftmost, longest subword that is
more than half of a cyclic conjugate of a relator or its inverse by the shorter complement).

File format (UTF-8)::

    alphabet: a b c d
    relator: a b a' b' c d c' d'

Blank lines and ``#`` comments are ignored.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from functools import cached_property
from pathlib import Path
from typing import Dict, List, Optional, Sequence, Tuple

from storage.logging_compat import get_logger

from .abelian import Lattice, exponent_vector
from .exceptions import MalformedInputError, PresentationRejectedError
from .words import Letters, MarkedAlphabet, Word, _reduce, is_cyclically_reduced, parse_word

logger = get_logger(__name__)

SMALL_CANCELLATION_BOUND = Fraction(1, 6)


class OracleKind(str, Enum):
    FREE = "Free"
    SMALL_CANCELLATION = "SmallCancellation"


@dataclass(frozen=True)
class PieceReport:
    """Largest piece ratio of a presentation; ``piece`` is a longest piece (None if free)."""

    ratio: Fraction
    piece: Optional[Word] = None
    relator: Optional[Word] = None

    @property
    def passes(self) -> bool:
        return self.ratio < SMALL_CANCELLATION_BOUND


def _symmetrized(relators: Sequence[Word]) -> List[Tuple[int, Letters]]:
    """Every cyclic conjugate of every relator and of its inverse, tagged by relator index.

    Entries are positional: a proper power contributes equal words at different offsets.
    """
    out = []
    for i, r in enumerate(relators):
        for letters in (r.letters, r.inverse().letters):
            n = len(letters)
            for s in range(n):
                out.append((i, letters[s:] + letters[:s]))
    return out


def validate_small_cancellation(p: "Presentation") -> PieceReport:
    """Return the largest (piece length) / (relator length) over the symmetrized relators.

    A piece is a common prefix of two distinct entries of the symmetrized set; the ratio of a
    piece is taken against the shorter of the two entries it starts.
    """
    entries = _symmetrized(p.relators)
    best = PieceReport(Fraction(0))
    for a in range(len(entries)):
        ia, ra = entries[a]
        for b in range(a + 1, len(entries)):
            ib, rb = entries[b]
            n = min(len(ra), len(rb))
            j = 0
            while j < n and ra[j] == rb[j]:
                j += 1
            if j == 0:
                continue
            ratio = Fraction(j, n)
            if ratio > best.ratio:
                relator = p.relators[ia] if len(ra) <= len(rb) else p.relators[ib]
                best = PieceReport(ratio, Word(p.alphabet, ra[:j]), relator)
    return best


@dataclass(frozen=True)
class Presentation:
    """``⟨alphabet | relators⟩``. Build with :meth:`create` so the C'(1/6) gate runs."""

    alphabet: MarkedAlphabet
    relators: Tuple[Word, ...] = ()
    oracle_kind: OracleKind = OracleKind.FREE
    piece_ratio: Fraction = field(default=Fraction(0), compare=False)

    @classmethod
    def create(cls, alphabet: MarkedAlphabet, relators: Sequence[Word] = ()) -> "Presentation":
        rels = []
        for r in relators:
            if r.alphabet != alphabet:
                raise MalformedInputError("relator is over a different alphabet")
            if not r or not is_cyclically_reduced(r):
                raise MalformedInputError(f"relator {r} is not a nonempty cyclically reduced word")
            rels.append(r)
        kind = OracleKind.SMALL_CANCELLATION if rels else OracleKind.FREE
        draft = cls(alphabet, tuple(rels), kind)
        report = validate_small_cancellation(draft)
        if not report.passes:
            raise PresentationRejectedError(
                f"presentation fails C'(1/6): piece {report.piece} of relator {report.relator} "
                f"has ratio {report.ratio} >= 1/6",
                piece=report.piece,
                ratio=report.ratio,
            )
        if rels:
            logger.debug(
                f"Accepted small-cancellation presentation with {len(rels)} relator(s), "
                f"largest piece ratio {report.ratio}"
            )
        return cls(alphabet, tuple(rels), kind, report.ratio)

    @property
    def is_free(self) -> bool:
        return self.oracle_kind is OracleKind.FREE

    @property
    def rank(self) -> int:
        return self.alphabet.rank

    @cached_property
    def _dehn_table(self) -> Dict[Letters, Letters]:
        """Map each subword ``u`` longer than half of a symmetrized relator ``u·v`` to ``v⁻¹``."""
        table: Dict[Letters, Letters] = {}
        for _, s in _symmetrized(self.relators):
            n = len(s)
            for j in range(n // 2 + 1, n + 1):
                u = s[:j]
                if u not in table:
                    table[u] = tuple(x ^ 1 for x in reversed(s[j:]))
        return table

    @cached_property
    def _dehn_lengths(self) -> Tuple[int, ...]:
        return tuple(sorted({len(u) for u in self._dehn_table}, reverse=True))

    @cached_property
    def relator_lattice(self) -> Lattice:
        k = self.alphabet.rank
        return Lattice(k, [exponent_vector(k, r.letters) for r in self.relators])

    def dehn_reduce_letters(self, letters: Sequence[int]) -> Letters:
        word = _reduce(letters)
        if self.is_free:
            return word
        table = self._dehn_table
        lengths = self._dehn_lengths
        changed = True
        while changed and word:
            changed = False
            n = len(word)
            for i in range(n):
                for length in lengths:
                    if i + length > n:
                        continue
                    replacement = table.get(word[i : i + length])
                    if replacement is not None:
                        word = _reduce(word[:i] + replacement + word[i + length :])
                        changed = True
                        break
                if changed:
                    break
        return word

    def abelian_key(self, letters: Sequence[int]) -> Tuple[int, ...]:
        return self.relator_lattice.reduce(exponent_vector(self.alphabet.rank, letters))

    def equal_letters(self, u: Sequence[int], v: Sequence[int]) -> bool:
        return not self.dehn_reduce_letters(tuple(u) + tuple(x ^ 1 for x in reversed(v)))


def dehn_reduce(p: Presentation, w: Word) -> Word:
    """The Dehn-shortened form of ``w`` (the free reduction for a free presentation)."""
    return Word(p.alphabet, p.dehn_reduce_letters(w.letters), True)


def is_trivial(p: Presentation, w: Word) -> bool:
    """Whether ``w`` represents the identity; exact for free and C'(1/6) presentations."""
    return not p.dehn_reduce_letters(w.letters)


def abelian_key(p: Presentation, w: Word) -> Tuple[int, ...]:
    return p.abelian_key(w.letters)


def free_presentation(k: int = 2) -> Presentation:
    names = "abcdefghijklmnopqrstuvwxyz"
    if not 1 <= k <= len(names):
        raise MalformedInputError(f"free rank must be between 1 and {len(names)}, got {k}")
    return Presentation.create(MarkedAlphabet(tuple(names[:k])))


def surface_presentation(genus: int = 2) -> Presentation:
    """``⟨a b c d ... | [a,b][c,d]...⟩``, C'(1/(4g)) for genus ``g ≥ 2``."""
    names = "abcdefghijklmnopqrstuvwxyz"
    if not 2 <= genus <= len(names) // 2:
        raise MalformedInputError(f"genus must be between 2 and {len(names) // 2}, got {genus}")
    alphabet = MarkedAlphabet(tuple(names[: 2 * genus]))
    letters = []
    for i in range(genus):
        x, y = 4 * i, 4 * i + 2
        letters += [x, y, x ^ 1, y ^ 1]
    return Presentation.create(alphabet, [Word(alphabet, tuple(letters))])


def parse_presentation(text: str) -> Presentation:
    """Parse the ``alphabet:`` / ``relator:`` text format."""
    alphabet: Optional[MarkedAlphabet] = None
    relators: List[Word] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0]
        if not line.strip():
            continue
        key, sep, rest = line.partition(":")
        if not sep:
            raise MalformedInputError("expected 'alphabet:' or 'relator:'", line=lineno, column=1)
        key = key.strip()
        offset = len(key) + 1 + (len(line) - len(line.lstrip()))
        if key == "alphabet":
            if alphabet is not None:
                raise MalformedInputError("alphabet given twice", line=lineno, column=1)
            try:
                alphabet = MarkedAlphabet(tuple(rest.split()))
            except MalformedInputError as exc:
                raise MalformedInputError(str(exc), line=lineno, column=offset + 1) from None
        elif key == "relator":
            if alphabet is None:
                raise MalformedInputError("relator before alphabet", line=lineno, column=1)
            try:
                relators.append(parse_word(alphabet, rest))
            except MalformedInputError as exc:
                column = exc.column + offset if exc.column is not None else None
                raise MalformedInputError(
                    str(exc).split(": ", 1)[-1], line=lineno, column=column
                ) from None
        else:
            raise MalformedInputError(f"unknown key {key!r}", line=lineno, column=1)
    if alphabet is None:
        raise MalformedInputError("missing 'alphabet:' line", line=1, column=1)
    return Presentation.create(alphabet, relators)


def load_presentation(path: str | Path) -> Presentation:
    return parse_presentation(Path(path).read_text(encoding="utf-8"))


def format_presentation(p: Presentation) -> str:
    lines = ["alphabet: " + " ".join(p.alphabet.positive_letters)]
    lines += [f"relator: {r}" for r in p.relators]
    return "\n".join(lines) + "\n"


def parse_subgroup(alphabet: MarkedAlphabet, text: str) -> List[Word]:
    """One generator word per line, apostrophe inverse notation; ``#`` comments allowed."""
    gens = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0]
        if not line.strip():
            continue
        gens.append(parse_word(alphabet, line, line=lineno))
    return gens


def load_subgroup(alphabet: MarkedAlphabet, path: str | Path) -> List[Word]:
    return parse_subgroup(alphabet, Path(path).read_text(encoding="utf-8"))
