"""Marked alphabets and words with formal inverses.

Letters are interned as small integers: positive letter ``i`` is ``2*i`` and its formal inverse
is ``2*i + 1``, so ``inverse(x) == x ^ 1``. Enumeration and shortlex comparisons use the
positive-then-inverse order (``a < b < a' < b'`` for two generators), not the interned order.

Text form: letters are ASCII names, inverses carry a trailing apostrophe, tokens are separated
by whitespace (``a b a' b'``). The identity prints as ``1``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Callable, Iterable, Iterator, Optional, Sequence, Tuple

from .exceptions import MalformedInputError

_NAME = re.compile(r"^[A-Za-z_][A-Za-z0-9_]*$")

Letters = Tuple[int, ...]


def inverse_letter(x: int) -> int:
    return x ^ 1


@dataclass(frozen=True)
class MarkedAlphabet:
    """``k`` positive letters and their formal inverses (``2k`` letters in total)."""

    positive_letters: Tuple[str, ...]
    _index: dict = field(init=False, repr=False, compare=False, hash=False)
    _order: Tuple[int, ...] = field(init=False, repr=False, compare=False, hash=False)

    def __post_init__(self):
        names = tuple(self.positive_letters)
        if not names:
            raise MalformedInputError("an alphabet needs at least one letter")
        if len(set(names)) != len(names):
            raise MalformedInputError(f"duplicate letters in alphabet {list(names)}")
        for name in names:
            if not _NAME.match(name):
                raise MalformedInputError(f"invalid letter name {name!r}")
        object.__setattr__(self, "positive_letters", names)
        index = {}
        for i, name in enumerate(names):
            index[name] = 2 * i
            index[name + "'"] = 2 * i + 1
        object.__setattr__(self, "_index", index)
        k = len(names)
        order = tuple(2 * i for i in range(k)) + tuple(2 * i + 1 for i in range(k))
        object.__setattr__(self, "_order", order)

    @classmethod
    def of(cls, *names: str) -> "MarkedAlphabet":
        """``MarkedAlphabet.of("a", "b")``; a single space-separated string is split."""
        if len(names) == 1 and " " in names[0].strip():
            names = tuple(names[0].split())
        return cls(tuple(names))

    @property
    def rank(self) -> int:
        return len(self.positive_letters)

    @property
    def size(self) -> int:
        return 2 * len(self.positive_letters)

    @property
    def letters(self) -> Tuple[int, ...]:
        """All ``2k`` letters in enumeration order (positives first)."""
        return self._order

    def order_key(self, x: int) -> int:
        k = len(self.positive_letters)
        return x // 2 + (k if x & 1 else 0)

    def name(self, x: int) -> str:
        base = self.positive_letters[x // 2]
        return base + "'" if x & 1 else base

    def letter(self, name: str) -> int:
        try:
            return self._index[name]
        except KeyError:
            raise MalformedInputError(f"letter {name!r} is not in the alphabet") from None

    def check(self, letters: Iterable[int]) -> Letters:
        size = self.size
        out = tuple(letters)
        for x in out:
            if not isinstance(x, int) or not 0 <= x < size:
                raise MalformedInputError(f"letter id {x!r} is not in the alphabet")
        return out

    def shortlex_key(self, letters: Sequence[int]) -> Tuple[int, Tuple[int, ...]]:
        return len(letters), tuple(self.order_key(x) for x in letters)

    def word(self, text: str) -> "Word":
        return parse_word(self, text)


def _reduce(letters: Iterable[int]) -> Letters:
    out: list[int] = []
    for x in letters:
        if out and out[-1] == x ^ 1:
            out.pop()
        else:
            out.append(x)
    return tuple(out)


def _is_reduced(letters: Sequence[int]) -> bool:
    return all(letters[i] != letters[i + 1] ^ 1 for i in range(len(letters) - 1))


@dataclass(frozen=True)
class Word:
    """A finite letter sequence over an alphabet. ``reduced`` is set when no ``x x'`` occurs."""

    alphabet: MarkedAlphabet
    letters: Letters = ()
    reduced: bool = field(default=False, compare=False)

    def __post_init__(self):
        letters = self.alphabet.check(self.letters)
        object.__setattr__(self, "letters", letters)
        if not self.reduced and _is_reduced(letters):
            object.__setattr__(self, "reduced", True)

    @classmethod
    def identity(cls, alphabet: MarkedAlphabet) -> "Word":
        return cls(alphabet, (), True)

    def __len__(self) -> int:
        return len(self.letters)

    def __iter__(self) -> Iterator[int]:
        return iter(self.letters)

    def __getitem__(self, item):
        if isinstance(item, slice):
            return Word(self.alphabet, self.letters[item])
        return self.letters[item]

    def __bool__(self) -> bool:
        return bool(self.letters)

    def __mul__(self, other: "Word") -> "Word":
        """Concatenate and freely reduce."""
        return Word(self.alphabet, _reduce(self.letters + other.letters), True)

    def __pow__(self, n: int) -> "Word":
        base = self if n >= 0 else self.inverse()
        return Word(self.alphabet, _reduce(base.letters * abs(n)), True)

    def inverse(self) -> "Word":
        return Word(self.alphabet, tuple(x ^ 1 for x in reversed(self.letters)), self.reduced)

    def concat(self, other: "Word") -> "Word":
        """Concatenate without reduction."""
        return Word(self.alphabet, self.letters + other.letters)

    def shortlex_key(self):
        return self.alphabet.shortlex_key(self.letters)

    def __str__(self) -> str:
        return format_word(self)


def free_reduce(w: Word) -> Word:
    """The unique reduced word freely equal to ``w``."""
    if w.reduced:
        return w
    return Word(w.alphabet, _reduce(w.letters), True)


def cyclic_reduce(w: Word) -> Tuple[Word, Word]:
    """Split ``w`` as ``conjugator · core · conjugator⁻¹`` with ``core`` cyclically reduced."""
    letters = free_reduce(w).letters
    i, j = 0, len(letters) - 1
    while i < j and letters[i] == letters[j] ^ 1:
        i += 1
        j -= 1
    core = letters[i : j + 1]
    return Word(w.alphabet, core, True), Word(w.alphabet, letters[:i], True)


def is_cyclically_reduced(w: Word) -> bool:
    letters = w.letters
    return w.reduced and (len(letters) < 2 or letters[0] != letters[-1] ^ 1)


def enumerate_reduced_words(
    alphabet: MarkedAlphabet,
    n: int,
    prune: Optional[Callable[[Letters], bool]] = None,
) -> Iterator[Word]:
    """Yield the reduced words of length ``n`` in lexicographic order, each once.

    There are ``2k·(2k−1)^(n−1)`` of them for ``n ≥ 1``. ``prune(prefix)`` returning False cuts
    the subtree below ``prefix``; it never changes the order of what is yielded.
    """
    if n < 0:
        raise MalformedInputError(f"word length must be nonnegative, got {n}")
    order = alphabet.letters
    if n == 0:
        yield Word(alphabet, (), True)
        return

    # Explicit stack of (prefix, next candidate position) keeps this iterative.
    prefix: list[int] = []
    cursors = [0]
    while cursors:
        pos = cursors[-1]
        if pos == len(order):
            cursors.pop()
            if prefix:
                prefix.pop()
            continue
        cursors[-1] = pos + 1
        x = order[pos]
        if prefix and prefix[-1] == x ^ 1:
            continue
        prefix.append(x)
        candidate = tuple(prefix)
        if prune is not None and not prune(candidate):
            prefix.pop()
            continue
        if len(prefix) == n:
            yield Word(alphabet, candidate, True)
            prefix.pop()
        else:
            cursors.append(0)


def reduced_word_count(k: int, n: int) -> int:
    return 1 if n == 0 else 2 * k * (2 * k - 1) ** (n - 1)


def parse_word(alphabet: MarkedAlphabet, text: str, line: int | None = None) -> Word:
    """Parse the apostrophe form (``a b a' b'``); ``""`` and ``"1"`` are the identity.

    Juxtaposed letters (``ab``) and uppercase inverses (``A``) are rejected unless they happen
    to be letter names of the alphabet.
    """
    stripped = text.strip()
    if stripped in ("", "1"):
        return Word(alphabet, (), True)
    letters = []
    for match in re.finditer(r"\S+", text):
        token = match.group(0)
        try:
            letters.append(alphabet.letter(token))
        except MalformedInputError:
            raise MalformedInputError(
                f"unknown letter {token!r} (inverses are written with a trailing apostrophe)",
                line=line,
                column=match.start() + 1,
            ) from None
    return Word(alphabet, tuple(letters))


def format_word(w: Word) -> str:
    if not w.letters:
        return "1"
    return " ".join(w.alphabet.name(x) for x in w.letters)
