import pytest

from groups.exceptions import MalformedInputError
from groups.words import (
    MarkedAlphabet,
    cyclic_reduce,
    enumerate_reduced_words,
    format_word,
    free_reduce,
    is_cyclically_reduced,
    parse_word,
    reduced_word_count,
)


def test_parse_and_format(ab):
    word = parse_word(ab, "a b a'")
    assert word.letters == (0, 2, 1)
    assert format_word(word) == "a b a'"
    assert str(parse_word(ab, "")) == "1"
    assert parse_word(ab, "1").letters == ()


def test_parse_reports_column(ab):
    with pytest.raises(MalformedInputError) as info:
        parse_word(ab, "a c", line=3)
    assert info.value.line == 3
    assert info.value.column == 3


def test_juxtaposed_letters_rejected(ab):
    with pytest.raises(MalformedInputError):
        parse_word(ab, "ab")


def test_alphabet_rejects_duplicates():
    with pytest.raises(MalformedInputError):
        MarkedAlphabet.of("a", "a")


def test_free_reduce(w):
    assert free_reduce(w("a b b' a'")).letters == ()
    assert str(free_reduce(w("a b b' b"))) == "a b"


def test_products_and_powers(w):
    x = w("a b")
    assert not (x * x.inverse())
    assert str(x**3) == "a b a b a b"
    assert str(x**-1) == "b' a'"
    assert str(w("a b") * w("b' a")) == "a a"


def test_cyclic_reduce(w):
    core, conj = cyclic_reduce(w("b a b'"))
    assert str(core) == "a"
    assert str(conj) == "b"
    assert is_cyclically_reduced(w("a b"))
    assert not is_cyclically_reduced(w("a b a'"))


@pytest.mark.parametrize("n", range(6))
def test_enumeration_counts(ab, n):
    words = list(enumerate_reduced_words(ab, n))
    assert len(words) == reduced_word_count(2, n)
    assert len({x.letters for x in words}) == len(words)
    assert all(x.reduced and len(x) == n for x in words)


def test_enumeration_order(ab):
    first = [str(x) for x in enumerate_reduced_words(ab, 2)][:4]
    assert first == ["a a", "a b", "a b'", "b a"]


def test_enumeration_prune(ab):
    words = list(enumerate_reduced_words(ab, 3, prune=lambda p: p[0] == 0))
    assert len(words) == 9
    assert all(x.letters[0] == 0 for x in words)


def test_shortlex_order(ab):
    keys = sorted(ab.letters, key=ab.order_key)
    assert [ab.name(x) for x in keys] == ["a", "b", "a'", "b'"]
    assert ab.word("b").shortlex_key() < ab.word("a a").shortlex_key()
