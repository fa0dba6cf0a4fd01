import itertools
import random
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from orbitalis.models import bs12, translations
from orbitalis.plmap import PLMap
from orbitalis.words import (
    Assignment,
    Word,
    commutator_probe,
    count_reduced,
    enumerate_words,
    evaluate_word,
    parse_word,
    random_word,
    reduce,
)

A = bs12()
letters = st.tuples(st.integers(0, 1), st.sampled_from([1, -1]))


def test_reduce_examples():
    assert reduce([(0, 1), (0, -1)]) == Word()
    assert reduce(A.parse("g f f^-1 g").letters) == A.parse("g g")
    assert A.format(reduce(A.parse("g f f^-1 g").letters)) == "g g"


def test_parse_and_format_round_trip():
    w = A.parse("g f^-1 g")
    assert w.letters == ((1, 1), (0, -1), (1, 1))
    assert A.format(w) == "g f^-1 g"
    assert A.parse("f^3 g^-2") == A.parse("f f f g^-1 g^-1")
    assert A.format(Word()) == "1" and A.parse("1") == Word()
    with pytest.raises(KeyError):
        A.parse("h")
    with pytest.raises(ValueError):
        A.parse("f^")


def test_enumerate_examples():
    assert list(enumerate_words(2, 0)) == [Word()]
    assert len(list(enumerate_words(2, 1))) == 5
    assert sum(1 for w in enumerate_words(2, 3) if len(w) == 3) == 36


def test_enumerate_matches_filtered_brute_force():
    for k in (1, 2):
        for L in range(7):
            alphabet = [(i, e) for i in range(k) for e in (1, -1)]
            naive = [
                Word(p)
                for n in range(L + 1)
                for p in itertools.product(alphabet, repeat=n)
                if Word(p).is_reduced()
            ]
            got = list(enumerate_words(k, L))
            assert len(got) == len(set(got)) == len(naive)
            assert set(got) == set(naive)
            assert [w.sort_key() for w in got] == sorted(w.sort_key() for w in got)
            assert len(got) == sum(count_reduced(k, n) for n in range(L + 1))


def test_evaluate_examples():
    assert evaluate_word(Word(), A).is_identity()
    assert evaluate_word(A.parse("g f"), A) == PLMap.affine(2, 1)
    with pytest.raises(KeyError):
        evaluate_word(Word.letter(2), A)


def test_homomorphism_on_random_pairs():
    rng = random.Random(2)
    for _ in range(200):
        u, v = random_word(rng, 2, rng.randint(0, 8)), random_word(rng, 2, rng.randint(0, 8))
        assert evaluate_word(u * v, A) == evaluate_word(u, A).compose(evaluate_word(v, A))


@given(st.lists(letters, max_size=14))
def test_reduce_properties(raw):
    w = reduce(raw)
    assert w.is_reduced()
    assert len(w) <= len(raw)
    assert reduce(w) == w
    unreduced = Word(tuple(raw))
    assert evaluate_word(w, A) == evaluate_word(unreduced, A)
    assert evaluate_word(w.inverse(), A) == evaluate_word(w, A).inverse()


def test_assignment_json_round_trip():
    data = A.to_json()
    assert set(data["generators"]) == {"f", "g"}
    assert Assignment.from_json(data) == A
    with pytest.raises(ValueError):
        Assignment.from_json({"maps": {}})


def test_commutator_probe_examples():
    r = commutator_probe(translations(1, Fraction(1, 3)), 3, 1)
    assert r.all_trivial and r.witness is None
    r = commutator_probe(A, 2, 1)
    assert not r.all_trivial
    assert A.format(r.witness) == "f g f^-1 g^-1"
    assert evaluate_word(r.witness, A) == PLMap.affine(1, 1)
    assert commutator_probe(A, 4, 2).all_trivial


def test_commutator_probe_descends():
    for L in (1, 2, 3):
        results = [commutator_probe(A, L, d).all_trivial for d in (1, 2)]
        assert results[1] or not results[0]
