"""Reduced words over a finite alphabet and their evaluation as PL maps."""

from __future__ import annotations

import itertools
import random
import re
from dataclasses import dataclass, field
from typing import Iterator, Sequence

from .plmap import PLMap

Letter = tuple[int, int]


def _letter_key(letter: Letter) -> tuple[int, int]:
    # generator index first, positive letter before its inverse
    return (letter[0], 0 if letter[1] > 0 else 1)


def alphabet(k: int) -> list[Letter]:
    """The ``2k`` letters in enumeration order: ``x0, x0^-1, x1, x1^-1, ...``."""
    return [(i, e) for i in range(k) for e in (1, -1)]


@dataclass(frozen=True)
class Word:
    """A freely reduced word; build with :meth:`of` to get reduction."""

    letters: tuple[Letter, ...] = ()

    @classmethod
    def of(cls, letters) -> "Word":
        return cls(tuple(reduce_letters(letters)))

    @classmethod
    def letter(cls, index: int, sign: int = 1) -> "Word":
        return cls(((index, sign),))

    def __len__(self) -> int:
        return len(self.letters)

    def __mul__(self, other: "Word") -> "Word":
        return Word.of(self.letters + other.letters)

    def __pow__(self, n: int) -> "Word":
        base = self if n >= 0 else self.inverse()
        return Word.of(base.letters * abs(n))

    def inverse(self) -> "Word":
        return Word(tuple((i, -e) for i, e in reversed(self.letters)))

    def is_reduced(self) -> bool:
        return all(a[0] != b[0] or a[1] != -b[1] for a, b in zip(self.letters, self.letters[1:]))

    def is_positive(self) -> bool:
        return all(e > 0 for _, e in self.letters)

    def sort_key(self) -> tuple:
        """Length-then-lexicographic key."""
        return (len(self.letters), tuple(_letter_key(x) for x in self.letters))

    def format(self, names: Sequence[str]) -> str:
        if not self.letters:
            return "1"
        return " ".join(names[i] + ("" if e > 0 else "^-1") for i, e in self.letters)


def reduce_letters(letters) -> list[Letter]:
    out: list[Letter] = []
    for i, e in letters:
        if e not in (1, -1):
            raise ValueError(f"exponent sign must be +1 or -1, got {e}")
        if out and out[-1] == (i, -e):
            out.pop()
        else:
            out.append((i, e))
    return out


def reduce(w: Word | Sequence[Letter]) -> Word:
    letters = w.letters if isinstance(w, Word) else w
    return Word.of(letters)


_TOKEN = re.compile(r"^([A-Za-z_][A-Za-z0-9_]*)(?:\^(-?\d+))?$")


def parse_word(text: str, names: Sequence[str]) -> Word:
    """Parse ``"g f^-1 g"``-style text; ``"1"`` or blank is the empty word.

    Integer powers such as ``f^3`` are expanded.
    """
    index = {name: i for i, name in enumerate(names)}
    letters: list[Letter] = []
    for tok in text.split():
        if tok == "1":
            continue
        m = _TOKEN.match(tok)
        if not m:
            raise ValueError(f"bad token {tok!r} in word {text!r}")
        name, power = m.group(1), int(m.group(2) or 1)
        if name not in index:
            raise KeyError(f"unknown generator {name!r}; known: {list(names)}")
        sign = 1 if power > 0 else -1
        letters.extend([(index[name], sign)] * abs(power))
    return Word.of(letters)


def enumerate_words(k: int, max_length: int) -> Iterator[Word]:
    """Every reduced word of length <= ``max_length`` once, length-then-lex order."""
    if k < 0 or max_length < 0:
        raise ValueError("k and max_length must be nonnegative")
    yield Word()
    letters = alphabet(k)
    level: list[tuple[Letter, ...]] = [()]
    for _ in range(max_length):
        nxt = []
        for w in level:
            for x in letters:
                if w and w[-1] == (x[0], -x[1]):
                    continue
                nxt.append(w + (x,))
        for w in nxt:
            yield Word(w)
        level = nxt


def count_reduced(k: int, n: int) -> int:
    return 1 if n == 0 else 2 * k * (2 * k - 1) ** (n - 1)


def random_word(rng: random.Random, k: int, length: int) -> Word:
    """A uniformly random (unreduced) letter string of given length, then reduced."""
    letters = alphabet(k)
    return Word.of(rng.choice(letters) for _ in range(length))


@dataclass(frozen=True)
class Assignment:
    """Generator names bound to PL maps."""

    names: tuple[str, ...]
    maps: tuple[PLMap, ...]
    _inverses: tuple[PLMap, ...] = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if len(self.names) != len(self.maps):
            raise ValueError("names and maps differ in length")
        if len(set(self.names)) != len(self.names):
            raise ValueError(f"duplicate generator names: {self.names}")
        for name, m in zip(self.names, self.maps):
            if not isinstance(m, PLMap):
                raise TypeError(f"generator {name!r} is not a PLMap")
        object.__setattr__(self, "_inverses", tuple(m.inverse() for m in self.maps))

    @classmethod
    def from_dict(cls, mapping: dict[str, PLMap]) -> "Assignment":
        return cls(tuple(mapping), tuple(mapping.values()))

    @property
    def k(self) -> int:
        return len(self.names)

    def letter_map(self, letter: Letter) -> PLMap:
        i, e = letter
        if not 0 <= i < len(self.maps):
            raise KeyError(f"generator index {i} is not bound (have {len(self.maps)})")
        return self.maps[i] if e > 0 else self._inverses[i]

    def parse(self, text: str) -> Word:
        return parse_word(text, self.names)

    def format(self, w: Word) -> str:
        return w.format(self.names)

    def to_json(self) -> dict:
        return {"generators": {n: m.to_json() for n, m in zip(self.names, self.maps)}}

    @classmethod
    def from_json(cls, data: dict) -> "Assignment":
        gens = data.get("generators") if isinstance(data, dict) else None
        if not isinstance(gens, dict):
            raise ValueError("model JSON needs a 'generators' object mapping names to PLMaps")
        return cls.from_dict({str(n): PLMap.from_json(m) for n, m in gens.items()})


def evaluate_word(w: Word, A: Assignment) -> PLMap:
    """Map of ``x1 x2 ... xn``, i.e. ``m(x1) o ... o m(xn)`` (rightmost applied first)."""
    result = PLMap.identity()
    for letter in w.letters:
        result = result.compose(A.letter_map(letter))
    return result


def commutator(u: Word, v: Word) -> Word:
    """``[u, v] = u^-1 v^-1 u v``."""
    return u.inverse() * v.inverse() * u * v


@dataclass(frozen=True)
class CommutatorReport:
    depth: int
    bound: int
    all_trivial: bool
    witness: Word | None
    level_sizes: tuple[int, ...]

    def to_json(self, names: Sequence[str]) -> dict:
        return {
            "depth": self.depth,
            "bound": self.bound,
            "allTrivial": self.all_trivial,
            "witness": None if self.witness is None else self.witness.format(names),
            "levelSizes": list(self.level_sizes),
        }


def _shortest_by_map(pairs) -> dict[PLMap, Word]:
    best: dict[PLMap, Word] = {}
    for w, m in pairs:
        old = best.get(m)
        if old is None or w.sort_key() < old.sort_key():
            best[m] = w
    return best


def commutator_probe(A: Assignment, max_length: int, depth: int) -> CommutatorReport:
    """Bounded derived-series probe.

    Level 0 holds the distinct maps of all words of length <= ``max_length``;
    level ``d`` holds the commutators of pairs from level ``d-1``.  Reports
    whether every map at level ``depth`` is the identity and, if not, the
    shortest commutator word that is not.
    """
    if depth < 1 or max_length < 1:
        raise ValueError("depth and max_length must be >= 1")
    level = _shortest_by_map((w, evaluate_word(w, A)) for w in enumerate_words(A.k, max_length))
    sizes = [len(level)]
    for _ in range(depth):
        items = sorted(((w, m) for m, w in level.items() if not m.is_identity()), key=lambda p: p[0].sort_key())
        inv = {m: m.inverse() for _, m in items}
        pairs = [(Word(), PLMap.identity())]
        for (u, mu), (v, mv) in itertools.product(items, repeat=2):
            c = inv[mu].compose(inv[mv]).compose(mu).compose(mv)
            if not c.is_identity():  # identity words are never reported
                pairs.append((commutator(u, v), c))
        level = _shortest_by_map(pairs)
        sizes.append(len(level))
    nontrivial = [w for m, w in level.items() if not m.is_identity()]
    witness = min(nontrivial, key=Word.sort_key) if nontrivial else None
    return CommutatorReport(depth, max_length, witness is None, witness, tuple(sizes))
