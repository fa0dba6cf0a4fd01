"""The group ``Z[1/2] wr (Z wr Z)`` in normal form, with its left order.

An element ``(m, d, w)`` stands for ``t^m * Delta(d) * omega(w)`` where
``d`` is a finitely supported integer vector (the lamplighter part generated
by conjugates of ``a``) and ``w`` a finitely supported dyadic vector (the
part generated by conjugates of ``b``).  ``t`` shifts coordinates, every
conjugate of ``a`` doubles every coordinate of ``w``.

The direction of the shift is configurable.  ``"paper_literal"`` has
``t . e_i = e_{i+1}``; ``"condition_iii"`` (the default) has
``t . e_i = e_{i-1}``, which is the choice under which
``t^m a t^-m < t^n a t^-n`` for ``m < n``.
"""

from __future__ import annotations

import random
import re
from dataclasses import dataclass
from fractions import Fraction
from functools import total_ordering
from typing import Callable, Iterable

LESS, EQUAL, GREATER = -1, 0, 1

ORIENTATIONS = {"paper_literal": 1, "condition_iii": -1}


@total_ordering
@dataclass(frozen=True)
class Dyadic:
    """``numerator / 2**exponent`` with odd numerator unless exponent is 0."""

    numerator: int
    exponent: int = 0

    def __post_init__(self):
        if self.exponent < 0:
            raise ValueError("exponent must be nonnegative")
        if self.exponent and self.numerator % 2 == 0:
            raise ValueError(f"non-canonical dyadic {self.numerator}/2^{self.exponent}")

    @classmethod
    def make(cls, numerator: int, exponent: int = 0) -> "Dyadic":
        """Canonicalise ``numerator / 2**exponent``; negative exponents are allowed."""
        if exponent < 0:
            return cls(numerator << -exponent, 0)
        if numerator == 0:
            return cls(0, 0)
        while exponent and numerator % 2 == 0:
            numerator //= 2
            exponent -= 1
        return cls(numerator, exponent)

    @classmethod
    def from_fraction(cls, q) -> "Dyadic":
        q = Fraction(q)
        e = q.denominator.bit_length() - 1
        if q.denominator != 1 << e:
            raise ValueError(f"{q} is not dyadic")
        return cls(q.numerator, e)

    @classmethod
    def parse(cls, text: str) -> "Dyadic":
        m = re.fullmatch(r"\s*(-?\d+)\s*(?:/\s*2\^(\d+)\s*)?", text)
        if m:
            return cls.make(int(m.group(1)), int(m.group(2) or 0))
        return cls.from_fraction(Fraction(text))

    def to_fraction(self) -> Fraction:
        return Fraction(self.numerator, 1 << self.exponent)

    def __add__(self, other: "Dyadic") -> "Dyadic":
        e = max(self.exponent, other.exponent)
        n = (self.numerator << (e - self.exponent)) + (other.numerator << (e - other.exponent))
        return Dyadic.make(n, e)

    def __neg__(self) -> "Dyadic":
        return Dyadic(-self.numerator, self.exponent)

    def __sub__(self, other: "Dyadic") -> "Dyadic":
        return self + (-other)

    def scale2(self, k: int) -> "Dyadic":
        """Multiply by ``2**k``."""
        return Dyadic.make(self.numerator, self.exponent - k)

    def __mul__(self, n: int) -> "Dyadic":
        return Dyadic.make(self.numerator * n, self.exponent)

    def __lt__(self, other: "Dyadic") -> bool:
        e = max(self.exponent, other.exponent)
        return (self.numerator << (e - self.exponent)) < (other.numerator << (e - other.exponent))

    def __bool__(self) -> bool:
        return self.numerator != 0

    def sign(self) -> int:
        return (self.numerator > 0) - (self.numerator < 0)

    def __str__(self) -> str:
        return str(self.numerator) if self.exponent == 0 else f"{self.numerator}/2^{self.exponent}"


def _sign(x) -> int:
    return x.sign() if isinstance(x, Dyadic) else (x > 0) - (x < 0)


@dataclass(frozen=True)
class Vec:
    """Finitely supported vector ``index -> nonzero scalar``, sorted by index."""

    items: tuple = ()

    @classmethod
    def of(cls, entries: dict | Iterable) -> "Vec":
        pairs = entries.items() if isinstance(entries, dict) else entries
        acc: dict = {}
        for i, v in pairs:
            acc[i] = acc[i] + v if i in acc else v
        return cls(tuple(sorted((i, v) for i, v in acc.items() if v)))

    @classmethod
    def unit(cls, index: int, value=1) -> "Vec":
        return cls(((index, value),))

    def __bool__(self) -> bool:
        return bool(self.items)

    def as_dict(self) -> dict:
        return dict(self.items)

    def get(self, index: int, default=0):
        return self.as_dict().get(index, default)

    def __add__(self, other: "Vec") -> "Vec":
        if not other.items:
            return self
        if not self.items:
            return other
        return Vec.of(self.items + other.items)

    def __neg__(self) -> "Vec":
        return Vec(tuple((i, -v) for i, v in self.items))

    def __sub__(self, other: "Vec") -> "Vec":
        return self + (-other)

    def shift(self, k: int) -> "Vec":
        """Move the entry at index ``i`` to index ``i + k``."""
        if not k:
            return self
        return Vec(tuple((i + k, v) for i, v in self.items))

    def map(self, fn: Callable) -> "Vec":
        return Vec.of((i, fn(v)) for i, v in self.items)

    def total(self):
        return sum(v for _, v in self.items)

    def lowest(self):
        return self.items[0] if self.items else None

    def sign(self) -> int:
        """Sign under the order "compare at the lowest index where vectors differ"."""
        return _sign(self.items[0][1]) if self.items else 0

    def support(self) -> tuple[int, ...]:
        return tuple(i for i, _ in self.items)


def vec_compare(x: Vec, y: Vec) -> int:
    """``LESS`` iff ``min{k: x_k < y_k} < min{k: y_k < x_k}``."""
    a, b = x.items, y.items
    i = j = 0
    while i < len(a) or j < len(b):
        # walk both supports in index order to the first disagreement
        ka = a[i][0] if i < len(a) else None
        kb = b[j][0] if j < len(b) else None
        if kb is None or (ka is not None and ka < kb):
            return LESS if _sign(a[i][1]) < 0 else GREATER
        if ka is None or kb < ka:
            return LESS if _sign(b[j][1]) > 0 else GREATER
        if a[i][1] != b[j][1]:
            return LESS if a[i][1] < b[j][1] else GREATER
        i += 1
        j += 1
    return EQUAL


@dataclass(frozen=True)
class WreathElement:
    m: int = 0
    d: Vec = Vec()
    w: Vec = Vec()

    def is_identity(self) -> bool:
        return self.m == 0 and not self.d and not self.w

    def in_C(self) -> bool:
        """In the cyclic subgroup generated by ``t``."""
        return not self.d and not self.w

    def in_G(self) -> bool:
        """In the subgroup generated by ``t`` and ``a``."""
        return not self.w

    def sign(self) -> int:
        """+1 for elements above the identity in the left order."""
        if self.w:
            return self.w.sign()
        if self.d:
            return self.d.sign()
        return _sign(self.m)

    def __str__(self) -> str:
        return format_element(self)

    def to_json(self) -> dict:
        return {
            "m": self.m,
            "d": {str(i): v for i, v in self.d.items},
            "w": {str(i): str(v) for i, v in self.w.items},
        }

    @classmethod
    def from_json(cls, data: dict) -> "WreathElement":
        return cls(
            int(data.get("m", 0)),
            Vec.of((int(i), int(v)) for i, v in data.get("d", {}).items()),
            Vec.of((int(i), Dyadic.parse(str(v))) for i, v in data.get("w", {}).items()),
        )


IDENTITY = WreathElement()
T = WreathElement(1)
A = WreathElement(0, Vec.unit(0, 1))
B = WreathElement(0, Vec(), Vec.unit(0, Dyadic(1)))


def format_element(g: WreathElement) -> str:
    d = ",".join(f"{i}:{v}" for i, v in g.d.items)
    w = ",".join(f"{i}:{v}" for i, v in g.w.items)
    return f"t^{g.m} * d[{{{d}}}] * w[{{{w}}}]"


_ELEMENT = re.compile(r"^\s*t\^(-?\d+)\s*\*\s*d\[\{(.*?)\}\]\s*\*\s*w\[\{(.*?)\}\]\s*$")


def parse_element(text: str) -> WreathElement:
    m = _ELEMENT.match(text)
    if not m:
        raise ValueError(f"cannot parse element {text!r}")

    def entries(body: str, conv):
        out = []
        for part in filter(None, (p.strip() for p in body.split(","))):
            i, v = part.split(":", 1)
            out.append((int(i), conv(v.strip())))
        return out

    return WreathElement(int(m.group(1)), Vec.of(entries(m.group(2), int)), Vec.of(entries(m.group(3), Dyadic.parse)))


class WreathGroup:
    """Arithmetic and the left order for a fixed shift orientation."""

    def __init__(self, orientation: str = "condition_iii"):
        if orientation not in ORIENTATIONS:
            raise ValueError(f"orientation must be one of {sorted(ORIENTATIONS)}")
        self.orientation = orientation
        self.sigma = ORIENTATIONS[orientation]
        self._cache: dict = {}

    identity = IDENTITY
    t, a, b = T, A, B

    def shift(self, v: Vec, power: int) -> Vec:
        """Action of ``t**power`` on coordinates."""
        return v.shift(self.sigma * power)

    def act(self, g: WreathElement, x: Vec) -> Vec:
        """Action of ``g`` in ``<t, a>`` on the dyadic vector ``x``: ``2^{sum d} shift^m x``."""
        if g.w:
            raise ValueError("only elements of <t, a> act on the dyadic part")
        k = g.d.total()
        return self.shift(x, g.m).map(lambda v: v.scale2(k))

    def multiply(self, g1: WreathElement, g2: WreathElement) -> WreathElement:
        m1, d1, w1 = g1.m, g1.d, g1.w
        m2, d2, w2 = g2.m, g2.d, g2.w
        d = self.shift(d1, -m2) + d2
        if w1:
            k = -d2.total()
            w = self.shift(w1, -m2).map(lambda v: v.scale2(k)) + w2
        else:
            w = w2
        return WreathElement(m1 + m2, d, w)

    def invert(self, g: WreathElement) -> WreathElement:
        k = g.d.total()
        w = self.shift(g.w, g.m).map(lambda v: -v.scale2(k))
        return WreathElement(-g.m, -self.shift(g.d, g.m), w)

    def power(self, g: WreathElement, n: int) -> WreathElement:
        base = g if n >= 0 else self.invert(g)
        out, sq, n = IDENTITY, base, abs(n)
        while n:
            if n & 1:
                out = self.multiply(out, sq)
            sq = self.multiply(sq, sq)
            n >>= 1
        return out

    def product(self, *gs: WreathElement) -> WreathElement:
        out = IDENTITY
        for g in gs:
            out = self.multiply(out, g)
        return out

    def cone_compare(self, g1: WreathElement, g2: WreathElement) -> int:
        """Left order by definition: ``g1 < g2`` iff ``g1^-1 g2`` is positive.

        Positivity looks at the dyadic part, then the lamplighter part, then
        the ``t`` exponent; each vector part uses :func:`vec_compare` against 0.
        """
        if g1 == g2:
            return EQUAL
        return LESS if self.multiply(self.invert(g1), g2).sign() > 0 else GREATER

    def left_coordinates(self, g: WreathElement) -> tuple[Vec, Vec, int]:
        """``(2^{sum d} shift^m w, shift^m d, m)``, the coordinates of ``g`` seen from the left.

        Each part of ``g1^-1 g2`` is a positive rescaling and shift of the
        difference of these coordinates, so the left order is lexicographic in them.
        """
        k = g.d.total()
        return self.shift(g.w, g.m).map(lambda v: v.scale2(k)), self.shift(g.d, g.m), g.m

    def compare(self, g1: WreathElement, g2: WreathElement) -> int:
        """Left order; agrees with :meth:`cone_compare` but avoids the group product."""
        if g1 == g2:
            return EQUAL
        c1, c2 = self._coords(g1), self._coords(g2)
        return vec_compare(c1[0], c2[0]) or vec_compare(c1[1], c2[1]) or (LESS if c1[2] < c2[2] else GREATER)

    def _coords(self, g: WreathElement):
        try:
            return self._cache[g]
        except KeyError:
            if len(self._cache) > 1 << 20:
                self._cache.clear()
            c = self._cache[g] = self.left_coordinates(g)
            return c

    def conjugate_family(self, ks: Iterable[int]) -> list[WreathElement]:
        """``t^-k a t^k`` for each ``k``."""
        out = []
        for k in ks:
            tk = self.power(T, k)
            out.append(self.product(self.invert(tk), A, tk))
        return out

    def stable_sign(self, h: WreathElement, g: WreathElement) -> int | None:
        """Sign of ``g^-n h`` when it is the same for every ``n >= 0``, else 0.

        Decided exactly for ``g`` in ``<t>`` or in the lamplighter base, where
        only one coordinate of ``g^-n h`` moves with ``n``; ``None`` otherwise.
        """
        if g.is_identity():
            raise ValueError("stable_sign() needs a nontrivial g")
        if g.w or (g.m and g.d):
            return None
        if h.w:
            return h.w.sign()
        gs = g.sign()
        if g.in_C():
            if h.d:
                return h.d.sign()
            first = _sign(h.m)  # g^-n h = t^(m - n c)
            return first if first == -gs else 0
        # g^-n h = (m, d - n * shift^-m(d_g), 0)
        j = self.shift(g.d, -h.m).lowest()[0]
        if h.d:
            i, coeff = h.d.lowest()
            first = _sign(coeff)
            if i < j:
                return first
        else:
            first = _sign(h.m)
        return first if first == -gs else 0

    def dominates(self, h: WreathElement, g: WreathElement) -> bool | None:
        """Exact test of ``h > g^n`` for every ``n >= 0``; ``None`` when undecided."""
        s = self.stable_sign(h, g)
        return None if s is None else s > 0

    # -- sampling and condition checks ----------------------------------

    def random_element(self, rng: random.Random, bound: int = 5, max_support: int = 3) -> WreathElement:
        def vec(scalar):
            idx = rng.sample(range(-bound, bound + 1), rng.randint(0, max_support))
            return Vec.of((i, scalar()) for i in idx)

        def nonzero_int():
            return rng.choice([v for v in range(-bound, bound + 1) if v])

        return WreathElement(
            rng.randint(-bound, bound),
            vec(nonzero_int),
            vec(lambda: Dyadic.make(nonzero_int(), rng.randint(0, 3))),
        )

    def check_conditions(self, sample_size: int = 1000, bound: int = 5, seed: int = 0) -> dict:
        """Exact checks of (ii) and (iii) on ``|k| <= bound``; sampled checks of (iv), (v)."""
        rng = random.Random(seed)
        lt = lambda x, y: self.compare(x, y) == LESS  # noqa: E731
        inv = self.invert
        report: dict = {}

        chain = [inv(B), inv(A), inv(T), IDENTITY, T, A, B]
        bad = next(((str(x), str(y)) for x, y in zip(chain, chain[1:]) if not lt(x, y)), None)
        report["ii"] = _result(bad is None, len(chain) - 1, bad)

        ks = range(-bound, bound + 1)
        conj = {k: self.product(self.power(T, k), A, self.power(T, -k)) for k in ks}
        bad = next(((m, n) for m in ks for n in ks if m < n and not lt(conj[m], conj[n])), None)
        report["iii"] = _result(bad is None, sum(1 for m in ks for n in ks if m < n), bad)

        for name, member in (("iv", WreathElement.in_C), ("v", WreathElement.in_G)):
            bad = None
            for _ in range(sample_size):
                g = self._sample_member(rng, bound, name)
                f = self.random_element(rng, bound)
                while member(f):
                    f = self.random_element(rng, bound)
                if f.sign() < 0:
                    f = inv(f)
                if g.sign() < 0:
                    g = inv(g)
                ok = g.is_identity() or (lt(inv(f), inv(g)) and lt(inv(g), IDENTITY) and lt(IDENTITY, g) and lt(g, f))
                if not ok and bad is None:
                    bad = (str(g), str(f))
            report[name] = _result(bad is None, sample_size, bad)
        return report

    def _sample_member(self, rng: random.Random, bound: int, condition: str) -> WreathElement:
        if condition == "iv":
            return WreathElement(rng.randint(-100, 100))
        g = self.random_element(rng, bound)
        return WreathElement(g.m, g.d)


def _result(passed: bool, checked: int, counterexample) -> dict:
    return {"passed": passed, "checked": checked, "counterexample": None if counterexample is None else list(counterexample)}


def multiply(g1: WreathElement, g2: WreathElement, orientation: str = "condition_iii") -> WreathElement:
    return WreathGroup(orientation).multiply(g1, g2)


def invert(g: WreathElement, orientation: str = "condition_iii") -> WreathElement:
    return WreathGroup(orientation).invert(g)


def compare(g1: WreathElement, g2: WreathElement, orientation: str = "condition_iii") -> int:
    return WreathGroup(orientation).compare(g1, g2)
