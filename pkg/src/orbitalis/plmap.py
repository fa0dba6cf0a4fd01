"""Exact piecewise-affine homeomorphisms of the extended real line.

Points are ``Fraction`` for finite values and the float sentinels
``NEG_INF`` / ``POS_INF`` for the two ends of the line.  Comparison between
the two kinds is exact, so ordinary ``<`` works on mixed points.

A :class:`PLMap` is stored in canonical form: strictly increasing rational
breakpoints, one ``(slope, offset)`` pair per segment, no redundant
breakpoints.  Two maps are equal iff they are the same homeomorphism.
"""

from __future__ import annotations

import csv
import io
import math
from bisect import bisect_left
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence, Union

NEG_INF = -math.inf
POS_INF = math.inf

ExtPoint = Union[Fraction, float]
Piece = tuple[Fraction, Fraction]


def ext(value) -> ExtPoint:
    """Coerce ints, strings like ``"3/4"`` / ``"-inf"`` and Fractions to an ExtPoint."""
    if isinstance(value, float):
        if value in (NEG_INF, POS_INF):
            return value
        raise ValueError(f"finite floats are not exact points: {value!r}")
    if isinstance(value, str):
        text = value.strip()
        if text in ("-inf", "-oo"):
            return NEG_INF
        if text in ("+inf", "inf", "+oo", "oo"):
            return POS_INF
        return Fraction(text)
    return Fraction(value)


def is_finite(x: ExtPoint) -> bool:
    return not (isinstance(x, float) and math.isinf(x))


def format_point(x: ExtPoint) -> str:
    """Render a point as ``"p/q"``, ``"-inf"`` or ``"+inf"``."""
    if x == NEG_INF:
        return "-inf"
    if x == POS_INF:
        return "+inf"
    return f"{x.numerator}/{x.denominator}"


def parse_rational(text: str) -> Fraction:
    if not isinstance(text, str):
        raise TypeError(f"expected a 'p/q' string, got {type(text).__name__}")
    if any(c in text for c in ".eE"):
        raise ValueError(f"rationals must be decimal-free 'p/q' strings: {text!r}")
    return Fraction(text)


@dataclass(frozen=True)
class FixedSet:
    """Fixed points of a map inside the open line.

    ``components`` are sorted, disjoint closed pieces ``(lo, hi)``; an
    isolated fixed point has ``lo == hi``.  Unbounded pieces use the
    infinite sentinels as ends.
    """

    components: tuple[tuple[ExtPoint, ExtPoint], ...]
    whole_line: bool = False

    def contains(self, x: ExtPoint) -> bool:
        return any(lo <= x <= hi for lo, hi in self.components)

    def points(self) -> list[ExtPoint]:
        return [lo for lo, hi in self.components if lo == hi]


@dataclass(frozen=True)
class SignedInterval:
    lo: ExtPoint
    hi: ExtPoint
    sign: int

    def __post_init__(self):
        if not self.lo < self.hi:
            raise ValueError(f"empty interval ({self.lo}, {self.hi})")
        if self.sign not in (1, -1):
            raise ValueError(f"sign must be +1 or -1, got {self.sign}")

    @property
    def interval(self) -> tuple[ExtPoint, ExtPoint]:
        return (self.lo, self.hi)

    def contains(self, x: ExtPoint) -> bool:
        return self.lo < x < self.hi


class NoOrbitalsError(ValueError):
    """Raised when orbitals are requested for the identity map."""


def interior_point(lo: ExtPoint, hi: ExtPoint) -> Fraction:
    """A deterministic rational strictly inside ``(lo, hi)``."""
    if not is_finite(lo) and not is_finite(hi):
        return Fraction(0)
    if not is_finite(lo):
        return hi - 1
    if not is_finite(hi):
        return lo + 1
    return (lo + hi) / 2


def _segment_samples(cuts: Sequence[Fraction]) -> list[Fraction]:
    if not cuts:
        return [Fraction(0)]
    samples = [cuts[0] - 1]
    samples.extend((a + b) / 2 for a, b in zip(cuts, cuts[1:]))
    samples.append(cuts[-1] + 1)
    return samples


@dataclass(frozen=True)
class PLMap:
    """Orientation-preserving PL homeomorphism in canonical form.

    Use :meth:`from_pieces`, :meth:`affine`, :meth:`identity` or
    :meth:`interpolate` rather than the raw constructor, which trusts its
    input.
    """

    breakpoints: tuple[Fraction, ...]
    pieces: tuple[Piece, ...]

    # -- construction -----------------------------------------------------

    @classmethod
    def identity(cls) -> "PLMap":
        return cls((), ((Fraction(1), Fraction(0)),))

    @classmethod
    def affine(cls, slope, offset=0) -> "PLMap":
        return cls.from_pieces((), [(slope, offset)])

    @classmethod
    def from_pieces(cls, breakpoints: Iterable, pieces: Iterable) -> "PLMap":
        """Validate and canonicalise breakpoint/piece data.

        Raises ``ValueError`` on non-increasing breakpoints, non-positive
        slopes or a jump at a breakpoint.
        """
        bps = tuple(Fraction(b) for b in breakpoints)
        pcs = tuple((Fraction(s), Fraction(o)) for s, o in pieces)
        if len(pcs) != len(bps) + 1:
            raise ValueError(f"{len(bps)} breakpoints need {len(bps) + 1} pieces, got {len(pcs)}")
        if any(b1 >= b2 for b1, b2 in zip(bps, bps[1:])):
            raise ValueError("breakpoints must be strictly increasing")
        for s, _ in pcs:
            if s <= 0:
                raise ValueError(f"slope must be positive, got {s}")
        for b, (s1, o1), (s2, o2) in zip(bps, pcs, pcs[1:]):
            if s1 * b + o1 != s2 * b + o2:
                raise ValueError(f"discontinuity at breakpoint {b}")
        return cls._canonical(bps, pcs)

    @classmethod
    def _canonical(cls, bps: Sequence[Fraction], pcs: Sequence[Piece]) -> "PLMap":
        out_b: list[Fraction] = []
        out_p: list[Piece] = [pcs[0]]
        for b, p in zip(bps, pcs[1:]):
            if p == out_p[-1]:
                continue
            out_b.append(b)
            out_p.append(p)
        return cls(tuple(out_b), tuple(out_p))

    @classmethod
    def interpolate(cls, points: Sequence[tuple[Fraction, Fraction]]) -> "PLMap":
        """PL map through the given increasing points, with slope-1 tails.

        No points gives the identity; one point gives a translation.
        """
        pts = sorted((Fraction(x), Fraction(y)) for x, y in points)
        if not pts:
            return cls.identity()
        for (x1, y1), (x2, y2) in zip(pts, pts[1:]):
            if not (x1 < x2 and y1 < y2):
                raise ValueError(f"points are not strictly increasing: ({x1},{y1}) -> ({x2},{y2})")
        x0, y0 = pts[0]
        pieces: list[Piece] = [(Fraction(1), y0 - x0)]
        for (x1, y1), (x2, y2) in zip(pts, pts[1:]):
            s = (y2 - y1) / (x2 - x1)
            pieces.append((s, y1 - s * x1))
        xn, yn = pts[-1]
        pieces.append((Fraction(1), yn - xn))
        return cls._canonical([x for x, _ in pts], pieces)

    # -- basic queries ----------------------------------------------------

    def is_identity(self) -> bool:
        return not self.breakpoints and self.pieces[0] == (1, 0)

    def piece_at(self, x: Fraction) -> Piece:
        return self.pieces[bisect_left(self.breakpoints, x)]

    def __call__(self, x: ExtPoint) -> ExtPoint:
        return self.evaluate(x)

    def evaluate(self, x: ExtPoint) -> ExtPoint:
        if not is_finite(x):
            return x
        s, o = self.piece_at(x)
        return s * x + o

    def preimage(self, y: ExtPoint) -> ExtPoint:
        """Solve ``m(x) = y`` exactly."""
        if not is_finite(y):
            return y
        images = [self.evaluate(b) for b in self.breakpoints]
        s, o = self.pieces[bisect_left(images, y)]
        return (y - o) / s

    # -- group operations -------------------------------------------------

    def compose(self, inner: "PLMap") -> "PLMap":
        """Return ``self o inner`` (``inner`` is applied first)."""
        if inner.is_identity():
            return self
        if self.is_identity():
            return inner
        if not self.breakpoints and not inner.breakpoints:
            (s1, o1), (s2, o2) = self.pieces[0], inner.pieces[0]
            return PLMap((), ((s1 * s2, s1 * o2 + o1),))
        cuts = sorted(set(inner.breakpoints) | {inner.preimage(b) for b in self.breakpoints})
        pieces = []
        for x in _segment_samples(cuts):
            s2, o2 = inner.piece_at(x)
            s1, o1 = self.piece_at(s2 * x + o2)
            pieces.append((s1 * s2, s1 * o2 + o1))
        return PLMap._canonical(cuts, pieces)

    def __matmul__(self, inner: "PLMap") -> "PLMap":
        return self.compose(inner)

    def inverse(self) -> "PLMap":
        bps = tuple(self.evaluate(b) for b in self.breakpoints)
        pcs = tuple((1 / s, -o / s) for s, o in self.pieces)
        return PLMap(bps, pcs)

    # -- dynamics ---------------------------------------------------------

    def fixed_set(self) -> FixedSet:
        if self.is_identity():
            return FixedSet(((NEG_INF, POS_INF),), whole_line=True)
        bounds = (NEG_INF, *self.breakpoints, POS_INF)
        found: list[tuple[ExtPoint, ExtPoint]] = []
        for (s, o), lo, hi in zip(self.pieces, bounds, bounds[1:]):
            if s == 1:
                if o == 0:
                    found.append((lo, hi))
                continue
            root = o / (1 - s)
            if lo <= root <= hi:
                found.append((root, root))
        merged: list[tuple[ExtPoint, ExtPoint]] = []
        for lo, hi in found:
            if merged and lo <= merged[-1][1]:
                merged[-1] = (merged[-1][0], max(hi, merged[-1][1]))
            else:
                merged.append((lo, hi))
        return FixedSet(tuple(merged))

    def displacement_sign(self, x: Fraction) -> int:
        d = self.evaluate(x) - x
        return (d > 0) - (d < 0)

    def signed_orbitals(self) -> list[SignedInterval]:
        """Maximal open intervals moved by the map, with the direction of motion."""
        fixed = self.fixed_set()
        if fixed.whole_line:
            raise NoOrbitalsError("no orbitals: identity map")
        gaps = []
        left: ExtPoint = NEG_INF
        for lo, hi in fixed.components:
            if left < lo:
                gaps.append((left, lo))
            left = hi
        if left < POS_INF:
            gaps.append((left, POS_INF))
        return [SignedInterval(lo, hi, self.displacement_sign(interior_point(lo, hi))) for lo, hi in gaps]

    def is_special(self) -> bool:
        """True iff no orbital is inner (every orbital reaches an end of the line)."""
        if self.is_identity():
            return True
        return all(not is_finite(o.lo) or not is_finite(o.hi) for o in self.signed_orbitals())

    # -- serialisation ----------------------------------------------------

    def to_json(self) -> dict:
        return {
            "breakpoints": [format_point(b) for b in self.breakpoints],
            "pieces": [{"slope": format_point(s), "offset": format_point(o)} for s, o in self.pieces],
        }

    @classmethod
    def from_json(cls, data: dict) -> "PLMap":
        try:
            bps = [parse_rational(b) for b in data["breakpoints"]]
            pcs = [(parse_rational(p["slope"]), parse_rational(p["offset"])) for p in data["pieces"]]
        except (KeyError, TypeError) as exc:
            raise ValueError(f"malformed PLMap JSON: {exc}") from exc
        return cls.from_pieces(bps, pcs)

    def graph_csv(self, xs: Iterable) -> str:
        """CSV text with columns ``x`` and ``m(x)`` for plotting."""
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["x", "m(x)"])
        for x in xs:
            x = Fraction(x)
            writer.writerow([format_point(x), format_point(self.evaluate(x))])
        return buf.getvalue()

    def __str__(self) -> str:
        segs = [f"{s}*x{'+' if o >= 0 else '-'}{abs(o)}" for s, o in self.pieces]
        if not self.breakpoints:
            return segs[0]
        out = [segs[0]]
        for b, seg in zip(self.breakpoints, segs[1:]):
            out += [f"|{b}|", seg]
        return " ".join(out)

def compose(m1: PLMap, m2: PLMap) -> PLMap:
    return m1.compose(m2)


def invert(m: PLMap) -> PLMap:
    return m.inverse()


def evaluate(m: PLMap, x: ExtPoint) -> ExtPoint:
    return m.evaluate(x)


def fixed_set(m: PLMap) -> FixedSet:
    return m.fixed_set()


def signed_orbitals(m: PLMap) -> list[SignedInterval]:
    return m.signed_orbitals()


def is_special(m: PLMap) -> bool:
    return m.is_special()


__all__ = [
    "NEG_INF",
    "POS_INF",
    "ExtPoint",
    "FixedSet",
    "NoOrbitalsError",
    "PLMap",
    "SignedInterval",
    "compose",
    "evaluate",
    "ext",
    "fixed_set",
    "format_point",
    "interior_point",
    "invert",
    "is_finite",
    "is_special",
    "parse_rational",
    "signed_orbitals",
]
