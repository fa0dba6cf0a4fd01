"""Built-in generator assignments and custom model loading."""

from __future__ import annotations

import json
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path

from .plmap import PLMap
from .words import Assignment, Word, alphabet


def bs12() -> Assignment:
    """``f(x) = 2x`` and ``g(x) = x + 1``; they generate a copy of BS(1,2)."""
    return Assignment(("f", "g"), (PLMap.affine(2, 0), PLMap.affine(1, 1)))


def translations(*steps) -> Assignment:
    names = tuple(f"s{i}" for i in range(len(steps)))
    return Assignment(names, tuple(PLMap.affine(1, Fraction(s)) for s in steps))


def bump(lo, hi, peak_shift) -> PLMap:
    """PL map supported on ``[lo, hi]`` whose only orbital is ``(lo, hi)``.

    The midpoint is pushed right by ``peak_shift`` (left if negative).
    """
    lo, hi, shift = Fraction(lo), Fraction(hi), Fraction(peak_shift)
    mid = (lo + hi) / 2
    if not lo < mid + shift < hi:
        raise ValueError("peak shift leaves the interval")
    # the slope-1 tails of interpolate() are the identity outside [lo, hi]
    return PLMap.interpolate([(lo, lo), (mid, mid + shift), (hi, hi)])


def load_model(path: str | Path) -> Assignment:
    with open(path, encoding="utf-8") as fh:
        data = json.load(fh)
    return Assignment.from_json(data)


@dataclass(frozen=True)
class AffineLawReport:
    """Outcome of :func:`bs12_fixed_point_law`."""

    max_length: int
    words: int
    with_fixed_point: int
    fixed_point_free: int
    trivial: int
    counterexample: str | None

    @property
    def passed(self) -> bool:
        return self.counterexample is None

    def to_json(self) -> dict:
        return {
            "maxLength": self.max_length,
            "words": self.words,
            "oneFixedPoint": self.with_fixed_point,
            "noFixedPoint": self.fixed_point_free,
            "identity": self.trivial,
            "passed": self.passed,
            "counterexample": self.counterexample,
        }


def _law_subtree(max_length: int, first) -> tuple[int, int, int, int, str | None]:
    A = bs12()
    letters = alphabet(2)
    maps = {x: A.letter_map(x) for x in letters}
    counts = [0, 0, 0, 0]  # words, one fixed point, none, identity
    stack = [((first,), maps[first], first[1] if first[0] == 0 else 0)]
    while stack:
        w, m, p = stack.pop()
        counts[0] += 1
        bad = None
        if m.breakpoints or m.pieces[0][0] != Fraction(2) ** p:
            bad = "not affine with slope 2^p"
        else:
            fixed = m.fixed_set()
            if fixed.whole_line:
                counts[3] += 1
                bad = None if p == 0 else "identity with p != 0"
            elif p != 0:
                q = m.pieces[0][1]
                counts[1] += 1
                if fixed.components != ((q / (1 - Fraction(2) ** p),) * 2,):
                    bad = "expected exactly one fixed point"
            else:
                counts[2] += 1
                if fixed.components:
                    bad = "translation with a fixed point"
        if bad:
            return (*counts, f"{Word(w).format(A.names)}: {bad}")
        if len(w) < max_length:
            for x in letters:
                if x[0] == w[-1][0] and x[1] == -w[-1][1]:
                    continue
                stack.append((w + (x,), m.compose(maps[x]), p + (x[1] if x[0] == 0 else 0)))
    return (*counts, None)


def bs12_fixed_point_law(max_length: int, workers: int = 1) -> AffineLawReport:
    """Check every reduced word of length 1..``max_length`` over ``f, g``.

    Each word must evaluate to ``x -> 2^p x + q`` where ``p`` is the exponent
    sum of ``f``, with exactly one fixed point when ``p != 0`` and none when
    ``p = 0`` (unless the map is the identity).
    """
    firsts = alphabet(2) if max_length >= 1 else []
    if workers > 1 and firsts:
        with ProcessPoolExecutor(max_workers=workers) as ex:
            parts = list(ex.map(_law_subtree, [max_length] * len(firsts), firsts))
    else:
        parts = [_law_subtree(max_length, x) for x in firsts]
    totals = [sum(part[i] for part in parts) for i in range(4)]
    bad = next((part[4] for part in parts if part[4]), None)
    return AffineLawReport(max_length, *totals, bad)
