"""Dynamical realization of a countable left-ordered group on a finite window.

Group elements reachable by words of length <= M are placed on the rational
line so that ``g < h`` iff ``pos(g) < pos(h)`` and ``pos(1) = 0``.  Left
multiplication by a generator then becomes a partially known monotone map,
which is interpolated into a :class:`PLMap`.
"""

from __future__ import annotations

import csv
import io
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Hashable, Protocol

from .plmap import PLMap, format_point
from .wreath import GREATER, LESS, WreathElement, WreathGroup, format_element


class OrderedGroupOracle(Protocol):
    identity: Hashable
    generators: dict[str, Hashable]

    def multiply(self, g, h): ...

    def invert(self, g): ...

    def compare(self, g, h) -> int: ...

    def format(self, g) -> str: ...


class IntegerOracle:
    """The integers under addition, generated by ``t = 1``."""

    identity = 0
    generators = {"t": 1}

    def multiply(self, g: int, h: int) -> int:
        return g + h

    def invert(self, g: int) -> int:
        return -g

    def compare(self, g: int, h: int) -> int:
        return (g > h) - (g < h)

    def format(self, g: int) -> str:
        return f"t^{g}"

    def stable_sign(self, h: int, g: int) -> int:
        return (h > 0) - (h < 0) if h and (h > 0) != (g > 0) else 0


class WreathOracle:
    """The wreath group with generators ``t``, ``a``, ``b``."""

    def __init__(self, orientation: str = "condition_iii"):
        self.group = WreathGroup(orientation)
        self.identity = self.group.identity
        self.generators = {"t": self.group.t, "a": self.group.a, "b": self.group.b}

    def multiply(self, g: WreathElement, h: WreathElement) -> WreathElement:
        return self.group.multiply(g, h)

    def invert(self, g: WreathElement) -> WreathElement:
        return self.group.invert(g)

    def compare(self, g: WreathElement, h: WreathElement) -> int:
        return self.group.compare(g, h)

    def format(self, g: WreathElement) -> str:
        return format_element(g)

    def stable_sign(self, h: WreathElement, g: WreathElement) -> int | None:
        return self.group.stable_sign(h, g)


class OracleInconsistencyError(ValueError):
    def __init__(self, message: str, pair: tuple):
        super().__init__(message)
        self.pair = pair


@dataclass
class RealizationTable:
    oracle: Any
    depth: int
    elements: list = field(default_factory=list)
    words: dict = field(default_factory=dict)
    pos: dict = field(default_factory=dict)
    order: list = field(default_factory=list)
    approximants: dict[str, PLMap] = field(default_factory=dict)

    @property
    def window(self) -> tuple[Fraction, Fraction]:
        return self.pos[self.order[0]], self.pos[self.order[-1]]

    def __contains__(self, g) -> bool:
        return g in self.pos

    def __len__(self) -> int:
        return len(self.elements)

    def check_order_isomorphism(self, sample: int = 10_000, seed: int = 0) -> dict:
        """Consecutive pairs in position order, then a random sample of all pairs.

        Consecutive agreement already implies agreement on every pair, since
        both orders are transitive.
        """
        cmp = self.oracle.compare
        bad = None
        checked = 0
        for g, h in zip(self.order, self.order[1:]):
            checked += 1
            if not (self.pos[g] < self.pos[h] and cmp(g, h) == LESS):
                bad = (g, h)
                break
        n = len(self.elements)
        if bad is None and n > 1:
            rng = random.Random(seed)
            pairs = (
                [(i, j) for i in range(n) for j in range(n) if i != j]
                if n * (n - 1) <= sample
                else ((rng.randrange(n), rng.randrange(n)) for _ in range(sample))
            )
            for i, j in pairs:
                g, h = self.elements[i], self.elements[j]
                if g == h:
                    continue
                checked += 1
                if (cmp(g, h) == LESS) != (self.pos[g] < self.pos[h]):
                    bad = (g, h)
                    break
        return _check(bad is None, checked, bad and [self.oracle.format(x) for x in bad])

    def check_action_consistency(self) -> dict:
        bad = None
        checked = 0
        for name, s in self.oracle.generators.items():
            m = self.approximants[name]
            for g in self.elements:
                sg = self.oracle.multiply(s, g)
                if sg not in self.pos:
                    continue
                checked += 1
                if m(self.pos[g]) != self.pos[sg]:
                    bad = [name, self.oracle.format(g)]
                    break
        return _check(bad is None, checked, bad)

    def to_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["element", "position"])
        for g in self.order:
            writer.writerow([self.oracle.format(g), format_point(self.pos[g])])
        return buf.getvalue()


def _check(passed: bool, checked: int, counterexample) -> dict:
    return {"passed": passed, "checked": checked, "counterexample": counterexample}


def build_realization(oracle, depth: int) -> RealizationTable:
    """Breadth-first enumeration to word length ``depth`` with midpoint positions."""
    if depth < 0:
        raise ValueError("depth must be nonnegative")
    letters = []
    for name, s in oracle.generators.items():
        letters.append((name, s))
        letters.append((name + "^-1", oracle.invert(s)))
    table = RealizationTable(oracle, depth)
    one = oracle.identity
    _insert(table, one, "1")
    frontier = [one]
    for _ in range(depth):
        nxt = []
        for g in frontier:
            for name, s in letters:
                h = oracle.multiply(g, s)
                if h in table.pos:
                    continue
                word = name if g == one else f"{table.words[g]} {name}"
                _insert(table, h, word)
                nxt.append(h)
        frontier = nxt
    for name, s in oracle.generators.items():
        pairs = [(table.pos[g], table.pos[sg]) for g in table.order if (sg := oracle.multiply(s, g)) in table.pos]
        table.approximants[name] = PLMap.interpolate(pairs)
    return table


def _insert(table: RealizationTable, g, word: str) -> None:
    cmp = table.oracle.compare
    order = table.order
    lo, hi = 0, len(order)
    while lo < hi:
        mid = (lo + hi) // 2
        c = cmp(g, order[mid])
        if c == LESS:
            hi = mid
        elif c == GREATER:
            lo = mid + 1
        else:
            raise OracleInconsistencyError("distinct elements compare equal", (g, order[mid]))
    for nb, expected in ((lo - 1, GREATER), (lo, LESS)):
        if 0 <= nb < len(order) and cmp(g, order[nb]) != expected:
            raise OracleInconsistencyError("order is not total on this pair", (g, order[nb]))
    if not order:
        p = Fraction(0)
    elif lo == 0:
        p = table.pos[order[0]] - 1
    elif lo == len(order):
        p = table.pos[order[-1]] + 1
    else:
        p = (table.pos[order[lo - 1]] + table.pos[order[lo]]) / 2
    order.insert(lo, g)
    table.elements.append(g)
    table.words[g] = word
    table.pos[g] = p


# -- fixed-point brackets ------------------------------------------------


@dataclass(frozen=True)
class FixBracket:
    """Table points ``lo < F < hi`` around a fixed point, or ``found=False``."""

    element: str
    side: str
    lo: Fraction | None
    hi: Fraction | None
    exact: bool
    lo_rank: int | None = None
    motion: tuple[int, int] | None = None

    @property
    def found(self) -> bool:
        return self.lo is not None

    def to_json(self) -> dict:
        out = {"element": self.element, "side": self.side, "exact": self.exact}
        if not self.found:
            out["bracket"] = "none found at this depth"
        else:
            out["bracket"] = [format_point(self.lo), format_point(self.hi)]
            out["motion"] = list(self.motion)
        return out


def _beyond(table: RealizationTable, g, side: int, power: int):
    """Predicate "``h`` lies beyond every ``g^n`` on ``side``" and whether it is exact.

    ``g`` is positive; side +1 asks ``h > g^n`` for all ``n``, side -1 asks
    ``h < g^-n`` for all ``n``.  Without an exact ``stable_sign`` on the oracle
    the test is cut off at ``power``.
    """
    oracle = table.oracle
    step = g if side > 0 else oracle.invert(g)
    exact_fn = getattr(oracle, "stable_sign", None)
    if exact_fn is not None and exact_fn(oracle.identity, step) is not None:
        return (lambda h: exact_fn(h, step) == side), True
    gp = oracle.identity
    for _ in range(power):
        gp = oracle.multiply(gp, step)
    return (lambda h: oracle.compare(h, gp) == side), False


def _motion(table: RealizationTable, g, h) -> int:
    # sign of g(x) - x at x = pos(h)
    oracle = table.oracle
    c = oracle.compare(oracle.multiply(g, h), h)
    return 1 if c == GREATER else -1 if c == LESS else 0


def estimate_F(table: RealizationTable, g, power: int = 64) -> tuple[FixBracket, FixBracket]:
    """Brackets for the nearest fixed points of ``g`` on either side of 0.

    In a dynamical realization the fixed point of a positive ``g`` just right
    of 0 is ``lim g^n(0)``, so it separates the table points ``h(0)`` with
    ``h < g^n`` for some ``n`` from those above every power.  That cut is
    located by binary search; the left side is the cut below every ``g^-n``.
    """
    oracle = table.oracle
    if g == oracle.identity:
        raise ValueError("the identity has no orbital")
    gpos = g if oracle.compare(g, oracle.identity) == GREATER else oracle.invert(g)
    above, exact = _beyond(table, gpos, 1, power)
    below, exact_below = _beyond(table, gpos, -1, power)
    order = table.order
    name = oracle.format(g)

    lo, hi = 0, len(order)  # first index with above(h)
    while lo < hi:
        mid = (lo + hi) // 2
        if above(order[mid]):
            hi = mid
        else:
            lo = mid + 1
    if lo == len(order):
        plus = FixBracket(name, "plus", None, None, exact)
    else:
        x, y = order[lo - 1], order[lo]
        motion = (_motion(table, g, x), _motion(table, g, y))
        plus = FixBracket(name, "plus", table.pos[x], table.pos[y], exact, lo - 1, motion)

    lo, hi = 0, len(order)  # first index with not below(h)
    while lo < hi:
        mid = (lo + hi) // 2
        if below(order[mid]):
            lo = mid + 1
        else:
            hi = mid
    if lo == 0:
        minus = FixBracket(name, "minus", None, None, exact_below)
    else:
        x, y = order[lo - 1], order[lo]
        motion = (_motion(table, g, x), _motion(table, g, y))
        minus = FixBracket(name, "minus", table.pos[x], table.pos[y], exact_below, lo - 1, motion)
    return plus, minus


# -- the strict tower of conjugates --------------------------------------


def _t_versus_fixed_point(table: RealizationTable, t, a) -> str:
    """Where ``t`` sends ``p = F_+(a)``: certified by table points on each side of ``p``."""
    oracle = table.oracle
    above, _ = _beyond(table, a, 1, 64)
    plus, _ = estimate_F(table, a)
    if not plus.found:
        return "undetermined"
    below_p = table.order[plus.lo_rank]
    above_p = table.order[plus.lo_rank + 1]
    if above(oracle.multiply(t, below_p)):
        return "greater"  # some x < p has t(x) > p
    if not above(oracle.multiply(t, above_p)):
        return "less"
    return "undetermined"


def verify_strict_tower(table: RealizationTable, K: int, t_name: str = "t", a_name: str = "a") -> dict:
    """Brackets for the orbitals of ``t^-k a t^k``, ``|k| <= K``, and their nesting.

    Nesting is certified when the brackets of consecutive ``k`` sit in
    different table gaps and move in one direction.  ``k0`` is the largest
    radius on which everything was certified.
    """
    oracle = table.oracle
    t, a = oracle.generators[t_name], oracle.generators[a_name]
    levels = []
    for k in range(-K, K + 1):
        tk = oracle.identity
        for _ in range(abs(k)):
            tk = oracle.multiply(tk, t if k > 0 else oracle.invert(t))
        c = oracle.multiply(oracle.multiply(oracle.invert(tk), a), tk)
        plus, minus = estimate_F(table, c)
        levels.append({"k": k, "element": c, "plus": plus, "minus": minus})

    def resolved(lv) -> bool:
        return lv["plus"].found and lv["minus"].found

    def nested(inner, outer) -> bool:
        # inner orbital strictly inside outer, with distinct ends at table resolution
        return inner["plus"].lo_rank < outer["plus"].lo_rank and inner["minus"].lo_rank > outer["minus"].lo_rank

    by_k = {lv["k"]: lv for lv in levels}
    k0 = -1
    direction = None
    for r in range(K + 1):
        ring = [by_k[-r], by_k[r]]
        if not all(resolved(lv) for lv in ring):
            break
        ok = True
        for k in ((-r, r) if r else ()):
            step = 1 if k > 0 else -1
            lv, prev = by_k[k], by_k[k - step]
            d = "decreasing" if nested(lv, prev) else "increasing" if nested(prev, lv) else None
            # as k grows the orbitals all shrink or all grow
            local = d if k > 0 else {"decreasing": "increasing", "increasing": "decreasing"}.get(d)
            if d is None or (direction is not None and local != direction):
                ok = False
            direction = direction or local
        if not ok:
            break
        k0 = r

    ordered = sorted((lv for lv in levels if resolved(lv)), key=lambda lv: -lv["plus"].lo_rank)
    tower = [
        {
            "k": lv["k"],
            "signature": f"{t_name}^{-lv['k']} {a_name} {t_name}^{lv['k']}",
            "element": oracle.format(lv["element"]),
            "lo": format_point(lv["minus"].hi),
            "hi": format_point(lv["plus"].lo),
            "loBracket": lv["minus"].to_json()["bracket"],
            "hiBracket": lv["plus"].to_json()["bracket"],
            "exact": lv["plus"].exact and lv["minus"].exact,
        }
        for lv in reversed(ordered)
    ]
    lo_w, hi_w = table.window
    verified = k0 == K
    return {
        "bound": table.depth,
        "strict": True,
        "height": len(tower) if verified else max(0, 2 * k0 + 1),
        "tower": tower,
        "verified": verified,
        "status": "verified" if verified else f"inconclusive beyond k0={k0}",
        "k0": k0,
        "direction": direction,
        "tOfP": _t_versus_fixed_point(table, t, a),
        "resolution": {
            "M": table.depth,
            "K": K,
            "window": [format_point(lo_w), format_point(hi_w)],
            "tableSize": len(table),
        },
    }


def conjugate_chain_holds(report: dict) -> bool:
    """Whether the plus ends shrink towards 0 as ``k`` grows past 0."""
    return report["direction"] == "decreasing"
