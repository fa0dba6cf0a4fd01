"""Orbital pools, towers, crossed pairs and quasi-orbital evidence.

Everything here works on the orbitals of the finitely many words of length
at most ``L``; every height reported is a lower bound at that word length.
"""

from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from itertools import product
from typing import Iterable, Sequence

from .plmap import (
    NEG_INF,
    ExtPoint,
    PLMap,
    _segment_samples,
    format_point,
    is_finite,
)
from .words import Assignment, Word, alphabet, enumerate_words, evaluate_word

LESS, EQUAL, GREATER = -1, 0, 1

Interval = tuple[ExtPoint, ExtPoint]


@dataclass(frozen=True)
class SignedOrbital:
    lo: ExtPoint
    hi: ExtPoint
    signature: Word

    @property
    def interval(self) -> Interval:
        return (self.lo, self.hi)

    def to_json(self, names: Sequence[str]) -> dict:
        return {"lo": format_point(self.lo), "hi": format_point(self.hi), "signature": self.signature.format(names)}


class InvalidOrbitalError(ValueError):
    def __init__(self, orbital: SignedOrbital, reason: str):
        super().__init__(f"({format_point(orbital.lo)}, {format_point(orbital.hi)}) is not an orbital of its signature: {reason}")
        self.orbital = orbital


def shares_end(A: Interval, B: Interval) -> bool:
    return A[0] == B[0] or A[1] == B[1]


def contains(outer: Interval, inner: Interval) -> bool:
    return outer[0] <= inner[0] and inner[1] <= outer[1]


def signature_less(f: PLMap, g: PLMap) -> int:
    """Germ order at the leftmost point where ``f`` and ``g`` stop agreeing.

    Returns ``LESS``, ``EQUAL`` or ``GREATER``.  If the maps disagree near
    ``-inf`` the comparison is of their values as ``x -> -inf``.
    """
    if f == g:
        return EQUAL
    cuts = sorted(set(f.breakpoints) | set(g.breakpoints))
    for left, x in zip((NEG_INF, *cuts), _segment_samples(cuts)):
        (sf, of), (sg, og) = f.piece_at(x), g.piece_at(x)
        if (sf, of) == (sg, og):
            continue
        if left == NEG_INF:
            if sf != sg:
                return LESS if sf > sg else GREATER
            return LESS if of < og else GREATER
        # equal values at `left` by continuity; the right-hand germ is the slope
        return LESS if sf < sg else GREATER
    raise AssertionError("distinct canonical maps must disagree somewhere")


def validate_orbital(o: SignedOrbital, A: Assignment) -> None:
    m = evaluate_word(o.signature, A)
    if m.is_identity():
        raise InvalidOrbitalError(o, "signature evaluates to the identity")
    if not any(s.interval == o.interval for s in m.signed_orbitals()):
        raise InvalidOrbitalError(o, f"orbitals of {A.format(o.signature)} are {[s.interval for s in m.signed_orbitals()]}")


def is_tower(S: Iterable[SignedOrbital], strict: bool = False, A: Assignment | None = None) -> bool:
    """Chain, one-signature-per-interval and (if ``strict``) no shared ends.

    With an assignment, each element is first checked to be a genuine
    signed orbital; an invalid one raises :class:`InvalidOrbitalError`.
    """
    S = list(S)
    if A is not None:
        for o in S:
            validate_orbital(o, A)
    by_interval: dict[Interval, Word] = {}
    for o in S:
        if by_interval.setdefault(o.interval, o.signature) != o.signature:
            return False
    intervals = list(by_interval)
    for I, J in product(intervals, repeat=2):
        if I == J:
            continue
        if not (contains(I, J) or contains(J, I)):
            return False
        if strict and shares_end(I, J):
            return False
    return True


# -- orbital pool ----------------------------------------------------------


def _word_key(w: tuple) -> tuple:
    return (len(w), tuple((i, 0 if e > 0 else 1) for i, e in w))


def _subtree_maps(A: Assignment, max_length: int, first) -> dict[PLMap, tuple]:
    """Distinct maps of the reduced words starting with ``first`` -> shortest word."""
    letters = alphabet(A.k)
    letter_maps = {x: A.letter_map(x) for x in letters}
    best: dict[PLMap, tuple] = {}
    stack = [((first,), letter_maps[first])]
    while stack:
        w, m = stack.pop()
        old = best.get(m)
        if old is None or _word_key(w) < _word_key(old):
            best[m] = w
        if len(w) < max_length:
            last = w[-1]
            for x in letters:
                if x[0] == last[0] and x[1] == -last[1]:
                    continue
                stack.append((w + (x,), m.compose(letter_maps[x])))
    return best


def distinct_maps(A: Assignment, max_length: int, workers: int = 1) -> dict[PLMap, Word]:
    """Each distinct map of a reduced word of length <= ``max_length``, with its shortest word.

    Work is split by first letter; the merge is order-independent, so the
    result does not depend on ``workers``.
    """
    best: dict[PLMap, tuple] = {PLMap.identity(): ()}
    if max_length >= 1 and A.k:
        firsts = alphabet(A.k)
        if workers > 1:
            with ProcessPoolExecutor(max_workers=workers) as ex:
                parts = list(ex.map(_subtree_maps, [A] * len(firsts), [max_length] * len(firsts), firsts))
        else:
            parts = [_subtree_maps(A, max_length, x) for x in firsts]
        for part in parts:
            for m, w in part.items():
                old = best.get(m)
                if old is None or _word_key(w) < _word_key(old):
                    best[m] = w
    return {m: Word(w) for m, w in best.items()}


@dataclass(frozen=True)
class OrbitalPool:
    bound: int
    orbitals: tuple[SignedOrbital, ...]  # sorted by (lo asc, hi desc)
    maps: dict  # signature Word -> PLMap

    def intervals(self) -> list[Interval]:
        return [o.interval for o in self.orbitals]


def build_pool(A: Assignment, max_length: int, workers: int = 1) -> OrbitalPool:
    """Deduplicated signed orbitals of all words of length <= ``max_length``.

    Each interval keeps one signature: the shortest word producing it, then
    the ``signature_less``-smallest map, then the lexicographically first word.
    """
    chosen: dict[Interval, tuple[Word, PLMap]] = {}
    for m, w in distinct_maps(A, max_length, workers).items():
        if m.is_identity():
            continue
        for s in m.signed_orbitals():
            old = chosen.get(s.interval)
            if old is None or _better_signature(w, m, *old):
                chosen[s.interval] = (w, m)
    order = sorted(chosen, key=lambda I: (I[0], -I[1]))
    orbitals = tuple(SignedOrbital(I[0], I[1], chosen[I][0]) for I in order)
    return OrbitalPool(max_length, orbitals, {w: m for w, m in chosen.values()})


def _better_signature(w: Word, m: PLMap, w0: Word, m0: PLMap) -> bool:
    if len(w) != len(w0):
        return len(w) < len(w0)
    c = signature_less(m, m0)
    if c != EQUAL:
        return c == LESS
    return w.sort_key() < w0.sort_key()


# -- longest chains --------------------------------------------------------


class _MaxFenwick:
    def __init__(self, n: int):
        self.tree = [0] * (n + 1)

    def update(self, i: int, value: int) -> None:
        i += 1
        while i < len(self.tree):
            if self.tree[i] < value:
                self.tree[i] = value
            i += i & -i

    def prefix_max(self, i: int) -> int:
        """Max over positions ``0..i-1``."""
        best = 0
        while i > 0:
            best = max(best, self.tree[i])
            i -= i & -i
        return best


def longest_chain(intervals: Sequence[Interval], strict: bool = False) -> list[int]:
    """Indices of a longest nested chain, outermost first.

    ``intervals`` must be distinct and sorted by ``(lo asc, hi desc)``.  In
    strict mode consecutive members may not share either end.  Among longest
    chains the one that is lexicographically first in the input order wins.
    """
    n = len(intervals)
    if n == 0:
        return []
    his = sorted({hi for _, hi in intervals})
    rank = {h: r for r, h in enumerate(his)}
    fw = _MaxFenwick(len(his))
    depth = [0] * n
    i = n - 1
    while i >= 0:
        j = i
        while strict and j > 0 and intervals[j - 1][0] == intervals[i][0]:
            j -= 1
        group = range(j, i + 1) if strict else range(i, i + 1)
        for g in group:
            r = rank[intervals[g][1]]
            depth[g] = 1 + fw.prefix_max(r if strict else r + 1)
        for g in group:
            fw.update(rank[intervals[g][1]], depth[g])
        i = j - 1
    need = max(depth)
    chain: list[int] = []
    for idx in range(n):
        if depth[idx] != need:
            continue
        if chain:
            (lo0, hi0), (lo1, hi1) = intervals[chain[-1]], intervals[idx]
            ok = (lo1 > lo0 and hi1 < hi0) if strict else (lo1 >= lo0 and hi1 <= hi0)
            if not ok:
                continue
        chain.append(idx)
        need -= 1
        if need == 0:
            break
    return chain


@dataclass(frozen=True)
class TowerResult:
    bound: int
    strict: bool
    tower: tuple[SignedOrbital, ...]  # innermost first

    @property
    def height(self) -> int:
        return len(self.tower)

    def to_json(self, names: Sequence[str]) -> dict:
        return {
            "bound": self.bound,
            "strict": self.strict,
            "height": self.height,
            "tower": [o.to_json(names) for o in self.tower],
        }


def tower_search(
    A: Assignment,
    max_length: int,
    strict: bool = False,
    target: int | None = None,
    *,
    pool: OrbitalPool | None = None,
    workers: int = 1,
) -> TowerResult:
    """Largest (strict) tower among orbitals of words of length <= ``max_length``.

    ``target`` caps the reported height; the outermost levels are kept.
    """
    if pool is None:
        pool = build_pool(A, max_length, workers)
    idx = longest_chain(pool.intervals(), strict)
    if target is not None:
        idx = idx[:target]
    return TowerResult(pool.bound, strict, tuple(pool.orbitals[i] for i in reversed(idx)))


# -- crossed pairs and free semigroups ------------------------------------


@dataclass(frozen=True)
class CrossedPair:
    """``fixer`` has orbital ``(lo, hi)``; ``mover`` sends the ``moved`` end inside it."""

    fixer: Word
    mover: Word
    lo: ExtPoint
    hi: ExtPoint
    moved: str  # "lo" or "hi"

    def to_json(self, names: Sequence[str]) -> dict:
        return {
            "fixer": self.fixer.format(names),
            "mover": self.mover.format(names),
            "interval": [format_point(self.lo), format_point(self.hi)],
            "movedEnd": self.moved,
        }


def _ordered_distinct(A: Assignment, max_length: int) -> list[tuple[Word, PLMap]]:
    seen: set[PLMap] = set()
    out = []
    for w in enumerate_words(A.k, max_length):
        m = evaluate_word(w, A)
        if m not in seen:
            seen.add(m)
            out.append((w, m))
    return out


def find_crossed_pair(A: Assignment, max_length: int) -> CrossedPair | None:
    """First crossed pair in enumeration order (fixer word, then mover word, then orbital)."""
    elems = _ordered_distinct(A, max_length)
    for u, mu in elems:
        if mu.is_identity():
            continue
        orbitals = mu.signed_orbitals()
        for v, mv in elems:
            for o in orbitals:
                if is_finite(o.lo) and o.lo < mv(o.lo) < o.hi:
                    return CrossedPair(u, v, o.lo, o.hi, "lo")
                if is_finite(o.hi) and o.lo < mv(o.hi) < o.hi:
                    return CrossedPair(u, v, o.lo, o.hi, "hi")
    return None


@dataclass(frozen=True)
class PingPong:
    """Two maps sending ``domain`` into disjoint subintervals of itself."""

    first: Word
    second: Word
    domain: tuple[ExtPoint, ExtPoint]
    images: tuple[tuple[ExtPoint, ExtPoint], tuple[ExtPoint, ExtPoint]]

    def to_json(self, names: Sequence[str]) -> dict:
        return {
            "first": self.first.format(names),
            "second": self.second.format(names),
            "domain": [format_point(x) for x in self.domain],
            "images": [[format_point(x) for x in im] for im in self.images],
        }


def ping_pong_pair(cp: CrossedPair, A: Assignment, max_power: int = 64) -> PingPong | None:
    """Turn a crossed pair into a ping-pong pair ``(G^n, mover G^n)``.

    ``G`` is the fixer or its inverse, chosen to push points of the orbital
    toward the moved end.  On a closed domain ``[moved end, d]`` the two maps
    have disjoint images inside the domain once ``n`` is large, which makes
    the positive semigroup they generate free.
    """
    fixer = evaluate_word(cp.fixer, A)
    mover = evaluate_word(cp.mover, A)
    if cp.moved == "lo":
        end, inside = cp.lo, mover(cp.lo)
        far = (inside + cp.hi) / 2 if is_finite(cp.hi) else inside + 1
    else:
        end, inside = cp.hi, mover(cp.hi)
        far = (inside + cp.lo) / 2 if is_finite(cp.lo) else inside - 1
    toward = 1 if fixer(far) < far else -1  # fixer^toward moves `far` toward `end` iff end < far
    if end > far:
        toward = -toward
    G, G_word = (fixer, cp.fixer) if toward == 1 else (fixer.inverse(), cp.fixer.inverse())
    Gn, Gn_word = PLMap.identity(), Word()
    for _ in range(max_power):
        Gn, Gn_word = G.compose(Gn), G_word * Gn_word
        dom = (min(end, far), max(end, far))
        im1 = (Gn(dom[0]), Gn(dom[1]))
        second = mover.compose(Gn)
        im2 = (second(dom[0]), second(dom[1]))
        inside_dom = all(dom[0] <= p <= dom[1] for p in im1 + im2)
        disjoint = im1[1] < im2[0] or im2[1] < im1[0]
        if inside_dom and disjoint:
            return PingPong(Gn_word, cp.mover * Gn_word, dom, (im1, im2))
    return None


def positive_words(n_letters: int, max_length: int) -> Iterable[tuple[int, ...]]:
    for length in range(1, max_length + 1):
        yield from product(range(n_letters), repeat=length)


@dataclass(frozen=True)
class FreeSemigroupCertificate:
    max_length: int
    count: int
    distinct: bool
    collision: tuple | None

    def to_json(self) -> dict:
        return {
            "maxLength": self.max_length,
            "words": self.count,
            "pairwiseDistinct": self.distinct,
            "collision": None if self.collision is None else [list(c) for c in self.collision],
        }


def free_semigroup_certificate(u: PLMap, v: PLMap, max_length: int = 8) -> FreeSemigroupCertificate:
    """Check that all positive words of length 1..``max_length`` in ``u, v`` are distinct maps."""
    gens = (u, v)
    seen: dict[PLMap, tuple[int, ...]] = {}
    level: list[tuple[tuple[int, ...], PLMap]] = [((), PLMap.identity())]
    count = 0
    for _ in range(max_length):
        nxt = []
        for w, m in level:
            for i, g in enumerate(gens):
                w2, m2 = w + (i,), m.compose(g)
                count += 1
                if m2 in seen:
                    return FreeSemigroupCertificate(max_length, count, False, (seen[m2], w2))
                seen[m2] = w2
                nxt.append((w2, m2))
        level = nxt
    return FreeSemigroupCertificate(max_length, count, True, None)


# -- inner orbitals and quasi-orbitals -------------------------------------


def _pool(A: Assignment, max_length: int, pool: OrbitalPool | None) -> OrbitalPool:
    return pool if pool is not None else build_pool(A, max_length)


def maximal_inner_orbitals(A: Assignment, max_length: int, *, pool: OrbitalPool | None = None) -> list[SignedOrbital]:
    """Orbitals with two finite ends that sit inside no other such orbital."""
    inner = [o for o in _pool(A, max_length, pool).orbitals if is_finite(o.lo) and is_finite(o.hi)]
    return [
        o for o in inner
        if not any(p.interval != o.interval and contains(p.interval, o.interval) for p in inner)
    ]


@dataclass(frozen=True)
class QuasiOrbitalWitness:
    """Nested orbitals sharing ``shared_end``, innermost first."""

    chain: tuple[SignedOrbital, ...]
    shared_end: ExtPoint
    side: str  # "left" or "right": which end of each interval is shared

    @property
    def hull(self) -> Interval:
        return self.chain[-1].interval

    def to_json(self, names: Sequence[str]) -> dict:
        return {
            "sharedEnd": format_point(self.shared_end),
            "side": self.side,
            "length": len(self.chain),
            "chain": [o.to_json(names) for o in self.chain],
        }


def quasi_orbital_witnesses(
    A: Assignment, max_length: int, k: int, *, pool: OrbitalPool | None = None
) -> list[QuasiOrbitalWitness]:
    """Maximal chains of length >= ``k`` of orbitals with a common end.

    Orbitals with the same left end are automatically nested, so the maximal
    chain for a given end is simply every orbital having it.
    """
    if k < 1:
        raise ValueError("k must be >= 1")
    groups: dict[tuple[str, ExtPoint], list[SignedOrbital]] = {}
    for o in _pool(A, max_length, pool).orbitals:
        groups.setdefault(("left", o.lo), []).append(o)
        groups.setdefault(("right", o.hi), []).append(o)
    out = []
    for (side, end), chain in groups.items():
        if len(chain) < k:
            continue
        chain.sort(key=(lambda o: o.hi) if side == "left" else (lambda o: -o.lo))
        out.append(QuasiOrbitalWitness(tuple(chain), end, side))
    out.sort(key=lambda q: (q.side, q.shared_end))
    return out
