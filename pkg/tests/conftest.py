import random
from fractions import Fraction

from hypothesis import settings
from hypothesis import strategies as st

from orbitalis.plmap import PLMap

settings.register_profile("repo", derandomize=True, deadline=None, max_examples=150)
settings.load_profile("repo")

SLOPES = [Fraction(1, 4), Fraction(1, 2), Fraction(2, 3), Fraction(1), Fraction(3, 2), Fraction(2), Fraction(3)]

rationals = st.fractions(min_value=-8, max_value=8, max_denominator=12)


def build_map(breakpoints, slopes, offset0) -> PLMap:
    """Continuous PL map from breakpoints, one slope per segment and the first offset."""
    pieces = [(slopes[0], offset0)]
    for b, s in zip(breakpoints, slopes[1:]):
        s0, o0 = pieces[-1]
        pieces.append((s, s0 * b + o0 - s * b))
    return PLMap.from_pieces(breakpoints, pieces)


@st.composite
def plmaps(draw, max_breaks: int = 3):
    bps = sorted(set(draw(st.lists(rationals, max_size=max_breaks))))
    slopes = [draw(st.sampled_from(SLOPES)) for _ in range(len(bps) + 1)]
    return build_map(bps, slopes, draw(rationals))


def random_map(rng: random.Random, max_breaks: int = 3) -> PLMap:
    n = rng.randint(0, max_breaks)
    bps = sorted({Fraction(rng.randint(-40, 40), rng.randint(1, 6)) for _ in range(n)})
    slopes = [rng.choice(SLOPES) for _ in range(len(bps) + 1)]
    return build_map(bps, slopes, Fraction(rng.randint(-20, 20), rng.randint(1, 4)))


def random_rational(rng: random.Random) -> Fraction:
    return Fraction(rng.randint(-200, 200), rng.randint(1, 24))


ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[1].rstrip(":"))):
            terminalreporter.write_line(line)
