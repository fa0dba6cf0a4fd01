import itertools
from fractions import Fraction

import pytest

from orbitalis.realization import (
    IntegerOracle,
    OracleInconsistencyError,
    WreathOracle,
    build_realization,
    estimate_F,
    verify_strict_tower,
)
from orbitalis.wreath import LESS


@pytest.fixture(scope="module")
def table4():
    return build_realization(WreathOracle(), 4)


@pytest.fixture(scope="module")
def table6():
    return build_realization(WreathOracle(), 6)


class ExactlessOracle(WreathOracle):
    """Same group, but without the exact power test."""

    stable_sign = None


class BrokenOracle(IntegerOracle):
    """Integers with a comparison that forgets the sign of large elements."""

    def compare(self, g, h):
        return super().compare(abs(g) if abs(g) > 1 else g, abs(h) if abs(h) > 1 else h)


def test_integers_are_placed_in_order():
    T = build_realization(IntegerOracle(), 3)
    assert [T.pos[k] for k in range(-3, 4)] == sorted(T.pos[k] for k in range(-3, 4))
    assert T.pos[0] == 0
    assert T.approximants["t"](Fraction(1)) == Fraction(2)


def test_every_pair_of_a_small_table(table4):
    T = build_realization(WreathOracle(), 3)
    assert len(set(T.pos.values())) == len(T)
    for g, h in itertools.combinations(T.elements, 2):
        assert (T.oracle.compare(g, h) == LESS) == (T.pos[g] < T.pos[h])
    assert T.check_order_isomorphism()["passed"]


def test_table_checks(table4):
    T = table4
    assert T.pos[T.oracle.identity] == 0
    iso = T.check_order_isomorphism(seed=3)
    act = T.check_action_consistency()
    assert iso["passed"] and act["passed"] and act["checked"] > len(T)


def test_table_is_a_ball():
    T = build_realization(WreathOracle(), 2)
    # 6 letters; a, b and t^-1 a t commute with a only partially, so count by brute force
    O = T.oracle
    letters = [s for g in O.generators.values() for s in (g, O.invert(g))]
    ball = {O.identity}
    for _ in range(2):
        ball |= {O.multiply(g, s) for g in ball for s in letters}
    assert set(T.elements) == ball


def test_oracle_violations_are_reported():
    with pytest.raises(OracleInconsistencyError) as err:
        build_realization(BrokenOracle(), 3)
    assert len(err.value.pair) == 2


def test_estimate_F(table4):
    with pytest.raises(ValueError):
        estimate_F(table4, table4.oracle.identity)
    plus, minus = estimate_F(table4, table4.oracle.generators["a"])
    assert plus.found and minus.found and plus.exact
    assert 0 < plus.lo < plus.hi and minus.lo < minus.hi < 0
    # a and a^-1 have the same fixed points
    inv_plus, inv_minus = estimate_F(table4, table4.oracle.invert(table4.oracle.generators["a"]))
    assert (inv_plus.lo, inv_plus.hi, inv_minus.lo, inv_minus.hi) == (plus.lo, plus.hi, minus.lo, minus.hi)


def test_translation_has_no_fixed_points():
    T = build_realization(IntegerOracle(), 4)
    plus, minus = estimate_F(T, 1)
    assert not plus.found and not minus.found
    assert plus.to_json()["bracket"] == "none found at this depth"


def test_brackets_only_refine_with_depth():
    prev = None
    for M in (3, 4, 5):
        T = build_realization(WreathOracle(), M)
        cur = estimate_F(T, T.oracle.generators["a"])
        if prev:
            for old, new in zip(prev, cur):
                assert old.lo <= new.lo and new.hi <= old.hi
        prev = cur


def test_bounded_fallback_is_flagged(table4):
    T = build_realization(ExactlessOracle(), 4)
    plus, minus = estimate_F(T, T.oracle.generators["a"])
    assert not plus.exact and plus.found and minus.found
    exact_plus, _ = estimate_F(table4, table4.oracle.generators["a"])
    assert plus.lo <= exact_plus.lo


def test_strict_tower(table6):
    r = verify_strict_tower(table6, 2)
    assert r["verified"] and r["k0"] == 2 and r["height"] == 5
    assert r["direction"] == "decreasing"
    his = [Fraction(x["hi"]) for x in r["tower"]]
    los = [Fraction(x["lo"]) for x in r["tower"]]
    assert his == sorted(his) and los == sorted(los, reverse=True)
    assert len(set(his)) == 5 and len(set(los)) == 5
    assert [x["k"] for x in r["tower"]] == [2, 1, 0, -1, -2]
    assert r["resolution"]["M"] == 6 and r["resolution"]["K"] == 2


def test_strict_tower_single_level(table4):
    r = verify_strict_tower(table4, 0)
    assert r["verified"] and r["height"] == 1


def test_shallow_table_is_inconclusive():
    r = verify_strict_tower(build_realization(WreathOracle(), 2), 2)
    assert not r["verified"] and r["status"] == "inconclusive beyond k0=1"
    assert r["height"] == 3


def test_t_moves_the_fixed_point_of_a_right(table4):
    # under this orientation t(p) > p where p = F_+(a)
    assert verify_strict_tower(table4, 0)["tOfP"] == "greater"


def test_csv_dump():
    T = build_realization(IntegerOracle(), 2)
    assert T.to_csv().splitlines() == ["element,position", "t^-2,-2/1", "t^-1,-1/1", "t^0,0/1", "t^1,1/1", "t^2,2/1"]
