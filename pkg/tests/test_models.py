import json
from fractions import Fraction

import pytest

from orbitalis.models import bs12, bs12_fixed_point_law, bump, load_model, translations
from orbitalis.plmap import PLMap

F = Fraction


def test_bs12_generators():
    A = bs12()
    assert A.names == ("f", "g")
    assert A.maps == (PLMap.affine(2), PLMap.affine(1, 1))


def test_translations_commute():
    s0, s1 = translations(1, F(1, 3)).maps
    assert s0.compose(s1) == s1.compose(s0) == PLMap.affine(1, F(4, 3))


def test_bump_support():
    m = bump(0, 1, F(1, 4))
    assert m(F(-3)) == F(-3) and m(F(2)) == F(2) and m(F(1, 2)) == F(3, 4)
    with pytest.raises(ValueError):
        bump(0, 1, 1)


def test_load_model(tmp_path):
    path = tmp_path / "m.json"
    path.write_text(json.dumps(bs12().to_json()))
    assert load_model(path) == bs12()


def test_fixed_point_law_small_bounds():
    r = bs12_fixed_point_law(4)
    assert r.passed and r.words == 4 + 12 + 36 + 108
    assert r.with_fixed_point + r.fixed_point_free + r.trivial == r.words
    assert bs12_fixed_point_law(4, workers=2) == r
