"""One test per acceptance criterion; each prints a single PASS/FAIL line."""

import io
import random
import time
from contextlib import redirect_stdout
from fractions import Fraction

import pytest

from conftest import ACCEPTANCE_LINES, random_map, random_rational
from orbitalis.cli import main
from orbitalis.models import bs12, bs12_fixed_point_law
from orbitalis.plmap import NEG_INF, POS_INF, PLMap
from orbitalis.realization import WreathOracle, build_realization, estimate_F, verify_strict_tower
from orbitalis.towers import (
    EQUAL,
    LESS,
    build_pool,
    find_crossed_pair,
    free_semigroup_certificate,
    ping_pong_pair,
    signature_less,
    tower_search,
)
from orbitalis.words import evaluate_word
from orbitalis.wreath import WreathGroup, vec_compare

A = bs12()
SEED = 20240


def record(number: int, title: str, passed: bool, detail: str) -> None:
    line = f"criterion {number}: {'PASS' if passed else 'FAIL'} - {title} ({detail})"
    ACCEPTANCE_LINES.append(line)
    print(line)
    assert passed, line


@pytest.fixture(scope="module")
def wreath_table():
    return build_realization(WreathOracle(), 6)


def test_criterion_1_single_fixed_point_law():
    start = time.perf_counter()
    law = bs12_fixed_point_law(12, workers=4)
    elapsed = time.perf_counter() - start
    expected_words = sum(4 * 3 ** (n - 1) for n in range(1, 13))
    passed = law.passed and law.words == expected_words and elapsed < 120
    record(1, "affine law on every reduced word of length <= 12", passed,
           f"{law.words} words, {law.with_fixed_point} with one fixed point, "
           f"{law.fixed_point_free} fixed-point free, {law.trivial} identity, {elapsed:.1f}s")


def test_criterion_2_height_lower_bounds():
    failures = []
    for n in range(1, 6):
        L = 2 * n + 2
        pool = build_pool(A, L)
        tower = tower_search(A, L, pool=pool)
        levels = {o.interval: o.signature for o in tower.tower}
        for k in range(1, n + 1):
            p = Fraction(-1, 2**k - 1)
            w = levels.get((NEG_INF, p))
            if w is None or A.format(w) != " ".join(["g"] + ["f"] * k):
                failures.append(f"n={n} missing level k={k}")
            elif evaluate_word(w, A).fixed_set().points() != [p]:
                failures.append(f"n={n} fixed point of level k={k}")
        if tower.height < n:
            failures.append(f"n={n} height {tower.height}")
        strict = tower_search(A, L, strict=True, pool=pool).height
        if strict != 1:
            failures.append(f"n={n} strict height {strict}")
    record(2, "towers (-inf, -1/(2^k-1)) for n = 1..5, strict height 1", not failures,
           "; ".join(failures) or "all levels present, fixed points exact")


def test_criterion_3_crossed_pair_certificate():
    cp = find_crossed_pair(A, 4)
    pp = ping_pong_pair(cp, A) if cp else None
    cert = free_semigroup_certificate(evaluate_word(pp.first, A), evaluate_word(pp.second, A), 8) if pp else None
    passed = cert is not None and cert.distinct and cert.count == 510
    detail = "no pair" if cert is None else (
        f"crossed pair ({A.format(cp.fixer)}, {A.format(cp.mover)}) on (0, +inf); "
        f"ping-pong pair ({A.format(pp.first)}, {A.format(pp.second)}); {cert.count} positive words distinct"
    )
    record(3, "crossed pair and free semigroup certificate", passed, detail)


def test_criterion_4_wreath_algebra():
    G = WreathGroup()
    rng = random.Random(SEED)
    bad = 0
    for _ in range(10_000):
        x, y, z = (G.random_element(rng, 5) for _ in range(3))
        if G.multiply(G.multiply(x, y), z) != G.multiply(x, G.multiply(y, z)):
            bad += 1
        if not (G.multiply(x, G.invert(x)).is_identity() and G.multiply(G.invert(x), x).is_identity()):
            bad += 1
    fam = G.conjugate_family(range(-5, 6))
    noncommuting = sum(G.multiply(u, v) != G.multiply(v, u) for u in fam for v in fam)
    record(4, "associativity, inverses, commuting conjugates", bad == 0 and noncommuting == 0,
           f"10000 triples, {bad} failures; {len(fam)**2} conjugate pairs, {noncommuting} non-commuting")


def test_criterion_5_order_contract():
    G = WreathGroup("condition_iii")
    rng = random.Random(SEED + 1)
    left = 0
    for _ in range(10_000):
        x, y, z = (G.random_element(rng, 5) for _ in range(3))
        if G.compare(G.multiply(z, x), G.multiply(z, y)) != G.compare(x, y):
            left += 1
    report = G.check_conditions(1000, 5, SEED)
    ok = all(r["passed"] for r in report.values())
    record(5, "conditions (ii)-(v) and left invariance", ok and left == 0,
           ", ".join(f"({k}) {'ok' if r['passed'] else 'counterexample ' + str(r['counterexample'])}"
                     for k, r in report.items()) + f", left invariance failures {left}/10000")


def test_criterion_6_realization(wreath_table):
    T = wreath_table
    iso = T.check_order_isomorphism(sample=20_000, seed=SEED)
    act = T.check_action_consistency()
    plus, minus = estimate_F(T, T.oracle.generators["a"])
    passed = iso["passed"] and act["passed"] and plus.found and minus.found and plus.lo > 0 and minus.hi < 0
    record(6, "realization at depth 6", passed,
           f"{len(T)} elements, order isomorphism on {iso['checked']} pairs (all consecutive pairs + sample), "
           f"{act['checked']} action pairs, F+ in [{plus.lo}, {plus.hi}], F- in [{minus.lo}, {minus.hi}]")


def test_criterion_7_strict_tower(wreath_table):
    r = verify_strict_tower(wreath_table, 2)
    passed = r["verified"] and r["k0"] >= 2 and r["height"] == 5
    record(7, "bi-infinite strict tower at K = 2", passed,
           f"{r['status']}, k0={r['k0']}, height {r['height']}, window {r['resolution']['window']}")


def test_criterion_8_property_suites():
    rng = random.Random(SEED + 2)
    failures = {"group axioms": 0, "monotonicity": 0, "fixed set partition": 0, "signature order": 0, "vec_compare": 0}
    for _ in range(1000):
        a, b, c = (random_map(rng) for _ in range(3))
        if a.compose(b).compose(c) != a.compose(b.compose(c)) or not a.compose(a.inverse()).is_identity():
            failures["group axioms"] += 1
        x, y = sorted((random_rational(rng), random_rational(rng)))
        if x < y and not a(x) < a(y):
            failures["monotonicity"] += 1
        if not a.is_identity():
            fs, orbitals = a.fixed_set(), a.signed_orbitals()
            probes = [random_rational(rng) for _ in range(10)] + list(a.breakpoints)
            for p in probes:
                inside = [o for o in orbitals if o.contains(p)]
                if fs.contains(p) == bool(inside) or (inside and a.displacement_sign(p) != inside[0].sign):
                    failures["fixed set partition"] += 1
                    break
        ab, bc, ac = signature_less(a, b), signature_less(b, c), signature_less(a, c)
        if ab != -signature_less(b, a) or (ab == EQUAL) != (a == b) or (ab == LESS and bc == LESS and ac != LESS):
            failures["signature order"] += 1
    G = WreathGroup()
    for _ in range(1000):
        u, v = G.random_element(rng), G.random_element(rng)
        for p, q in ((u.d, v.d), (u.w, v.w)):
            c = vec_compare(p, q)
            if c != -vec_compare(q, p) or (c == EQUAL) != (p == q):
                failures["vec_compare"] += 1
    record(8, "library property suites, 1000 seeded cases each", not any(failures.values()),
           ", ".join(f"{k} {v} failures" for k, v in failures.items()))


def _report(*argv: str) -> bytes:
    buf = io.StringIO()
    with redirect_stdout(buf):
        code = main(list(argv))
    return code, buf.getvalue().encode()


def test_criterion_9_determinism():
    runs = {}
    for which, extra in (("bs12", ["--L", "10"]), ("wreath", ["--M", "6", "--K", "2"])):
        outs = [_report("verify-construction", which, *extra, "--workers", w) for w in ("1", "1", "4")]
        runs[which] = (len({o for _, o in outs}) == 1, {c for c, _ in outs})
    passed = all(same and codes == {0} for same, codes in runs.values())
    record(9, "byte-identical verify-construction reports across runs and workers 1/4", passed,
           ", ".join(f"{k}: identical={same}, exit codes {sorted(codes)}" for k, (same, codes) in runs.items()))
