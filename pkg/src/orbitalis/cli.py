"""Command-line front end.

Every subcommand prints one report.  JSON (the default) is sorted and
embeds the configuration, so equal configurations give byte-identical
output; ``--format text`` renders the same data line by line.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import random
import sys
from typing import Callable

from . import models
from .plmap import format_point
from .realization import IntegerOracle, WreathOracle, build_realization, estimate_F, verify_strict_tower
from .towers import (
    build_pool,
    find_crossed_pair,
    free_semigroup_certificate,
    maximal_inner_orbitals,
    ping_pong_pair,
    quasi_orbital_witnesses,
    tower_search,
)
from .words import Assignment, commutator_probe, evaluate_word
from .wreath import ORIENTATIONS, LESS, WreathGroup

DEFAULT_SEED = 0


class ReportFailure(Exception):
    """A verification inside a report failed; the report is still printed."""


def nonneg_int(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer, got {text!r}") from None
    if value < 0:
        raise argparse.ArgumentTypeError(f"expected a nonnegative integer, got {value}")
    return value


def positive_int(text: str) -> int:
    value = nonneg_int(text)
    if value == 0:
        raise argparse.ArgumentTypeError("expected a positive integer")
    return value


# -- report builders -------------------------------------------------------


def _assignment(args) -> Assignment:
    if args.model == "bs12":
        return models.bs12()
    if args.model in ("wreath", "z"):
        raise argparse.ArgumentTypeError(f"{args.command} needs a PL model (bs12 or a JSON file), not {args.model!r}")
    try:
        return models.load_model(args.model)
    except (OSError, ValueError, KeyError, TypeError) as exc:
        raise argparse.ArgumentTypeError(f"cannot load model {args.model!r}: {exc}") from None


def _oracle(args):
    if args.model == "wreath":
        return WreathOracle(args.shift_orientation)
    if args.model == "z":
        return IntegerOracle()
    raise argparse.ArgumentTypeError(f"{args.command} needs an ordered-group model (wreath or z), not {args.model!r}")


def cmd_orbitals(args) -> dict:
    A = _assignment(args)
    pool = build_pool(A, args.L, args.workers)
    return {"bound": args.L, "count": len(pool.orbitals), "orbitals": [o.to_json(A.names) for o in pool.orbitals]}


def cmd_tower_search(args) -> dict:
    A = _assignment(args)
    return tower_search(A, args.L, args.strict, args.n, workers=args.workers).to_json(A.names)


def cmd_crossed_pair(args) -> dict:
    A = _assignment(args)
    cp = find_crossed_pair(A, args.L)
    report: dict = {"bound": args.L, "crossedPair": None, "pingPong": None, "certificate": None}
    if cp is None:
        return report
    report["crossedPair"] = cp.to_json(A.names)
    pp = ping_pong_pair(cp, A)
    if pp is not None:
        report["pingPong"] = pp.to_json(A.names)
        cert = free_semigroup_certificate(evaluate_word(pp.first, A), evaluate_word(pp.second, A), args.n or 8)
        report["certificate"] = cert.to_json()
        if not cert.distinct:
            raise ReportFailure(report)
    return report


def cmd_quasi_orbital(args) -> dict:
    A = _assignment(args)
    pool = build_pool(A, args.L, args.workers)
    witnesses = quasi_orbital_witnesses(A, args.L, args.k, pool=pool)
    inner = maximal_inner_orbitals(A, args.L, pool=pool)
    return {
        "bound": args.L,
        "minLength": args.k,
        "witnesses": [q.to_json(A.names) for q in witnesses],
        "maximalInnerOrbitals": [o.to_json(A.names) for o in inner],
    }


def cmd_commutator_probe(args) -> dict:
    A = _assignment(args)
    return commutator_probe(A, args.L, args.depth).to_json(A.names)


def _sampled_algebra(G: WreathGroup, samples: int, seed: int) -> dict:
    rng = random.Random(seed)
    assoc = inverse = left_inv = None
    for _ in range(samples):
        x, y, z = (G.random_element(rng) for _ in range(3))
        if assoc is None and G.multiply(G.multiply(x, y), z) != G.multiply(x, G.multiply(y, z)):
            assoc = [str(x), str(y), str(z)]
        if inverse is None and not (G.multiply(x, G.invert(x)).is_identity() and G.multiply(G.invert(x), x).is_identity()):
            inverse = [str(x)]
        if left_inv is None and G.compare(x, y) == LESS and G.compare(G.multiply(z, x), G.multiply(z, y)) != LESS:
            left_inv = [str(z), str(x), str(y)]
    return {
        name: {"passed": bad is None, "checked": samples, "counterexample": bad}
        for name, bad in (("associativity", assoc), ("inverses", inverse), ("leftInvariance", left_inv))
    }


def cmd_order_check(args) -> dict:
    G = WreathGroup(args.shift_orientation)
    conditions = G.check_conditions(args.sample_size, args.bound, args.seed)
    algebra = _sampled_algebra(G, args.sample_size, args.seed)
    report = {"conditions": conditions, "algebra": algebra}
    if not all(v["passed"] for v in (*conditions.values(), *algebra.values())):
        raise ReportFailure(report)
    return report


def _realization_report(table, seed: int) -> dict:
    oracle = table.oracle
    lo, hi = table.window
    report = {
        "M": table.depth,
        "tableSize": len(table),
        "window": [format_point(lo), format_point(hi)],
        "orderIsomorphism": table.check_order_isomorphism(seed=seed),
        "actionConsistency": table.check_action_consistency(),
        "approximantBreakpoints": {name: len(m.breakpoints) for name, m in sorted(table.approximants.items())},
    }
    if "a" in oracle.generators:
        plus, minus = estimate_F(table, oracle.generators["a"])
        report["fixedPointsOfA"] = {"plus": plus.to_json(), "minus": minus.to_json()}
    return report


def cmd_realize(args) -> dict:
    table = build_realization(_oracle(args), args.M)
    if args.format == "csv":
        return {"_csv": table.to_csv()}
    report = _realization_report(table, args.seed)
    if not (report["orderIsomorphism"]["passed"] and report["actionConsistency"]["passed"]):
        raise ReportFailure(report)
    return report


def cmd_verify_tower(args) -> dict:
    if args.model != "wreath":
        raise argparse.ArgumentTypeError("verify-tower runs on the wreath model")
    table = build_realization(_oracle(args), args.M)
    report = verify_strict_tower(table, args.K)
    report["fixedPointFreeness"] = "out of verification scope at finite depth"
    if not report["verified"]:
        raise ReportFailure(report)
    return report


def _verify_bs12(args) -> dict:
    A = models.bs12()
    L = args.L
    checks: dict = {}
    pool = build_pool(A, L, args.workers)

    growth = []
    for n in range(1, (L - 2) // 2 + 1):
        sub = build_pool(A, 2 * n + 2, args.workers) if 2 * n + 2 < L else pool
        tower = tower_search(A, 2 * n + 2, False, pool=sub)
        levels = {(format_point(o.lo), format_point(o.hi)): A.format(o.signature) for o in tower.tower}
        expected = {("-inf", f"-1/{2 ** k - 1}"): " ".join(["g"] + ["f"] * k) for k in range(1, n + 1)}
        found = all(levels.get(I) == w for I, w in expected.items())
        growth.append({"n": n, "bound": 2 * n + 2, "height": tower.height, "containsGFTower": found})
    checks["heightGrowth"] = {
        "passed": all(g["height"] >= g["n"] and g["containsGFTower"] for g in growth),
        "levels": growth,
    }
    checks["heightAtBound"] = {"bound": L, "height": tower_search(A, L, False, pool=pool).height}
    strict = tower_search(A, L, True, pool=pool)
    checks["strictHeight"] = {"passed": strict.height == 1, "height": strict.height, "tower": strict.to_json(A.names)["tower"]}

    law = models.bs12_fixed_point_law(L, args.workers)
    checks["singleFixedPointLaw"] = law.to_json()

    cp = find_crossed_pair(A, L)
    pp = ping_pong_pair(cp, A) if cp else None
    cert = free_semigroup_certificate(evaluate_word(pp.first, A), evaluate_word(pp.second, A), 8) if pp else None
    checks["crossedPair"] = {
        "passed": cert is not None and cert.distinct,
        "pair": cp and cp.to_json(A.names),
        "pingPong": pp and pp.to_json(A.names),
        "certificate": cert and cert.to_json(),
    }
    return checks


def _verify_wreath(args) -> dict:
    G = WreathGroup(args.shift_orientation)
    checks: dict = {}
    checks["conditions"] = G.check_conditions(args.sample_size, args.bound, args.seed)
    checks["algebra"] = _sampled_algebra(G, args.sample_size, args.seed)
    table = build_realization(WreathOracle(args.shift_orientation), args.M)
    real = _realization_report(table, args.seed)
    fa = real["fixedPointsOfA"]
    real["passed"] = (
        real["orderIsomorphism"]["passed"]
        and real["actionConsistency"]["passed"]
        and all(isinstance(fa[s]["bracket"], list) for s in ("plus", "minus"))
    )
    checks["realization"] = real
    tower = verify_strict_tower(table, args.K)
    tower["passed"] = tower["verified"]
    checks["strictTower"] = tower
    return checks


def cmd_verify_construction(args) -> dict:
    checks = _verify_bs12(args) if args.which == "bs12" else _verify_wreath(args)
    report = {"construction": args.which, "checks": checks}
    if not all(_passed(v) for v in checks.values()):
        raise ReportFailure(report)
    return report


def _passed(check: dict) -> bool:
    if "passed" in check:
        return bool(check["passed"])
    return all(_passed(v) for v in check.values() if isinstance(v, dict))


# -- rendering ---------------------------------------------------------------


def _text(data, prefix: str = "") -> list[str]:
    if isinstance(data, dict):
        lines = []
        for key in sorted(data):
            lines.extend(_text(data[key], f"{prefix}.{key}" if prefix else str(key)))
        return lines
    if isinstance(data, list) and any(isinstance(x, (dict, list)) for x in data):
        lines = []
        for i, item in enumerate(data):
            lines.extend(_text(item, f"{prefix}[{i}]"))
        return lines
    return [f"{prefix}: {json.dumps(data)}"]


def _csv(command: str, result: dict) -> str:
    if "_csv" in result:
        return result["_csv"]
    rows: list[list] = []
    if command == "orbitals":
        rows = [["lo", "hi", "signature"]] + [[o["lo"], o["hi"], o["signature"]] for o in result["orbitals"]]
    elif command in ("tower-search", "verify-tower"):
        # one row per level, innermost first: endpoints for a tower diagram
        rows = [["level", "lo", "hi", "signature"]]
        rows += [[i, o["lo"], o["hi"], o["signature"]] for i, o in enumerate(result["tower"])]
    elif command == "quasi-orbital":
        rows = [["witness", "sharedEnd", "side", "lo", "hi", "signature"]]
        for i, q in enumerate(result["witnesses"]):
            rows += [[i, q["sharedEnd"], q["side"], o["lo"], o["hi"], o["signature"]] for o in q["chain"]]
    else:
        raise argparse.ArgumentTypeError(f"no CSV rendering for {command}")
    buf = io.StringIO()
    csv.writer(buf, lineterminator="\n").writerows(rows)
    return buf.getvalue()


def render(command: str, config: dict, result: dict, fmt: str) -> str:
    if fmt == "csv":
        return _csv(command, result)
    report = {"command": command, "config": config, "result": result}
    if fmt == "text":
        return "\n".join(_text(report)) + "\n"
    return json.dumps(report, sort_keys=True, indent=2) + "\n"


# -- argument parsing ----------------------------------------------------------


COMMANDS: dict[str, Callable] = {
    "orbitals": cmd_orbitals,
    "tower-search": cmd_tower_search,
    "crossed-pair": cmd_crossed_pair,
    "quasi-orbital": cmd_quasi_orbital,
    "commutator-probe": cmd_commutator_probe,
    "order-check": cmd_order_check,
    "realize": cmd_realize,
    "verify-tower": cmd_verify_tower,
    "verify-construction": cmd_verify_construction,
}

# options that change how a run is executed or stored but not what it reports
_EXECUTION_ONLY = {"workers", "out", "format"}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--model", default=None, help="bs12, wreath, z, or a JSON file of PL generators")
    common.add_argument("--L", type=nonneg_int, default=None, help="word-length bound")
    common.add_argument("--M", type=nonneg_int, default=6, help="realization depth")
    common.add_argument("--K", type=nonneg_int, default=2, help="conjugate range for the strict tower")
    common.add_argument("--n", type=positive_int, default=None, help="target height or certificate length")
    common.add_argument("--k", type=positive_int, default=3, help="minimum quasi-orbital chain length")
    common.add_argument("--depth", type=positive_int, default=2, help="commutator depth")
    common.add_argument("--sample-size", type=positive_int, default=1000)
    common.add_argument("--bound", type=nonneg_int, default=5, help="coordinate bound for sampled elements")
    common.add_argument("--seed", type=int, default=None, help=f"random seed (env ORBITALIS_SEED, default {DEFAULT_SEED})")
    common.add_argument("--shift-orientation", choices=sorted(ORIENTATIONS), default="condition_iii")
    common.add_argument("--strict", action="store_true", help="search strict towers")
    common.add_argument("--format", choices=("json", "text", "csv"), default="json")
    common.add_argument("--workers", type=positive_int, default=1)
    common.add_argument("--out", default=None, help="write the report here instead of stdout")

    parser = argparse.ArgumentParser(prog="orbitalis", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        p = sub.add_parser(name, parents=[common])
        if name == "verify-construction":
            p.add_argument("which", choices=("bs12", "wreath"))
    return parser


def _resolve(args, parser: argparse.ArgumentParser) -> None:
    if args.seed is None:
        env = os.environ.get("ORBITALIS_SEED")
        try:
            args.seed = int(env) if env is not None else DEFAULT_SEED
        except ValueError:
            parser.error(f"ORBITALIS_SEED must be an integer, got {env!r}")
    if args.model is None:
        ordered = args.command in ("realize", "verify-tower") or getattr(args, "which", None) == "wreath"
        args.model = "wreath" if ordered else "bs12"
    if args.L is None:
        args.L = 10 if args.command == "verify-construction" else 4 if args.command == "commutator-probe" else 8


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    _resolve(args, parser)
    config = {k: v for k, v in sorted(vars(args).items()) if k not in _EXECUTION_ONLY}
    code = 0
    try:
        result = COMMANDS[args.command](args)
    except ReportFailure as failure:
        result, code = failure.args[0], 1
    except argparse.ArgumentTypeError as exc:
        parser.error(str(exc))
    try:
        text = render(args.command, config, result, args.format)
    except argparse.ArgumentTypeError as exc:
        parser.error(str(exc))
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
