"""Command line front end.

Exit codes: 0 every check passed, 1 some checked property failed, 2 bad input.
Set ``ISGX_LOG`` (e.g. ``INFO``/``DEBUG``) for progress logging on stderr.
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys
from pathlib import Path

from . import scenario as scenario_io
from .action import validate_axioms
from .covrep import validate_covariant
from .crossed import (
    RepFamily,
    comparable_pairs,
    image_algebra,
    order_collapse_check,
    roundtrip_check,
    semilattice_iso_check,
    verify_integrated,
)
from .equivalence import theta_check
from .errors import IsgxError, PreconditionError, ScenarioError
from .lalgebra import LAlgebra
from .lift import build_sg, check_beta, check_key_identity
from .semigroup import check_laws, is_semilattice

log = logging.getLogger("isgx")

EXIT_OK, EXIT_FAIL, EXIT_INPUT = 0, 1, 2


def _validation(sc: scenario_io.Scenario, tol: float) -> dict:
    laws = check_laws(sc.semigroup)
    out = {"semigroup": {"size": len(sc.semigroup), "labels": list(sc.semigroup.labels), "laws": laws.to_dict()}}
    axioms = validate_axioms(sc.action) if laws.passed else None
    out["action"] = axioms.to_dict() if axioms is not None else {"passed": False, "skipped": "semigroup laws fail"}
    reps = {}
    for rep in sc.reps:
        if axioms is not None and axioms.passed:
            reps[rep.name] = validate_covariant(sc.action, rep, tol).to_dict()
        else:
            reps[rep.name] = {"passed": False, "skipped": "action is not valid"}
    out["representations"] = reps
    out["passed"] = laws.passed and (axioms is not None and axioms.passed) and all(r["passed"] for r in reps.values())
    return out


def cmd_validate(sc: scenario_io.Scenario, args) -> dict:
    return _validation(sc, args.tol)


def cmd_crossed(sc: scenario_io.Scenario, args) -> dict:
    pre = _validation(sc, args.tol)
    if not pre["passed"]:
        return {"passed": False, "validation": pre}
    names = args.family or [r.name for r in sc.reps]
    family = RepFamily(sc.action, [sc.rep(n) for n in names], args.tol)
    alg = LAlgebra(sc.action, args.tol)
    img = image_algebra(family, alg, args.seed)
    S = sc.semigroup
    log.info("crossed: dim L = %d, image %d", alg.dim, img.dim)

    checks = {}
    integrated = {rep.name: verify_integrated(rep, alg, args.tol) for rep in family}
    checks["integrated"] = {k: v.to_dict() for k, v in integrated.items()}
    collapse = []
    collapse_ok = True
    for s, t in comparable_pairs(S):
        rep = order_collapse_check(family, alg, s, t)
        collapse_ok &= rep.passed
        collapse.append({"s": S.labels[s], "t": S.labels[t], "passed": rep.passed})
    roundtrip = roundtrip_check(family, alg, args.seed, image=img)
    checks["roundtrip"] = roundtrip.to_dict()
    passed = collapse_ok and roundtrip.passed and all(v.passed for v in integrated.values())
    if is_semilattice(S):
        semi = semilattice_iso_check(family, alg, args.seed, image=img)
        checks["semilattice"] = semi.to_dict()
        passed &= semi.passed
    return {
        "family": names,
        "dimL": alg.dim,
        "dimImage": img.dim,
        "dimNull": img.dim_null,
        "blocks": img.blocks,
        "collapsed_pairs": collapse,
        "checks": checks,
        "passed": bool(passed),
    }


def cmd_equivalence(sc: scenario_io.Scenario, args) -> dict:
    pre = _validation(sc, args.tol)
    if not pre["passed"]:
        return {"passed": False, "validation": pre}
    if not sc.reps:
        raise PreconditionError("equivalence needs at least one representation")
    rep = sc.rep(args.rep) if args.rep else sc.reps[0]
    sg = build_sg(sc.action, rep, args.tol)
    beta = check_beta(sg)
    key = check_key_identity(sg)
    eq = theta_check(sc.action, rep, sg, tol=args.tol, seed=args.seed)
    passed = beta.passed and key.passed and eq.span_equal and bool(eq.theta_iso)
    return {
        "rep": rep.name,
        "size_SG": len(sg),
        "SG": sg.to_dict(),
        "beta_action": beta.to_dict(),
        "key_identity": key.to_dict(),
        "equivalence": eq.to_dict(),
        "isomorphic": bool(eq.theta_iso),
        "passed": bool(passed),
    }


COMMANDS = {"validate": cmd_validate, "crossed": cmd_crossed, "equivalence": cmd_equivalence}


def _summary(command: str, report: dict) -> str:
    lines = [f"{command} {report['scenario']}: {'PASS' if report['passed'] else 'FAIL'}"]
    if "validation" in report:
        report = {**report, **report["validation"]}
    if "semigroup" in report:
        lines.append(f"  |G| = {report['semigroup']['size']}, laws {'ok' if report['semigroup']['laws']['passed'] else 'FAIL'}")
        for f in report["semigroup"]["laws"]["failures"][:5]:
            lines.append(f"    {f['check']}: {f['witness']}")
        act = report["action"]
        lines.append(f"  action axioms: {'ok' if act.get('passed') else 'FAIL'}")
        for f in act.get("failures", [])[:5]:
            lines.append(f"    {f['check']}: {f['witness']}")
        for name, r in report["representations"].items():
            lines.append(f"  rep {name}: {'ok' if r.get('passed') else 'FAIL'}")
            for f in r.get("failures", [])[:5]:
                lines.append(f"    {f['check']}: {f['witness']}")
    if "dimL" in report:
        lines.append(f"  dim L = {report['dimL']}, dim image = {report['dimImage']}, dim N = {report['dimNull']}")
        lines.append(f"  blocks = {report['blocks']}")
        ok = sum(p["passed"] for p in report["collapsed_pairs"])
        lines.append(f"  order collapse: {ok}/{len(report['collapsed_pairs'])} comparable pairs")
    if "size_SG" in report:
        eq = report["equivalence"]
        lines.append(f"  |S_G| = {report['size_SG']} (from rep {report['rep']})")
        lines.append(f"  beta action: {'ok' if report['beta_action']['passed'] else 'FAIL'}")
        lines.append(f"  spans equal: {eq['span_equal']} dims {eq['dims']}")
        lines.append(f"  Theta iso: {eq['theta_iso']}  blocks {eq['blocks_g']} vs {eq['blocks_s']}")
    return "\n".join(lines)


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("scenario", help="scenario JSON file, or the name of a bundled scenario")
    common.add_argument("--tol", type=float, default=None, help="numerical tolerance (default: scenario's, else 1e-9)")
    common.add_argument("--seed", type=int, default=None, help="seed for the block decomposition (default: scenario's)")
    common.add_argument("--out", type=Path, help="also write the JSON report to this file")
    fmt = common.add_mutually_exclusive_group()
    fmt.add_argument("--json", dest="format", action="store_const", const="json", default="json")
    fmt.add_argument("--text", dest="format", action="store_const", const="text")

    parser = argparse.ArgumentParser(prog="isgx", description="Crossed products by partial actions of finite inverse semigroups.")
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("validate", parents=[common], help="check semigroup laws, action axioms and covariance")
    p = sub.add_parser("crossed", parents=[common], help="build the crossed product relative to a representation family")
    p.add_argument("--family", nargs="+", metavar="NAME", help="representation names (default: all declared)")
    p = sub.add_parser("equivalence", parents=[common], help="compare the crossed products by G and by S_G")
    p.add_argument("--rep", help="representation used to build S_G (default: first declared)")
    return parser


def main(argv=None) -> int:
    logging.basicConfig(level=os.environ.get("ISGX_LOG", "WARNING").upper(), stream=sys.stderr,
                        format="%(levelname)s %(name)s: %(message)s")
    args = build_parser().parse_args(argv)
    try:
        sc = scenario_io.load(args.scenario)
        args.tol = sc.tolerance if args.tol is None else args.tol
        args.seed = sc.seed if args.seed is None else args.seed
        report = {"command": args.command, "scenario": sc.name, "tolerance": args.tol, "seed": args.seed}
        report.update(COMMANDS[args.command](sc, args))
    except (ScenarioError, PreconditionError) as exc:
        print(f"isgx: input error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except IsgxError as exc:
        print(f"isgx: {exc}", file=sys.stderr)
        return EXIT_INPUT
    text = json.dumps(report, indent=2)
    if args.out:
        args.out.write_text(text + "\n")
    print(_summary(args.command, report) if args.format == "text" else text)
    return EXIT_OK if report["passed"] else EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
