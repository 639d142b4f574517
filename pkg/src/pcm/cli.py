"""``pcm`` command line interface.

Exit codes: 0 every requested check holds, 1 parse or validation error,
2 at least one check fails, 3 conditional verdicts remain.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from typing import Dict, List, Optional, Sequence

from .conditions import CONDITIONS, constraint_extract
from .dhomothety import DHomothetyError, DHomothetyParams, apply_dhomothety, verify_transform_laws
from .dsl import ParseError, format_spec, load_spec
from .exact import DegenerateSubstitution
from .geometry import geometry
from .identities import check_eq23_24
from .model import (AlgebraSpec, JacobiError, SpecError, Verdict, check_paracontact,
                    validate_almost_paracontact)
from .oracle import SearchConfig, random_search
from .report import build_report, exit_code, invariants, to_json, to_text
from .suite import UnknownCheck, run_suite

OK, INPUT_ERROR, FAILS, CONDITIONAL = 0, 1, 2, 3


class UsageError(Exception):
    pass


def _subst(items: Optional[Sequence[str]]) -> Dict[str, Fraction]:
    out: Dict[str, Fraction] = {}
    for item in items or ():
        for part in item.split(","):
            if not part.strip():
                continue
            if "=" not in part:
                raise UsageError(f"--subst expects name=value, got {part!r}")
            k, v = part.split("=", 1)
            try:
                out[k.strip()] = Fraction(v.strip())
            except (ValueError, ZeroDivisionError):
                raise UsageError(f"--subst value for {k.strip()} is not a rational: {v.strip()!r}") from None
    return out


def _load(path: str, subst: Dict[str, Fraction]) -> AlgebraSpec:
    spec = load_spec(path)
    unknown = sorted(set(subst) - set(spec.params))
    if unknown:
        raise UsageError(f"--subst names undeclared parameter(s): {', '.join(unknown)}")
    return spec.substitute(subst) if subst else spec


def _validated(spec: AlgebraSpec) -> None:
    """Raise on structural problems; the suite is meaningless on a non-almost-paracontact spec."""
    r = validate_almost_paracontact(spec)
    if r.verdict == Verdict.FAILS:
        first = r.residual[0][0] if r.residual else "?"
        raise SpecError(f"not an almost paracontact metric structure (first residual: {first})")


def cmd_check(args) -> int:
    spec = _load(args.file, _subst(args.subst))
    checks = [validate_almost_paracontact(spec), check_paracontact(spec)]
    for c in checks:
        extra = f"  {c.constraints}" if c.constraints else ""
        print(f"{c.id}: {c.verdict}{extra}")
        for lbl, v in c.residual[:8]:
            print(f"    {lbl} = {v}")
    return exit_code(checks)


def cmd_invariants(args) -> int:
    subst = _subst(args.subst)
    spec = _load(args.file, subst)
    _validated(spec)
    inv = invariants(geometry(spec))
    if args.json:
        sys.stdout.write(to_json({"manifold": spec.name, "invariants": inv}))
    else:
        for k in sorted(inv):
            print(f"{k} = {inv[k]}")
    return OK


def cmd_identities(args) -> int:
    subst = _subst(args.subst)
    spec = _load(args.file, subst)
    _validated(spec)
    pack = geometry(spec)
    only = [s for s in (args.only or "").split(",") if s.strip()] or None
    checks = run_suite(pack, only)
    rep = build_report(spec, pack, checks, subst)
    sys.stdout.write(to_json(rep) if args.json else to_text(rep))
    return exit_code(checks)


def cmd_solve(args) -> int:
    spec = _load(args.file, _subst(args.subst))
    ex = constraint_extract(spec, args.condition)
    if args.json:
        sys.stdout.write(to_json({
            "condition": ex.condition, "verdict": ex.verdict.value,
            "constraints": ex.constraints.as_strings(),
            "side_conditions": [str(p) for p in ex.side_conditions],
        }))
    else:
        print(ex.constraints)
        if ex.side_conditions:
            print("nonvanishing: " + ", ".join(str(p) for p in ex.side_conditions))
    return {Verdict.HOLDS: OK, Verdict.FAILS: FAILS}.get(ex.verdict, CONDITIONAL)


def cmd_dhomothety(args) -> int:
    spec = _load(args.file, _subst(args.subst))
    p = DHomothetyParams.parse(args.alpha)
    new = apply_dhomothety(spec, p)
    text = format_spec(new)
    if args.emit:
        with open(args.emit, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    if not args.verify:
        return OK
    checks = verify_transform_laws(spec, p) + check_eq23_24(geometry(new))
    out = sys.stderr if not args.emit else sys.stdout
    for c in sorted(checks, key=lambda c: c.id):
        extra = f"  {c.constraints}" if c.constraints else ""
        print(f"{c.id}: {c.verdict}{extra}", file=out)
    return exit_code(checks)


def cmd_search(args) -> int:
    cfg = SearchConfig(budget=args.budget, seed=args.seed, family=args.family)
    hits = random_search(cfg)
    if args.json:
        sys.stdout.write(to_json([
            {"trial": h.trial, "name": h.spec.name, "h_zero": h.h_zero, "spec": format_spec(h.spec)} for h in hits
        ]))
    else:
        print(f"# {len(hits)} valid spec(s) from {cfg.budget} trial(s), seed {cfg.seed}, family {cfg.family}")
        for h in hits:
            print(f"# trial {h.trial}: {'h = 0' if h.h_zero else 'h != 0'}")
            sys.stdout.write(format_spec(h.spec))
    return OK


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="pcm", description="Exact checks for paracontact metric Lie algebras.")
    sub = ap.add_subparsers(dest="command", required=True)

    def with_file(name, help_):
        p = sub.add_parser(name, help=help_)
        p.add_argument("file")
        p.add_argument("--subst", action="append", metavar="NAME=VALUE",
                       help="substitute a rational for a parameter (repeatable, or comma separated)")
        return p

    p = with_file("check", "validate the almost paracontact and paracontact conditions")
    p.set_defaults(fn=cmd_check)

    p = with_file("invariants", "print scal, trl, tr h^2, c^2 and the fits")
    p.add_argument("--json", action="store_true")
    p.set_defaults(fn=cmd_invariants)

    p = with_file("identities", "run the identity suite")
    p.add_argument("--only", help="comma separated check ids or id prefixes")
    p.add_argument("--json", action="store_true")
    p.set_defaults(fn=cmd_identities)

    p = with_file("solve", "extract polynomial constraints equivalent to a condition")
    p.add_argument("--condition", required=True, choices=CONDITIONS)
    p.add_argument("--json", action="store_true")
    p.set_defaults(fn=cmd_solve)

    p = with_file("dhomothety", "apply a D-homothetic deformation")
    p.add_argument("--alpha", required=True, help="positive rational p/q")
    p.add_argument("--emit", metavar="OUTFILE", help="write the deformed spec here instead of stdout")
    p.add_argument("--verify", action="store_true", help="recompute and check the transformation laws")
    p.set_defaults(fn=cmd_dhomothety)

    p = sub.add_parser("search", help="seeded random search for valid paracontact specs")
    p.add_argument("--budget", type=int, required=True)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--family", default="extended", choices=("f2", "f2-diagonal", "extended"))
    p.add_argument("--json", action="store_true")
    p.set_defaults(fn=cmd_search)
    return ap


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.fn(args)
    except ParseError as exc:
        print(f"{exc.span}: error: {exc.message}", file=sys.stderr)
    except (SpecError, JacobiError, DHomothetyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
    except (UsageError, UnknownCheck, DegenerateSubstitution, ValueError) as exc:
        msg = exc.args[0] if isinstance(exc, UnknownCheck) else exc
        print(f"error: {msg}", file=sys.stderr)
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
    return INPUT_ERROR


if __name__ == "__main__":
    sys.exit(main())
