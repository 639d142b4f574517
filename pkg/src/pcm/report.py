"""Canonical JSON and plain-text reports."""

from __future__ import annotations

import json
from fractions import Fraction
from typing import Dict, List, Mapping, Optional, Sequence

from . import __version__
from .exact import Scalar, fmt_rational
from .geometry import GeometryPack
from .identities import eta_einstein_fit, k_nullity_fit
from .model import AlgebraSpec, CheckResult, Verdict

ENGINE = "pcm"


def invariants(pack: GeometryPack) -> Dict[str, str]:
    """scal, trl, trh2, c2 always; a, b, k only when the fit holds identically."""
    out = {
        "scal": str(pack.scal),
        "trl": str(pack.trl),
        "trh2": str(pack.trh2),
        "c2": str(pack.c2),
    }
    fit = eta_einstein_fit(pack)
    if fit.success:
        out["a"] = str(fit.a)
        out["b"] = str(fit.b)
    nfit = k_nullity_fit(pack)
    if nfit.success:
        out["k"] = str(nfit.k)
    return out


def spec_echo(spec: AlgebraSpec) -> dict:
    d = spec.dim
    brackets = {}
    for i in range(d):
        for j in range(i + 1, d):
            v = spec.bracket_vec(i, j)
            if any(not x.is_zero() for x in v):
                brackets[f"[{i + 1},{j + 1}]"] = [str(x) for x in v]
    return {
        "dim": d,
        "params": list(spec.params),
        "metric": [[str(spec.metric[i, j]) for j in range(d)] for i in range(d)],
        "bracket": brackets,
        "phi": [[str(spec.phi[i, j]) for j in range(d)] for i in range(d)],
        "xi": [fmt_rational(x) for x in spec.xi],
        "eta": [fmt_rational(x) for x in spec.eta],
    }


def check_to_dict(r: CheckResult) -> dict:
    d = {
        "id": r.id,
        "statement": r.statement,
        "verdict": r.verdict.value,
        "kind": r.kind,
        "residual": [{"component": lbl, "value": str(v)} for lbl, v in r.residual],
        "constraints": r.constraints.as_strings(),
    }
    if r.side_conditions:
        d["side_conditions"] = [str(p) for p in r.side_conditions]
    if r.parts:
        d["parts"] = [{"name": p.name, "verdict": p.verdict.value, "constraints": p.constraints.as_strings()}
                      for p in r.parts]
    if r.note:
        d["note"] = r.note
    return d


def build_report(spec: AlgebraSpec, pack: Optional[GeometryPack], checks: Sequence[CheckResult],
                 substitution: Mapping[str, Fraction] | None = None) -> dict:
    rep = {
        "header": {"engine": ENGINE, "version": __version__},
        "manifold": spec.name,
        "spec": spec_echo(spec),
        "invariants": invariants(pack) if pack is not None else {},
        "checks": [check_to_dict(c) for c in sorted(checks, key=lambda c: c.id)],
    }
    if substitution:
        rep["substitution"] = {k: fmt_rational(v) for k, v in sorted(substitution.items())}
    return rep


def to_json(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def summary(checks: Sequence[CheckResult]) -> Dict[str, int]:
    out = {v.value: 0 for v in Verdict}
    for c in checks:
        out[c.verdict.value] += 1
    return out


def to_text(report: dict) -> str:
    lines = [f"manifold {report['manifold']}  ({report['header']['engine']} {report['header']['version']})"]
    if report.get("substitution"):
        lines.append("substitution: " + ", ".join(f"{k}={v}" for k, v in report["substitution"].items()))
    if report["invariants"]:
        lines.append("invariants:")
        for k in sorted(report["invariants"]):
            lines.append(f"  {k:<5} = {report['invariants'][k]}")
    checks = report["checks"]
    if checks:
        w = max(len(c["id"]) for c in checks)
        lines.append("checks:")
        for c in checks:
            extra = ""
            if c["constraints"]:
                extra = "  {" + ", ".join(c["constraints"]) + "}"
            lines.append(f"  {c['id']:<{w}}  {c['verdict']}{extra}")
    return "\n".join(lines) + "\n"


def exit_code(checks: Sequence[CheckResult]) -> int:
    verdicts = {c.verdict for c in checks}
    if Verdict.FAILS in verdicts:
        return 2
    if Verdict.CONDITIONAL in verdicts:
        return 3
    return 0
