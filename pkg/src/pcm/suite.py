"""Check registry: every check id, the group that produces it, and a runner."""

from __future__ import annotations

from typing import Callable, Dict, Iterable, List, Sequence, Tuple

from .conditions import CONDITIONS, condition_check
from .geometry import GeometryPack, geometry
from .identities import (check_dim3_pipeline, check_eq23_24, check_flatness_remark, check_phi_symmetry,
                         check_prop32, check_prop33, check_prop43, run_basic_identities)
from .model import AlgebraSpec, CheckResult, check_paracontact, validate_almost_paracontact
from .oracle import bianchi_oracle

Group = Tuple[str, Callable[[GeometryPack], List[CheckResult]], Tuple[str, ...]]

GROUPS: Tuple[Group, ...] = (
    ("model", lambda p: [validate_almost_paracontact(p.spec), check_paracontact(p.spec)],
     ("model.almost_paracontact", "model.paracontact")),
    ("basic", run_basic_identities,
     ("eq2.l_xi", "eq2.h_xi", "eq2.tr_h", "eq2.tr_h_phi", "eq2.h_phi_anticommute", "eq2.h_symmetric",
      "eq2.l_symmetric", "eq3.nabla_xi", "eq3.nabla_xi_xi", "eq4.nabla_xi_phi", "eq5.trl", "eq5.trh2_norms",
      "eq6.phi_l_phi", "eq7.nabla_xi_h", "eq8.para_sasakian", "eq8.h_zero_equiv",
      "lemma31.f1", "lemma31.f2", "lemma31.f3", "lemma31.f4", "lemma31.f5")),
    ("prop32", check_prop32,
     ("prop32.i", "prop32.ii", "prop32.iii", "prop32.f6", "prop32.iv", "prop32.v", "prop32.f7",
      "prop32.vi", "prop32.f8")),
    ("prop33", check_prop33, ("prop33.f9", "prop33.equiv", "prop33.remark")),
    ("dim3", check_dim3_pipeline,
     ("eq9.reconstruction", "eq10.q_xi", "eq11.l_from_q", "eq12.phi_l", "eq13.l_h", "eq14.l_phi2",
      "eq15.q_form", "eq17.q_derivative", "eq19.curvature", "eq20.r_xi", "lemma41.nabla_xi_h",
      "lemma41.nabla_xi_l", "lemma41.nabla_xi_q", "lemma41.nabla_xi_r", "lemma41.trl_constant")),
    ("prop43", check_prop43,
     ("eq81.a_plus_b", "knullity.k_trl", "prop42.equiv", "prop43.equiv", "eq22.r_xi_from_q")),
    ("eq23", check_eq23_24,
     ("eq23.ricci", "eq23.einstein_scal", "eq24.curvature", "eq24_1.a_plus_b", "eq24_2.scal")),
    ("phisym", check_phi_symmetry, ("phisym.local", "phisym.theorem")),
    ("flat", lambda p: [check_flatness_remark(p)], ("remark42.flat",)),
    ("oracle", bianchi_oracle,
     ("connection.torsion_free", "connection.metric_compat", "bianchi.antisym", "bianchi.pair_sym",
      "bianchi.first", "bianchi.second", "bianchi.contracted", "eq18.nabla_r_xi")),
    ("condition", lambda p: [condition_check(p, c) for c in CONDITIONS],
     tuple(f"condition.{c}" for c in CONDITIONS)),
)

# Groups run when no selection is given; condition.* checks are reached via --only or `solve`.
DEFAULT_GROUPS = tuple(name for name, _, _ in GROUPS if name != "condition")

REGISTRY: Dict[str, str] = {cid: name for name, _, ids in GROUPS for cid in ids}
ALIASES = {"paracontact": "model.paracontact", "almost-paracontact": "model.almost_paracontact"}
ALIASES.update({c: f"condition.{c}" for c in CONDITIONS if c != "paracontact"})


class UnknownCheck(KeyError):
    pass


def all_ids(include_conditions: bool = False) -> List[str]:
    return sorted(cid for cid, g in REGISTRY.items() if include_conditions or g != "condition")


def resolve(selection: Iterable[str]) -> List[str]:
    """Expand ids, aliases and group prefixes (``eq2`` selects every ``eq2.*``)."""
    out = []
    for raw in selection:
        s = raw.strip()
        if not s:
            continue
        s = ALIASES.get(s, s)
        if s in REGISTRY:
            out.append(s)
            continue
        matched = [cid for cid in REGISTRY if cid.startswith(s.rstrip(".") + ".")]
        if not matched:
            raise UnknownCheck(f"unknown check id: {raw}")
        out.extend(matched)
    return sorted(set(out))


def run_suite(spec_or_pack: AlgebraSpec | GeometryPack, only: Sequence[str] | None = None) -> List[CheckResult]:
    """Run the selected checks (all default groups when ``only`` is empty), sorted by id."""
    pack = spec_or_pack if isinstance(spec_or_pack, GeometryPack) else geometry(spec_or_pack)
    wanted = set(resolve(only)) if only else None
    results: List[CheckResult] = []
    for name, fn, ids in GROUPS:
        if wanted is None:
            if name not in DEFAULT_GROUPS:
                continue
        elif not wanted.intersection(ids):
            continue
        results.extend(r for r in fn(pack) if wanted is None or r.id in wanted)
    return sorted(results, key=lambda r: r.id)


def run_check(spec_or_pack: AlgebraSpec | GeometryPack, check_id: str) -> CheckResult:
    (cid,) = resolve([check_id]) if ALIASES.get(check_id, check_id) in REGISTRY else (None,)
    if cid is None:
        raise UnknownCheck(f"not a single check id: {check_id}")
    return run_suite(spec_or_pack, [cid])[0]
