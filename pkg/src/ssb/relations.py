"""Cross-checks relating the hat algebra, A_d, the centre and the branching data."""

from typing import Any, Dict, Optional

import numpy as np

from ..algebra.actions import fixed_point_algebra, galois_stabilizer
from ..algebra.star_algebra import centre
from ..core.config import RUN_DEFAULTS, log
from ..core.errors import SectorLabError
from ..groups.characters import irreps
from ..groups.induction import branching_table, frobenius_check, normalizer_quotient
from .field_system import FieldSystem
from .hat_algebra import EquivariantAlgebra, build_hat_algebra


def _entry(passed: bool, **details) -> Dict[str, Any]:
    return {"passed": bool(passed), **details}


def _fixed_points_entry(fs: FieldSystem, hat: EquivariantAlgebra, tol: float) -> Dict[str, Any]:
    fixed = fixed_point_algebra(hat.algebra, hat.action, name="F^G")
    evaluated = np.array([hat.blocks(b)[0] for b in fixed.basis])
    outside = max((fs.A_d.membership_residual(e) for e in evaluated), default=0.0)
    embedded = max((fixed.membership_residual(hat.embed(a)) for a in fs.A_d.basis), default=0.0)
    rng = np.random.default_rng(RUN_DEFAULTS['seed'])
    hom = 0.0
    for _ in range(5):
        x, y = fixed.random_element(rng), fixed.random_element(rng)
        lhs = hat.blocks(x @ y)[0]
        rhs = hat.blocks(x)[0] @ hat.blocks(y)[0]
        hom = max(hom, float(np.max(np.abs(lhs - rhs))))
    residual = max(outside, embedded, hom)
    return _entry(fixed.dim == fs.A_d.dim and residual < tol,
                  dim_fixed=fixed.dim, dim_A_d=fs.A_d.dim, homomorphism_residual=hom,
                  membership_residual=max(outside, embedded))


def _centre_entry(fs: FieldSystem, hat: EquivariantAlgebra) -> Dict[str, Any]:
    dim = centre(hat.algebra).dim
    return _entry(dim == len(fs.right_cosets), dim_centre=dim, cosets=len(fs.right_cosets))


def _galois_entry(fs: FieldSystem) -> Dict[str, Any]:
    data = galois_stabilizer(fs.action, fs.A_d)
    normalizer = normalizer_quotient(fs.G, fs.H)
    return _entry(data.fixing.members == fs.H.members and data.stabilizing.members == normalizer.normalizer.members,
                  fixing=list(data.fixing.members), stabilizing=list(data.stabilizing.members),
                  normalizer=list(normalizer.normalizer.members), quotient_order=normalizer.quotient_order)


def _frobenius_entry(fs: FieldSystem) -> Dict[str, Any]:
    table = branching_table(fs.G, fs.H)
    etas = {e.label: e for e in irreps(fs.H)}
    gammas = {g.label: g for g in irreps(fs.G)}
    mismatches = []
    for eta, gamma in table.pairs():
        pair = frobenius_check(etas[eta], gammas[gamma])
        if pair.m_restrict != pair.m_induce:
            mismatches.append([eta, gamma, pair.m_restrict, pair.m_induce])
    return _entry(not mismatches, pairs=len(table.pairs()), mismatches=mismatches)


def verify_relations(fs: FieldSystem, hat: Optional[EquivariantAlgebra] = None,
                     tol: float = 1e-10) -> Dict[str, Any]:
    """Run every check and report; a failing check never aborts the others.

    fixed_points  F-hat^G equals A_d through evaluation at the identity coset
    centre        dim Z(F-hat) = |H\\G|
    galois        elements fixing A_d form H, elements preserving it form N_G(H)
    frobenius     restriction and induction multiplicities agree on every fibre pair
    """
    hat = hat or build_hat_algebra(fs)
    checks = {
        "fixed_points": lambda: _fixed_points_entry(fs, hat, tol),
        "centre": lambda: _centre_entry(fs, hat),
        "galois": lambda: _galois_entry(fs),
        "frobenius": lambda: _frobenius_entry(fs),
    }
    report: Dict[str, Any] = {}
    for name, check in checks.items():
        try:
            report[name] = check()
        except SectorLabError as e:
            report[name] = _entry(False, error=e.message, type=e.error_type)
        if not report[name]["passed"]:
            log(f"❌ Relation check '{name}' failed")
    report["passed"] = all(entry["passed"] for entry in report.values())
    return report
