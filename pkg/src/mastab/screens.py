"""Checkable stability screens: structural instability, strict semistability,
and Li admissibility, assembled into a stability report.

All comparisons are exact rationals. No tolerances exist anywhere in this
module, so the equality case (strict semistability) cannot be misclassified.
Witnesses are collected exhaustively, never first-found.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .lattice import dot
from .polytope import (
    DualPolytope,
    HeightFunction,
    ReflexivePolytope,
    dual_face_union_measure_ids,
    dual_polytope,
)
from .volume import FacetMeasure, measure_A, measure_B


@dataclass(frozen=True)
class Witness:
    """One facet-level mass comparison that failed or is tight.

    kind "dual_facet": nu(tau) vs mu(St(m_tau)) for a dual facet.
    kind "primal_facet": mu(sigma) vs nu(union of dual faces of sigma's points).
    """

    kind: str
    facet_id: int
    lhs: Fraction
    rhs: Fraction

    @property
    def relation(self) -> str:
        return ">" if self.lhs > self.rhs else "="

    def ratio_text(self) -> str:
        return f"{self.lhs} vs {self.rhs}"


@dataclass
class StabilityReport:
    structurally_unstable: bool
    structurally_strictly_semistable: bool
    li_admissible: bool | None          # None when h is not trivial
    discrete_stable: bool | None = None  # None unless the transport certificate ran
    witnesses: list[Witness] = field(default_factory=list)
    li_violation: tuple | None = None
    transport: dict | None = None

    @property
    def classification(self) -> str:
        if self.structurally_unstable:
            head = "structurally unstable"
        elif self.structurally_strictly_semistable:
            head = "structurally strictly semistable"
        else:
            head = "passes structural screens"
        notes = []
        if self.li_admissible is not None:
            notes.append("Li-admissible" if self.li_admissible else "not Li-admissible")
        if self.discrete_stable is not None:
            notes.append(
                "discrete certificate: stable" if self.discrete_stable
                else "discrete certificate: not stable"
            )
        return head + (" (" + ", ".join(notes) + ")" if notes else "")


def structural_check(poly: ReflexivePolytope, dual: DualPolytope,
                     mu: FacetMeasure, nu: FacetMeasure):
    """Evaluate both facet-level mass inequality families exactly.

    Returns (verdict, witnesses) where verdict is "unstable",
    "strictly_semistable" or "pass". A dual facet is a witness when
    nu(tau) >= mu(St(m_tau)) fails strictly or is tight; a primal facet when
    mu(sigma) >= nu(union tau_m over m in sigma) does.
    """
    witnesses: list[Witness] = []
    for tau_id, tau in enumerate(dual.facets):
        lhs = nu.weight(tau_id)
        rhs = mu.weight_of(poly.star_facets(tau.normal))
        if lhs >= rhs:
            witnesses.append(Witness("dual_facet", tau_id, lhs, rhs))
    for sigma_id in range(len(poly.facets)):
        lhs = mu.weight(sigma_id)
        rhs = nu.weight_of(dual_face_union_measure_ids(sigma_id, poly, dual))
        if lhs >= rhs:
            witnesses.append(Witness("primal_facet", sigma_id, lhs, rhs))
    if any(w.lhs > w.rhs for w in witnesses):
        return "unstable", witnesses
    if witnesses:
        return "strictly_semistable", witnesses
    return "pass", witnesses


def li_admissible(poly: ReflexivePolytope, height: HeightFunction):
    """No vertex pair (v of the polytope, w of its classical dual) may pair to 0.

    Only defined for the trivial height, where the dual's vertices are the
    primal facet normals.
    """
    if not height.is_trivial:
        raise ValueError("Li admissibility is defined for the trivial height only")
    for v in poly.vertices:
        for f in poly.facets:
            if dot(v, f.normal) == 0:
                return False, (v, f.normal)
    return True, None


def classify(poly: ReflexivePolytope, height: HeightFunction,
             run_transport=None) -> StabilityReport:
    """Run the structural screens (and Li admissibility when h is trivial).

    run_transport, when given, is a callable (poly, dual, mu, nu) -> dict
    holding at least {"stable": bool}; its result is recorded as a discrete
    certificate, never as a theorem-level verdict.
    """
    dual = dual_polytope(poly, height)
    mu = measure_A(poly)
    nu = measure_B(dual)
    verdict, witnesses = structural_check(poly, dual, mu, nu)
    li_ok = None
    li_pair = None
    if height.is_trivial:
        li_ok, li_pair = li_admissible(poly, height)
    report = StabilityReport(
        structurally_unstable=(verdict == "unstable"),
        structurally_strictly_semistable=(verdict == "strictly_semistable"),
        li_admissible=li_ok,
        witnesses=witnesses,
        li_violation=li_pair,
    )
    if run_transport is not None:
        info = run_transport(poly, dual, mu, nu)
        report.transport = info
        report.discrete_stable = info.get("stable")
    return report
