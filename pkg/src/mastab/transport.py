"""Discretization of the boundary measures and the transport certificate.

Each facet is triangulated in its tangent chart and subdivided edgewise; one
sample sits at each cell barycenter and carries the cell's exact share of the
facet's normalized mass. The stability certificate compares the exact optimal
cost of the transport problem restricted to the admissible support (arcs
between a primal facet and the dual faces of its lattice points) against the
unrestricted optimum: stable means the restricted problem is feasible and the
two costs agree as rationals.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .lattice import det, dot, kernel_lattice_basis, vsub
from .netsimplex import solve_transportation
from .polytope import DualPolytope, ReflexivePolytope
from .triangulate import barycenter, edgewise_subdivision, facet_triangulation
from .volume import FacetMeasure, chart_coordinates, facet_lattice_volume


@dataclass(frozen=True)
class Sample:
    point: tuple
    weight: Fraction
    facet_id: int
    chart_coords: tuple


@dataclass(frozen=True)
class SampleCloud:
    side: str                    # "A" or "B"
    level: int
    samples: tuple[Sample, ...]

    @property
    def total_weight(self) -> Fraction:
        return sum((s.weight for s in self.samples), Fraction(0))

    def facet_ids(self):
        return sorted({s.facet_id for s in self.samples})

    def by_facet(self, facet_id: int):
        return [i for i, s in enumerate(self.samples) if s.facet_id == facet_id]


def discretize_side(poly, measure: FacetMeasure, level: int, side: str) -> SampleCloud:
    """Sample a boundary at refinement level L: barycenters of the 2^L-fold
    edgewise subdivision of each facet's triangulation, exact weights."""
    if level < 0:
        raise ValueError("refinement level must be >= 0")
    r = 2 ** level
    samples = []
    for fid in range(len(poly.facets)):
        fweight = measure.weight(fid)
        if fweight == 0:
            continue
        fvol = facet_lattice_volume(poly, fid)
        basis = kernel_lattice_basis(poly.facets[fid].normal)
        base = poly.vertices[sorted(poly.facets[fid].vertex_ids)[0]]
        for simplex in facet_triangulation(poly, fid):
            pts = [poly.vertices[i] for i in simplex]
            for cell in edgewise_subdivision(pts, r):
                coords = chart_coordinates(basis, base, cell)
                edges = [vsub(c, coords[0]) for c in coords[1:]]
                vol = abs(det(edges)) if edges else Fraction(1)
                point = barycenter(cell)
                samples.append(Sample(
                    point=point,
                    weight=fweight * vol / fvol,
                    facet_id=fid,
                    chart_coords=barycenter(coords),
                ))
    return SampleCloud(side, level, tuple(samples))


@dataclass
class TransportInstance:
    """Weighted sample clouds with the pairing cost and allowed-arc structure."""

    a_cloud: SampleCloud
    b_cloud: SampleCloud
    poly: ReflexivePolytope
    dual: DualPolytope
    allowed_pairs: frozenset[tuple[int, int]] = field(init=False)  # (sigma, tau)

    def __post_init__(self):
        if self.a_cloud.total_weight != self.b_cloud.total_weight:
            raise ValueError("total masses of the two clouds differ")
        pairs = set()
        for tau_id, tau in enumerate(self.dual.facets):
            for sigma_id, sigma in enumerate(self.poly.facets):
                if dot(tau.normal, sigma.normal) == sigma.offset:
                    pairs.add((sigma_id, tau_id))
        self.allowed_pairs = frozenset(pairs)

    def cost(self, i: int, j: int) -> Fraction:
        return -Fraction(dot(self.a_cloud.samples[i].point,
                             self.b_cloud.samples[j].point))

    def arc_allowed(self, i: int, j: int) -> bool:
        return (self.a_cloud.samples[i].facet_id,
                self.b_cloud.samples[j].facet_id) in self.allowed_pairs

    def arcs(self, restricted: bool):
        na, nb = len(self.a_cloud.samples), len(self.b_cloud.samples)
        if restricted:
            return [(i, j) for i in range(na) for j in range(nb)
                    if self.arc_allowed(i, j)]
        return [(i, j) for i in range(na) for j in range(nb)]


def discretize(poly: ReflexivePolytope, dual: DualPolytope, mu: FacetMeasure,
               nu: FacetMeasure, level: int) -> TransportInstance:
    a_cloud = discretize_side(poly, mu, level, "A")
    b_cloud = discretize_side(dual, nu, level, "B")
    return TransportInstance(a_cloud, b_cloud, poly, dual)


@dataclass
class TransportPlan:
    instance: TransportInstance
    restricted: bool
    flows: dict
    objective: Fraction
    phi: tuple            # potentials on A samples, phi_i + psi_j >= <a_i, b_j>
    psi: tuple            # potentials on B samples
    pivots: int

    @property
    def support(self):
        return sorted(self.flows)

    def marginal_a(self, i: int) -> Fraction:
        return sum((f for (a, _), f in self.flows.items() if a == i), Fraction(0))

    def marginal_b(self, j: int) -> Fraction:
        return sum((f for (_, b), f in self.flows.items() if b == j), Fraction(0))


@dataclass
class InfeasibleRestriction:
    """Witness that no coupling lives on the allowed arcs: a set of dual
    facets whose demand exceeds the mass of the primal facets allowed to
    serve them. singleton_witnesses lists every single dual facet that is a
    violating cut on its own (the facet-level structural obstruction)."""

    dual_facet_ids: tuple[int, ...]
    primal_facet_ids: tuple[int, ...]
    demand: Fraction
    allowed_supply: Fraction
    singleton_witnesses: tuple = ()


def solve_ot(inst: TransportInstance, restrict_to_allowed: bool,
             pivot: str = "best"):
    """Exact optimal plan, or an InfeasibleRestriction witness.

    Potentials are recovered from the network-simplex duals and canonicalized
    by one c-transform round over the instance's arc set, so phi = psi^c and
    psi = phi^c hold sample-wise and the dual objective matches the optimal
    cost exactly.
    """
    a, b = inst.a_cloud.samples, inst.b_cloud.samples
    arcs = inst.arcs(restrict_to_allowed)
    res = solve_transportation(
        [s.weight for s in a], [s.weight for s in b], inst.cost, arcs, pivot)
    if res.status == "infeasible":
        bad_j, allowed_i = res.violated_cut
        tau_ids = tuple(sorted({b[j].facet_id for j in bad_j}))
        sigma_ids = tuple(sorted({a[i].facet_id for i in allowed_i}))
        singles = []
        for tau_id in range(len(inst.dual.facets)):
            demand = sum((s.weight for s in b if s.facet_id == tau_id), Fraction(0))
            feeders = {s_id for (s_id, t_id) in inst.allowed_pairs if t_id == tau_id}
            supply = sum((s.weight for s in a if s.facet_id in feeders), Fraction(0))
            if demand > supply:
                singles.append((tau_id, demand, supply))
        return InfeasibleRestriction(
            tau_ids, sigma_ids,
            demand=sum((b[j].weight for j in bad_j), Fraction(0)),
            allowed_supply=sum((a[i].weight for i in allowed_i), Fraction(0)),
            singleton_witnesses=tuple(singles),
        )
    psi0 = [-x for x in res.v]
    phi, psi = _ctransform_round(inst, arcs, psi0)
    plan = TransportPlan(inst, restrict_to_allowed, res.flows, res.objective,
                         tuple(phi), tuple(psi), res.pivots)
    verify_plan(plan)
    return plan


def _ctransform_round(inst, arcs, psi0):
    """phi = psi0^c then psi = phi^c, both over the given arc set."""
    na, nb = len(inst.a_cloud.samples), len(inst.b_cloud.samples)
    arcs_of_a = [[] for _ in range(na)]
    arcs_of_b = [[] for _ in range(nb)]
    for (i, j) in arcs:
        arcs_of_a[i].append(j)
        arcs_of_b[j].append(i)
    pair = lambda i, j: Fraction(dot(inst.a_cloud.samples[i].point,
                                     inst.b_cloud.samples[j].point))
    phi = [max(pair(i, j) - psi0[j] for j in arcs_of_a[i]) for i in range(na)]
    psi = [max(pair(i, j) - phi[i] for i in arcs_of_b[j]) for j in range(nb)]
    return phi, psi


def verify_plan(plan: TransportPlan):
    """Certify optimality from scratch: exact marginals, dual feasibility on
    the arc set, complementary slackness, and matching objectives."""
    inst = plan.instance
    a, b = inst.a_cloud.samples, inst.b_cloud.samples
    for i in range(len(a)):
        if plan.marginal_a(i) != a[i].weight:
            raise AssertionError(f"marginal mismatch at A-sample {i}")
    for j in range(len(b)):
        if plan.marginal_b(j) != b[j].weight:
            raise AssertionError(f"marginal mismatch at B-sample {j}")
    for (i, j) in inst.arcs(plan.restricted):
        slack = plan.phi[i] + plan.psi[j] - Fraction(dot(a[i].point, b[j].point))
        if slack < 0:
            raise AssertionError(f"dual infeasible on arc {(i, j)}")
        if plan.flows.get((i, j), Fraction(0)) > 0 and slack != 0:
            raise AssertionError(f"complementary slackness fails on {(i, j)}")
    if dual_objective(plan) != plan.objective:
        raise AssertionError("duality gap is not zero")
    return True


def dual_objective(plan: TransportPlan) -> Fraction:
    """J = -sum phi mu - sum psi nu; equals the optimal cost at an optimum."""
    inst = plan.instance
    j_phi = sum((plan.phi[i] * s.weight for i, s in enumerate(inst.a_cloud.samples)),
                Fraction(0))
    j_psi = sum((plan.psi[j] * s.weight for j, s in enumerate(inst.b_cloud.samples)),
                Fraction(0))
    return -j_phi - j_psi


@dataclass
class CertificateResult:
    status: str                     # "stable" | "unstable" | "infeasible_restricted"
    gap: Fraction | None            # restricted minus unrestricted cost
    restricted: TransportPlan | InfeasibleRestriction
    unrestricted: TransportPlan

    @property
    def stable(self) -> bool:
        return self.status == "stable"


def stability_certificate(inst: TransportInstance, pivot: str = "best") -> CertificateResult:
    """Discrete certificate: stable iff the admissible-support problem is
    feasible and its optimal cost equals the unrestricted optimal cost."""
    unres = solve_ot(inst, restrict_to_allowed=False, pivot=pivot)
    res = solve_ot(inst, restrict_to_allowed=True, pivot=pivot)
    if isinstance(res, InfeasibleRestriction):
        return CertificateResult("infeasible_restricted", None, res, unres)
    gap = res.objective - unres.objective
    if gap < 0:
        raise AssertionError("restricted optimum beats unrestricted optimum")
    return CertificateResult("stable" if gap == 0 else "unstable", gap, res, unres)


def c_monotonicity_check(plan: TransportPlan):
    """<a' - a, b' - b> >= 0 over all pairs of support arcs; exact.

    Returns (True, None) or (False, ((i, j), (i2, j2))) with a violating
    quadruple.
    """
    a, b = plan.instance.a_cloud.samples, plan.instance.b_cloud.samples
    sup = plan.support
    for k, (i, j) in enumerate(sup):
        for (i2, j2) in sup[k + 1:]:
            gap = dot(vsub(a[i2].point, a[i].point), vsub(b[j2].point, b[j].point))
            if gap < 0:
                return False, ((i, j), (i2, j2))
    return True, None


def support_c_monotone(points_a, points_b, pairs):
    """Monotonicity check for an arbitrary coupling support (test helper)."""
    pairs = list(pairs)
    for k, (i, j) in enumerate(pairs):
        for (i2, j2) in pairs[k + 1:]:
            if dot(vsub(points_a[i2], points_a[i]),
                   vsub(points_b[j2], points_b[j])) < 0:
                return False, ((i, j), (i2, j2))
    return True, None


@dataclass(frozen=True)
class PotentialPair:
    """Canonical sample potentials with phi = psi^c and psi = phi^c."""

    phi: tuple
    psi: tuple


def kantorovich_potentials(plan: TransportPlan) -> PotentialPair:
    """The plan's potentials as a c-conjugate pair (already canonicalized in
    solve_ot; this re-derives and re-checks the conjugacy)."""
    inst = plan.instance
    arcs = inst.arcs(plan.restricted)
    phi, psi = _ctransform_round(inst, arcs, list(plan.psi))
    if tuple(phi) != plan.phi or tuple(psi) != plan.psi:
        raise AssertionError("potentials are not c-transform stable")
    return PotentialPair(tuple(phi), tuple(psi))


def check_potentials_optimal(plan: TransportPlan, phi, psi) -> bool:
    """Exact test that (phi, psi) is an optimal dual for the plan's LP."""
    inst = plan.instance
    a, b = inst.a_cloud.samples, inst.b_cloud.samples
    for (i, j) in inst.arcs(plan.restricted):
        if phi[i] + psi[j] < Fraction(dot(a[i].point, b[j].point)):
            return False
    j_val = -sum(phi[i] * a[i].weight for i in range(len(a))) \
            - sum(psi[j] * b[j].weight for j in range(len(b)))
    return j_val == plan.objective


def optimal_potential_ensemble(plan: TransportPlan, rounds: int = 1,
                               cap: int = 64) -> list[tuple]:
    """Representative optimal potentials spanning the dual degeneracy.

    The tight-arc graph of an optimal potential splits into mass-balanced
    components whose relative dual constants are only pinned to an interval
    by the cross-component slacks. Shifting one component to an interval
    endpoint yields another optimal potential where new arcs become tight,
    so iterating the construction walks along the optimal dual face. The
    ensemble collects the potentials visited in a few such rounds; a chart
    assignment that varies across it reflects genuine ambiguity of the
    discrete Kantorovich potential.
    """
    inst = plan.instance
    a, b = inst.a_cloud.samples, inst.b_cloud.samples
    arcs = inst.arcs(plan.restricted)
    m = len(a)
    pairing = {(i, j): Fraction(dot(a[i].point, b[j].point)) for (i, j) in arcs}

    def extreme_shifts(phi, psi):
        slack = {(i, j): phi[i] + psi[j] - pairing[(i, j)] for (i, j) in arcs}
        parent = {}

        def find(x):
            root = x
            while parent.get(root, root) != root:
                root = parent[root]
            while parent.get(x, x) != x:
                parent[x], x = root, parent[x]
            return root

        for (i, j), s in slack.items():
            if s == 0:
                ri, rj = find(i), find(m + j)
                if ri != rj:
                    parent[ri] = rj
        comps: dict[int, list[int]] = {}
        for node in list(range(m)) + [m + j for j in range(len(b))]:
            comps.setdefault(find(node), []).append(node)
        if len(comps) == 1:
            return []
        out = []
        for nodes in comps.values():
            node_set = set(nodes)
            mass_a = sum((a[i].weight for i in nodes if i < m), Fraction(0))
            mass_b = sum((b[n - m].weight for n in nodes if n >= m), Fraction(0))
            if mass_a != mass_b:
                raise AssertionError("tight component is not mass balanced")
            lo = None  # delta >= -min slack on arcs leaving the A side
            hi = None  # delta <= min slack on arcs entering the B side
            for (i, j), s in slack.items():
                in_a, in_b = i in node_set, (m + j) in node_set
                if in_a and not in_b:
                    lo = s if lo is None else min(lo, s)
                elif in_b and not in_a:
                    hi = s if hi is None else min(hi, s)
            for delta in {-(lo if lo is not None else Fraction(0)),
                          hi if hi is not None else Fraction(0)}:
                if delta == 0:
                    continue
                phi2 = tuple(
                    phi[i] + delta if i in node_set else phi[i] for i in range(m)
                )
                psi2 = tuple(
                    psi[j] - delta if (m + j) in node_set else psi[j]
                    for j in range(len(b))
                )
                if check_potentials_optimal(plan, phi2, psi2):
                    out.append((phi2, psi2))
        return out

    seen = {plan.phi}
    ensemble = [plan.phi]
    frontier = [(plan.phi, plan.psi)]
    for _ in range(rounds):
        new_frontier = []
        for phi, psi in frontier:
            for phi2, psi2 in extreme_shifts(phi, psi):
                if phi2 not in seen:
                    seen.add(phi2)
                    ensemble.append(phi2)
                    new_frontier.append((phi2, psi2))
                if len(ensemble) >= cap:
                    return ensemble
        if not new_frontier:
            break
        frontier = new_frontier
    return ensemble
