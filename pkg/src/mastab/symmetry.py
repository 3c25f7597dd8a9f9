"""Lattice automorphisms of a polytope-with-height and potential averaging.

The set of optimal dual potentials is convex and invariant under any lattice
symmetry fixing the data, so averaging an optimal potential over the group
(and re-canonicalizing by a c-transform round) yields a symmetric optimal
potential. Diagnostics built on symmetric potentials inherit the exact ties
that the continuum solution has on symmetry loci.
"""

from __future__ import annotations

from fractions import Fraction

from .lattice import dot, rank, solve_rational
from .transport import TransportPlan, _ctransform_round, check_potentials_optimal


def _matvec(mat, v):
    return tuple(sum(mat[r][c] * v[c] for c in range(len(v))) for r in range(len(mat)))


def _matinv(mat):
    n = len(mat)
    cols = []
    for k in range(n):
        e = tuple(1 if i == k else 0 for i in range(n))
        col = solve_rational(mat, e)
        if col is None:
            return None
        cols.append(col)
    return [tuple(cols[c][r] for c in range(n)) for r in range(n)]


def lattice_automorphisms(poly, height) -> list[tuple[tuple[int, ...], ...]]:
    """All unimodular maps fixing the vertex set and the height function."""
    dim = len(poly.vertices[0])
    base_ids: list[int] = []
    for i in range(len(poly.vertices)):
        if rank([poly.vertices[j] for j in base_ids + [i]]) > len(base_ids):
            base_ids.append(i)
        if len(base_ids) == dim:
            break
    base = [poly.vertices[i] for i in base_ids]
    base_cols = [tuple(base[r][c] for r in range(dim)) for c in range(dim)]
    binv = _matinv(base_cols)
    vert_set = set(poly.vertices)
    autos = []

    def candidates(prefix):
        if len(prefix) == dim:
            yield list(prefix)
            return
        for w in poly.vertices:
            yield from candidates(prefix + [w])

    for images in candidates([]):
        img_cols = [tuple(images[r][c] for r in range(dim)) for c in range(dim)]
        u = [
            tuple(
                sum(img_cols[r][k] * binv[k][c] for k in range(dim))
                for c in range(dim)
            )
            for r in range(dim)
        ]
        flat = [x for row in u for x in row]
        if any(Fraction(x).denominator != 1 for x in flat):
            continue
        u = tuple(tuple(int(x) for x in row) for row in u)
        from .lattice import det as _det
        if abs(_det(list(u))) != 1:
            continue
        if {_matvec(u, v) for v in vert_set} != vert_set:
            continue
        if any(height(_matvec(u, m)) != height(m) for m in poly.lattice_points):
            continue
        autos.append(u)
    return autos


def dual_action(u):
    """The contragredient (U^T)^{-1}: the map on the dual lattice side."""
    ut = [tuple(u[r][c] for r in range(len(u))) for c in range(len(u))]
    inv = _matinv(ut)
    return tuple(tuple(x for x in row) for row in inv)


def instance_automorphisms(inst, autos=None):
    """Sample permutations (perm_a, perm_b) induced by lattice automorphisms.

    Only automorphisms that map the sample clouds onto themselves (points,
    weights, and facet masses) act on the instance; others are dropped.
    """
    poly, dual = inst.poly, inst.dual
    if autos is None:
        autos = lattice_automorphisms(poly, dual.height)
    a_index = {s.point: i for i, s in enumerate(inst.a_cloud.samples)}
    b_index = {s.point: j for j, s in enumerate(inst.b_cloud.samples)}
    perms = []
    for u in autos:
        ustar = dual_action(u)
        perm_a = []
        ok = True
        for s in inst.a_cloud.samples:
            img = tuple(Fraction(x) for x in _matvec(u, s.point))
            tgt = a_index.get(img)
            if tgt is None or inst.a_cloud.samples[tgt].weight != s.weight:
                ok = False
                break
            perm_a.append(tgt)
        if not ok:
            continue
        perm_b = []
        for s in inst.b_cloud.samples:
            img = tuple(Fraction(x) for x in _matvec(ustar, s.point))
            tgt = b_index.get(img)
            if tgt is None or inst.b_cloud.samples[tgt].weight != s.weight:
                ok = False
                break
            perm_b.append(tgt)
        if ok:
            perms.append((tuple(perm_a), tuple(perm_b)))
    return perms


def symmetrized_potentials(plan: TransportPlan):
    """Average the plan's potentials over the instance symmetry group.

    Returns (phi, psi), optimal for the same LP and invariant under every
    automorphism of the instance. Falls back to the plan's own potentials
    when no nontrivial automorphism acts.
    """
    perms = instance_automorphisms(plan.instance)
    if len(perms) <= 1:
        return plan.phi, plan.psi
    m, n = len(plan.phi), len(plan.psi)
    k = Fraction(1, len(perms))
    phi_avg = [k * sum(plan.phi[pa[i]] for pa, _ in perms) for i in range(m)]
    psi_avg = [k * sum(plan.psi[pb[j]] for _, pb in perms) for j in range(n)]
    arcs = plan.instance.arcs(plan.restricted)
    phi, psi = _ctransform_round(plan.instance, arcs, psi_avg)
    if not check_potentials_optimal(plan, phi, psi):
        raise AssertionError("symmetrized potentials lost optimality")
    return tuple(phi), tuple(psi)
