"""Canonical triangulations and edgewise subdivision of faces.

The pulling triangulation cones each face from its smallest-index vertex over
the triangulations of the subfaces avoiding it. Pulling orders are global, so
the induced triangulations agree on shared faces; meshes built facet by facet
are conforming across the whole boundary complex.

Edgewise subdivision follows the Kuhn/Freudenthal scheme: in the order-simplex
model, the r-fold subdivision consists of the unit-grid Kuhn simplices whose
vertices stay weakly decreasing. All r^d cells have equal volume.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import permutations, product

from .lattice import Vec, vadd, vscale, vsub


def pulling_triangulation(poly, face) -> list[tuple[int, ...]]:
    """Triangulate a face of a polytope into simplices of vertex-index tuples."""
    if face.dim == 0:
        return [face.vertex_ids]
    star = min(face.vertex_ids)
    simplices = []
    for sub in poly.subfacets_of(face):
        if star in sub.vertex_ids:
            continue
        for s in pulling_triangulation(poly, sub):
            simplices.append(tuple(sorted((star,) + s)))
    return sorted(simplices)


def facet_triangulation(poly, facet_id: int) -> list[tuple[int, ...]]:
    face = poly.face_for_vertex_ids(poly.facets[facet_id].vertex_ids)
    return pulling_triangulation(poly, face)


def edgewise_subdivision(simplex: list[Vec], r: int) -> list[list[Vec]]:
    """Subdivide a d-simplex into r^d equal-volume cells (exact rational)."""
    if r < 1:
        raise ValueError("subdivision parameter must be >= 1")
    d = len(simplex) - 1
    if d == 0:
        return [[tuple(simplex[0])]]
    edges = [vsub(simplex[k + 1], simplex[k]) for k in range(d)]

    def to_ambient(y):
        p = tuple(simplex[0])
        for k in range(d):
            if y[k]:
                p = vadd(p, vscale(Fraction(y[k], r), edges[k]))
        return p

    cells = []
    for g in product(range(r), repeat=d):
        for pi in permutations(range(d)):
            ys = [list(g)]
            ok = True
            for step in pi:
                nxt = ys[-1].copy()
                nxt[step] += 1
                ys.append(nxt)
            for y in ys:
                if any(y[k] < y[k + 1] for k in range(d - 1)) or y[0] > r:
                    ok = False
                    break
            if ok:
                cells.append([to_ambient(y) for y in ys])
    if len(cells) != r ** d:
        raise AssertionError(f"edgewise subdivision produced {len(cells)} != r^d cells")
    return cells


def barycenter(points: list[Vec]) -> Vec:
    n = len(points)
    return tuple(sum(Fraction(p[i]) for p in points) / n for i in range(len(points[0])))


def skew_point(points: list[Vec]) -> Vec:
    """A deterministic interior point with asymmetric weights 1, 2, 4, ...

    Unlike the barycenter it is not fixed by symmetries permuting the cell's
    vertices, which keeps exact ties at probe points from arising by symmetry.
    """
    weights = [1 << k for k in range(len(points))]
    total = sum(weights)
    dim = len(points[0])
    return tuple(
        sum(w * Fraction(p[i]) for w, p in zip(weights, points)) / total
        for i in range(dim)
    )
