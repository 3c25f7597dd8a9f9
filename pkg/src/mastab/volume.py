"""Lattice-normalized facet volumes and the boundary measures.

A facet's volume is computed in exact coordinates on its tangent lattice:
pick a lattice point on the facet's affine span, express the vertices in a
basis of the tangent lattice, fan-triangulate, and sum |det| over simplices.
In this normalization a unimodular simplex has volume 1, matching the
simplex-counting convention used for the printed fractions; only ratios ever
enter a verdict. The boundary measures weight each facet by its share of the
total, so weights sum to exactly 1.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .lattice import det, dot, kernel_lattice_basis, solve_in_span, unimodular_complement, vscale, vsub
from .polytope import DualPolytope, ReflexivePolytope
from .triangulate import facet_triangulation


def lattice_point_on_hyperplane(normal, offset):
    """An integral point with <normal, x> == offset (normal primitive)."""
    m, _ = unimodular_complement(tuple(normal))
    off = Fraction(offset)
    if off.denominator != 1:
        raise ValueError(
            "non-integral affine lattice: no lattice point on the facet span"
        )
    return vscale(int(off), m)


def chart_coordinates(basis, base_point, points):
    coords = []
    for p in points:
        c = solve_in_span(list(basis), vsub(p, base_point))
        if c is None:
            raise ValueError(f"point {p} is not on the facet's affine span")
        coords.append(c)
    return coords


def facet_lattice_volume(poly, facet_id: int, basis=None) -> Fraction:
    """Normalized volume of a facet (unimodular simplex = 1).

    Works for both sides: the primal polytope (integral vertices) and the
    dual body (rational vertices on an integral affine hyperplane).
    """
    facet = poly.facets[facet_id]
    if basis is None:
        basis = kernel_lattice_basis(facet.normal)
    base = lattice_point_on_hyperplane(facet.normal, facet.offset)
    verts = [poly.vertices[i] for i in range(len(poly.vertices))]
    total = Fraction(0)
    for simplex in facet_triangulation(poly, facet_id):
        pts = [verts[i] for i in simplex]
        coords = chart_coordinates(basis, base, pts)
        edges = [vsub(c, coords[0]) for c in coords[1:]]
        total += abs(det(edges))
    return total


@dataclass(frozen=True)
class FacetMeasure:
    """Per-facet raw lattice volumes and normalized weights on one boundary."""

    side: str  # "A" or "B"
    raw: tuple[Fraction, ...]
    weights: tuple[Fraction, ...]

    @property
    def total(self) -> Fraction:
        return sum(self.raw, Fraction(0))

    def weight(self, facet_id: int) -> Fraction:
        return self.weights[facet_id]

    def weight_of(self, facet_ids) -> Fraction:
        return sum((self.weights[i] for i in facet_ids), Fraction(0))


def _measure(poly, side: str) -> FacetMeasure:
    raw = tuple(facet_lattice_volume(poly, i) for i in range(len(poly.facets)))
    total = sum(raw, Fraction(0))
    if total <= 0:
        raise ValueError("degenerate boundary: zero total volume")
    return FacetMeasure(side, raw, tuple(r / total for r in raw))


def measure_A(poly: ReflexivePolytope) -> FacetMeasure:
    """The normalized lattice measure on the primal boundary."""
    return _measure(poly, "A")


def measure_B(dual: DualPolytope) -> FacetMeasure:
    """The normalized lattice measure on the dual boundary."""
    return _measure(dual, "B")


def star_measure(poly: ReflexivePolytope, mu: FacetMeasure, m) -> Fraction:
    """mu of the closed star of a boundary lattice point."""
    return mu.weight_of(poly.star_facets(tuple(m)))
