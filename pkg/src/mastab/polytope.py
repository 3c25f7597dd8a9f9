"""Reflexive polytopes, height functions, the deformed dual, and chart maps.

The two players are a reflexive lattice polytope and the dual body cut out by
a height function on its lattice points. Both are stored with exact vertices,
facet data (primitive outward normals and offsets) and a full face lattice
built from tight-constraint closure. All boundary structure downstream
(stars, dual faces, projections, chart pairs) is derived from these.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property

from .lattice import (
    IntVec,
    Vec,
    affine_rank,
    as_fractions,
    dot,
    hull_facets,
    integer_kernel_basis_rational,
    kernel_lattice_basis,
    lattice_points,
    solve_in_span,
    unimodular_complement,
    vadd,
    vertex_enumeration,
    vscale,
    vsub,
)


class NotReflexiveError(ValueError):
    pass


class HeightFunctionError(ValueError):
    pass


@dataclass(frozen=True)
class Facet:
    """A facet: primitive outward normal, offset, and its vertex indices."""

    normal: IntVec
    offset: Fraction
    vertex_ids: frozenset[int]


@dataclass(frozen=True)
class Face:
    dim: int
    vertex_ids: tuple[int, ...]

    def __contains__(self, vid: int) -> bool:
        return vid in self.vertex_ids


class _PolytopeBase:
    """Shared vertex/facet/face-lattice machinery for both polytopes."""

    def __init__(self, vertices: list[Vec], facets: list[Facet]):
        self.vertices: tuple[Vec, ...] = tuple(tuple(x for x in v) for v in vertices)
        self.dim: int = len(self.vertices[0])
        self.facets: tuple[Facet, ...] = tuple(facets)

    @cached_property
    def faces_by_dim(self) -> dict[int, list[Face]]:
        """Face lattice via closure of facet vertex sets under intersection."""
        sets: set[frozenset[int]] = {f.vertex_ids for f in self.facets}
        frontier = set(sets)
        while frontier:
            new: set[frozenset[int]] = set()
            for a in frontier:
                for b in sets:
                    c = a & b
                    if c and c not in sets and c not in new:
                        new.add(c)
            sets |= new
            frontier = new
        out: dict[int, list[Face]] = {}
        for s in sets:
            d = affine_rank([self.vertices[i] for i in s])
            out.setdefault(d, []).append(Face(d, tuple(sorted(s))))
        full = Face(self.dim, tuple(range(len(self.vertices))))
        out.setdefault(self.dim, []).append(full)
        for d in out:
            out[d].sort(key=lambda f: f.vertex_ids)
        return out

    def faces(self, d: int) -> list[Face]:
        return self.faces_by_dim.get(d, [])

    def facet_vertices(self, facet_id: int) -> list[Vec]:
        return [self.vertices[i] for i in sorted(self.facets[facet_id].vertex_ids)]

    def face_for_vertex_ids(self, ids: frozenset[int]) -> Face:
        d = affine_rank([self.vertices[i] for i in ids])
        face = Face(d, tuple(sorted(ids)))
        if face not in self.faces_by_dim.get(d, []):
            raise ValueError(f"vertex set {sorted(ids)} is not a face")
        return face

    def contains(self, x: Vec) -> bool:
        return all(dot(f.normal, x) <= f.offset for f in self.facets)

    def tight_facets(self, x: Vec) -> list[int]:
        """Indices of facets whose inequality is tight at x (x must lie in P)."""
        if not self.contains(x):
            raise ValueError(f"point {x} is not in the polytope")
        return [i for i, f in enumerate(self.facets) if dot(f.normal, x) == f.offset]

    def carrier_face(self, x: Vec) -> Face | None:
        """Minimal face containing x; None when x is interior."""
        tight = self.tight_facets(x)
        if not tight:
            return None
        ids = frozenset.intersection(*(self.facets[i].vertex_ids for i in tight))
        return self.face_for_vertex_ids(ids)

    def subfacets_of(self, face: Face) -> list[Face]:
        """Maximal proper faces of the given face (its (dim-1)-faces)."""
        return [
            g for g in self.faces(face.dim - 1)
            if set(g.vertex_ids) <= set(face.vertex_ids)
        ]


class ReflexivePolytope(_PolytopeBase):
    """A reflexive polytope: all facet inequalities are <n, x> <= 1."""

    def __init__(self, vertices: list[IntVec], facets: list[Facet]):
        super().__init__(vertices, facets)

    @cached_property
    def lattice_points(self) -> tuple[IntVec, ...]:
        return tuple(lattice_points(list(self.vertices)))

    @cached_property
    def boundary_lattice_points(self) -> tuple[IntVec, ...]:
        return tuple(
            m for m in self.lattice_points
            if any(dot(f.normal, m) == f.offset for f in self.facets)
        )

    def star_facets(self, m: IntVec) -> list[int]:
        """Facets of the closed star of a boundary lattice point."""
        if m not in self.lattice_points:
            raise ValueError(f"{m} is not a lattice point of the polytope")
        tight = self.tight_facets(m)
        if not tight:
            raise ValueError(f"{m} is interior; its star is undefined")
        return tight


def build_reflexive(vertices: list[IntVec]) -> ReflexivePolytope:
    """Construct and verify a reflexive polytope from integral vertices.

    Raises NotReflexiveError when the origin is not strictly interior or some
    facet offset differs from 1.
    """
    verts = [tuple(int(x) for x in v) for v in vertices]
    for v, orig in zip(verts, vertices):
        if any(Fraction(x) != Fraction(int(x)) for x in orig):
            raise ValueError(f"vertex {orig} is not integral")
    dim = len(verts[0])
    if affine_rank(verts) != dim:
        raise ValueError("vertices do not span the ambient space")
    raw = hull_facets(verts)
    if any(c <= 0 for _, c, _ in raw):
        raise NotReflexiveError("not reflexive (origin): origin is not interior")
    if any(c != 1 for _, c, _ in raw):
        bad = [(n, c) for n, c, _ in raw if c != 1]
        raise NotReflexiveError(f"not reflexive (offset): facets with offset != 1: {bad}")
    # keep only genuine vertices: points whose tight normals span the space
    from .lattice import rank as _rank

    used = []
    for i in range(len(verts)):
        tight_normals = [n for n, c, tight in raw if i in tight]
        if tight_normals and _rank(tight_normals) == dim:
            used.append(i)
    remap = {old: new for new, old in enumerate(used)}
    keep = set(used)
    verts = [verts[i] for i in used]
    facets = [
        Facet(n, Fraction(c), frozenset(remap[i] for i in tight & keep))
        for n, c, tight in raw
    ]
    return ReflexivePolytope(verts, facets)


class HeightFunction:
    """Integral heights on the lattice points of a reflexive polytope.

    Requires h(0) = 0 and h(m) >= 1 elsewhere; the trivial height is
    identically 1 away from the origin.
    """

    def __init__(self, polytope: ReflexivePolytope, values: dict[IntVec, int]):
        pts = set(polytope.lattice_points)
        vals: dict[IntVec, int] = {}
        for m in polytope.lattice_points:
            h = values.get(m, 0 if all(x == 0 for x in m) else 1)
            if int(h) != h:
                raise HeightFunctionError(f"height at {m} must be an integer")
            vals[m] = int(h)
        for m in values:
            if tuple(m) not in pts:
                raise HeightFunctionError(f"{m} is not a lattice point of the polytope")
        origin = tuple(0 for _ in range(polytope.dim))
        if vals[origin] != 0:
            raise HeightFunctionError("h(0) must be 0")
        for m, h in vals.items():
            if m != origin and h < 1:
                raise HeightFunctionError(f"h({m}) = {h}; heights away from 0 must be >= 1")
        self.polytope = polytope
        self.values = vals

    @classmethod
    def trivial(cls, polytope: ReflexivePolytope) -> "HeightFunction":
        return cls(polytope, {})

    def __call__(self, m: IntVec) -> int:
        key = tuple(m)
        if key not in self.values:
            raise HeightFunctionError(f"{m} is not a lattice point of the polytope")
        return self.values[key]

    @property
    def is_trivial(self) -> bool:
        origin = tuple(0 for _ in range(self.polytope.dim))
        return all(h == 1 for m, h in self.values.items() if m != origin)


class HeightNotAdmissibleError(ValueError):
    """A facet of the dual body is not supported by a lattice point of the
    polytope at its height, so the m_tau bookkeeping breaks down."""


class DualPolytope(_PolytopeBase):
    """The dual body {n : <m, n> <= h(m) for all m}, with facet normals m_tau.

    Each facet's outward normal is asserted to be a lattice point of the
    primal polytope whose height equals the facet offset.
    """

    def __init__(self, vertices, facets, polytope, height):
        super().__init__(vertices, facets)
        self.polytope = polytope
        self.height = height
        self.constraints: tuple[tuple[IntVec, int], ...] = tuple(
            (m, height(m)) for m in polytope.lattice_points
            if any(x != 0 for x in m)
        )

    def contains(self, x: Vec) -> bool:
        return all(dot(m, x) <= h for m, h in self.constraints)

    def facet_for_normal(self, m_tau: IntVec) -> int:
        for i, f in enumerate(self.facets):
            if f.normal == tuple(m_tau):
                return i
        raise ValueError(f"{m_tau} is not a facet normal of the dual")


def dual_polytope(polytope: ReflexivePolytope, height: HeightFunction) -> DualPolytope:
    """Vertex and facet structure of the height-deformed dual."""
    if height.polytope is not polytope:
        raise HeightFunctionError("height function belongs to a different polytope")
    if height.is_trivial:
        # Classical polar dual: vertices are the primal facet normals, and the
        # facet dual to a primal vertex v collects the normals of facets at v.
        verts: list[Vec] = [as_fractions(f.normal) for f in polytope.facets]
        facets = []
        for vid, v in enumerate(polytope.vertices):
            tight = frozenset(
                j for j, f in enumerate(polytope.facets) if vid in f.vertex_ids
            )
            facets.append(Facet(v, Fraction(1), tight))
        return DualPolytope(verts, facets, polytope, height)
    constraints = [
        (m, Fraction(height(m)))
        for m in polytope.lattice_points
        if any(x != 0 for x in m)
    ]
    verts = vertex_enumeration(constraints)
    lattice_set = set(polytope.lattice_points)
    facets = []
    for n, c, tight in hull_facets(verts):
        if n not in lattice_set:
            raise HeightNotAdmissibleError(
                f"height not admissible for facet structure: normal {n} is not "
                "a lattice point of the polytope"
            )
        if Fraction(height(n)) != c:
            raise HeightNotAdmissibleError(
                f"height not admissible for facet structure: facet offset {c} "
                f"differs from h({n}) = {height(n)}"
            )
        facets.append(Facet(n, Fraction(c), tight))
    return DualPolytope(verts, facets, polytope, height)


WHOLE_POLYTOPE = "whole"
EMPTY_FACE = "empty"


def dual_face(m: IntVec, dual: DualPolytope):
    """The face of the dual body where <m, .> attains h(m).

    Returns a Face, or EMPTY_FACE when the maximum stays below h(m), or
    WHOLE_POLYTOPE for m = 0 (the zero functional is tight everywhere).
    """
    m = tuple(m)
    if m not in dual.polytope.lattice_points:
        raise ValueError(f"{m} is not a lattice point of the polytope")
    if all(x == 0 for x in m):
        return WHOLE_POLYTOPE
    h = dual.height(m)
    values = [dot(m, v) for v in dual.vertices]
    top = max(values)
    if top < h:
        return EMPTY_FACE
    ids = frozenset(i for i, val in enumerate(values) if val == top)
    return dual.face_for_vertex_ids(ids)


def dual_face_union_measure_ids(sigma_id: int, polytope: ReflexivePolytope,
                                dual: DualPolytope) -> list[int]:
    """Dual facet ids of {tau_m : m in sigma, tau_m a facet}.

    Lower-dimensional dual faces carry no measure and are skipped.
    """
    out = set()
    sigma = polytope.facets[sigma_id]
    for m in polytope.lattice_points:
        if any(x != 0 for x in m) and dot(m, sigma.normal) == sigma.offset:
            face = dual_face(m, dual)
            if face in (EMPTY_FACE, WHOLE_POLYTOPE):
                continue
            if face.dim == dual.dim - 1:
                out.add(dual.facet_for_normal(m))
    return sorted(out)


def project_p_sigma(n: Vec, dual: DualPolytope, sigma_id: int) -> Vec:
    """Push n along the outward normal of a primal facet until it exits the dual.

    Exact ratio test over the height constraints; the image lands on the
    union of dual faces of the facet's lattice points.
    """
    n = as_fractions(n)
    if not dual.contains(n):
        raise ValueError(f"{n} is not in the dual polytope")
    n_sigma = dual.polytope.facets[sigma_id].normal
    rho = None
    for m, h in dual.constraints:
        pace = dot(m, n_sigma)
        if pace > 0:
            bound = Fraction(h - dot(m, n), pace)
            rho = bound if rho is None else min(rho, bound)
    if rho is None:
        raise ValueError("no constraint limits the projection; dual is unbounded")
    return vadd(n, vscale(rho, as_fractions(n_sigma)))


def project_p_tau(m: Vec, dual: DualPolytope, tau_id: int) -> Vec:
    """Push m along the dual facet's normal m_tau until it exits the polytope."""
    m = as_fractions(m)
    polytope = dual.polytope
    if not polytope.contains(m):
        raise ValueError(f"{m} is not in the polytope")
    m_tau = dual.facets[tau_id].normal
    rho = None
    for f in polytope.facets:
        pace = dot(f.normal, m_tau)
        if pace > 0:
            bound = Fraction(f.offset - dot(f.normal, m), pace)
            rho = bound if rho is None else min(rho, bound)
    if rho is None:
        raise ValueError("no facet limits the projection")
    return vadd(m, vscale(rho, as_fractions(m_tau)))


@dataclass(frozen=True)
class Chart:
    """A coordinate map on one side of the pairing.

    kind "beta_sigma" maps the dual body by n -> (<m_1,n>, ..., <m_d,n>) with
    m_i generating the tangent lattice of a primal facet; "alpha_tau" is the
    mirror map on the primal side. Injectivity domains are described by the
    anchoring facet; see the chart pair constructor.
    """

    kind: str
    anchor_normal: IntVec
    basis: tuple[IntVec, ...]

    def __call__(self, x: Vec) -> Vec:
        return tuple(dot(b, x) for b in self.basis)


def chart_beta(polytope: ReflexivePolytope, sigma_id: int) -> Chart:
    basis = kernel_lattice_basis(polytope.facets[sigma_id].normal)
    return Chart("beta_sigma", polytope.facets[sigma_id].normal, tuple(basis))


def chart_alpha(dual: DualPolytope, tau_id: int) -> Chart:
    basis = kernel_lattice_basis(dual.facets[tau_id].normal)
    return Chart("alpha_tau", dual.facets[tau_id].normal, tuple(basis))


def compatible_chart_pair(polytope: ReflexivePolytope, dual: DualPolytope,
                          sigma_id: int, tau_id: int) -> tuple[Chart, Chart]:
    """Charts (alpha_tau, beta_sigma) with dual bases, so the pairing of
    chart coordinates reproduces the ambient pairing on sigma x dual and on
    polytope x tau (up to the anchored affine terms).

    Requires m_tau to lie on sigma. The dual basis is integral by the
    unimodularity of the tangent-lattice bases; a non-integral solve here
    would be an internal error, not bad input.
    """
    sigma = polytope.facets[sigma_id]
    tau = dual.facets[tau_id]
    if dot(tau.normal, sigma.normal) != sigma.offset:
        raise ValueError(f"m_tau = {tau.normal} does not lie on facet {sigma_id}")
    m_basis = kernel_lattice_basis(sigma.normal)
    n_kernel = kernel_lattice_basis(tau.normal)
    d = len(m_basis)
    pairing = [[dot(m_basis[i], n_kernel[j]) for j in range(d)] for i in range(d)]
    n_basis = []
    for j in range(d):
        rhs = tuple(1 if i == j else 0 for i in range(d))
        coeffs = solve_in_span([tuple(col) for col in zip(*pairing)], rhs)
        if coeffs is None:
            raise AssertionError("tangent pairing matrix is singular")
        vec = tuple(
            sum(c * n_kernel[k][t] for k, c in enumerate(coeffs))
            for t in range(polytope.dim)
        )
        if any(Fraction(x).denominator != 1 for x in vec):
            raise AssertionError(
                "dual tangent basis is not integral; pairing matrix not unimodular"
            )
        n_basis.append(tuple(int(x) for x in vec))
    alpha = Chart("alpha_tau", tau.normal, tuple(n_basis))
    beta = Chart("beta_sigma", sigma.normal, tuple(m_basis))
    return alpha, beta


@dataclass(frozen=True)
class SmallStarPiece:
    """SmSt(v) intersected with one facet: the facet's constraints plus the
    Euclidean bisector inequalities against every other vertex."""

    facet_id: int
    equality: tuple[IntVec, Fraction]          # <n_sigma, x> == offset
    inequalities: tuple[tuple[Vec, Fraction], ...]  # <a, x> <= b

    def contains(self, x: Vec) -> bool:
        a, b = self.equality
        if dot(a, x) != b:
            return False
        return all(dot(u, x) <= c for u, c in self.inequalities)


def small_star(polytope: ReflexivePolytope, vertex_id: int) -> list[SmallStarPiece]:
    """Pieces of the small star of a vertex: points of its star that are
    Euclidean-closest to it among all vertices (fixed integral presentation)."""
    v = polytope.vertices[vertex_id]
    pieces = []
    for i, f in enumerate(polytope.facets):
        if vertex_id not in f.vertex_ids:
            continue
        ineqs: list[tuple[Vec, Fraction]] = []
        for g in polytope.facets:
            if g is not f:
                ineqs.append((g.normal, Fraction(g.offset)))
        for wid, w in enumerate(polytope.vertices):
            if wid == vertex_id:
                continue
            # |x - v| <= |x - w|  <=>  2<w - v, x> <= <w,w> - <v,v>
            ineqs.append((vscale(2, vsub(w, v)), Fraction(dot(w, w) - dot(v, v))))
        pieces.append(SmallStarPiece(i, (f.normal, Fraction(f.offset)), tuple(ineqs)))
    return pieces


def in_small_star(pieces: list[SmallStarPiece], x: Vec) -> bool:
    return any(p.contains(x) for p in pieces)
