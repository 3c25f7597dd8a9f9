"""Singular-set diagnostics from discrete Kantorovich potentials.

A potential on the primal sample cloud induces the convex function
Psi(n) = max_i <a_i, n> - phi_i; its exact argmax sets play the role of the
c-gradient. The dual boundary is meshed (cells in open facets at resolution
K plus cells on the codimension-1 faces) and every cell is labeled with the
chart of the primal facet its gradients point into, or SINGULAR when the
gradients straddle several facets.

Singularity is detected at mesh resolution, as an over-approximation: a
codimension-1 cell is singular when the gradient sets collected from its own
probe points, from the adjacent open-facet cells, and across the whole
ensemble of optimal potentials (the discrete dual degeneracy) meet more than
one open primal facet. Gauge shifts of the potential leave all labels fixed.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .lattice import dot, vadd, vscale, vsub
from .polytope import DualPolytope, ReflexivePolytope, in_small_star, small_star
from .triangulate import (
    barycenter,
    edgewise_subdivision,
    facet_triangulation,
    pulling_triangulation,
    skew_point,
)

SINGULAR = "SINGULAR"


@dataclass(frozen=True)
class DiscretePotential:
    """phi-values on primal samples; Psi is their max-affine envelope."""

    points: tuple            # sample points on the primal boundary
    phi: tuple               # one value per sample
    facet_ids: tuple         # open primal facet carrying each sample

    @classmethod
    def from_plan(cls, plan, phi=None):
        cloud = plan.instance.a_cloud
        return cls(
            tuple(s.point for s in cloud.samples),
            tuple(phi if phi is not None else plan.phi),
            tuple(s.facet_id for s in cloud.samples),
        )

    def value(self, n) -> Fraction:
        return max(Fraction(dot(p, n)) - f for p, f in zip(self.points, self.phi))

    def argmax(self, n) -> list[int]:
        vals = [Fraction(dot(p, n)) - f for p, f in zip(self.points, self.phi)]
        top = max(vals)
        return [i for i, v in enumerate(vals) if v == top]


def c_gradient(pot: DiscretePotential, n) -> list[int]:
    """Sample indices achieving Psi(n); exact ties are kept."""
    return pot.argmax(n)


@dataclass
class MeshCell:
    dim: int
    vertices: tuple          # exact points
    facet_ids: tuple         # incident dual facets (1 for top cells, 2 on faces)
    probes: tuple = field(default=())

    @property
    def key(self):
        return frozenset(self.vertices)


@dataclass
class SingularMesh:
    dual: DualPolytope
    resolution: int
    cells: list[MeshCell]
    adjacency: list[set]
    labels: list = field(default_factory=list)

    def top_cells(self):
        d = self.dual.dim - 1
        return [i for i, c in enumerate(self.cells) if c.dim == d]

    def face_cells(self):
        d = self.dual.dim - 1
        return [i for i, c in enumerate(self.cells) if c.dim == d - 1]

    def singular_cells(self):
        return [i for i, lab in enumerate(self.labels) if lab == SINGULAR]


def build_mesh(dual: DualPolytope, resolution: int) -> SingularMesh:
    """Conforming mesh of the dual boundary: subdivided facet triangulations
    plus matching cells on every codimension-1 face."""
    if resolution < 1:
        raise ValueError("mesh resolution must be >= 1")
    d = dual.dim - 1
    cells: list[MeshCell] = []
    for fid in range(len(dual.facets)):
        for simplex in facet_triangulation(dual, fid):
            pts = [dual.vertices[i] for i in simplex]
            for cell in edgewise_subdivision(pts, resolution):
                cells.append(MeshCell(d, tuple(cell), (fid,)))
    for face in dual.faces(d - 1):
        incident = tuple(
            i for i, f in enumerate(dual.facets)
            if set(face.vertex_ids) <= f.vertex_ids
        )
        if len(incident) != 2:
            raise AssertionError("codimension-1 face not between two facets")
        for simplex in pulling_triangulation(dual, face):
            pts = [dual.vertices[i] for i in simplex]
            for cell in edgewise_subdivision(pts, resolution):
                cells.append(MeshCell(d - 1, tuple(cell), incident))
    # adjacency through shared (d-1)-dimensional interfaces
    boundary_index: dict = {}
    for ci, cell in enumerate(cells):
        if cell.dim != d:
            continue
        verts = cell.vertices
        for drop in range(len(verts)):
            key = frozenset(verts[:drop] + verts[drop + 1:])
            boundary_index.setdefault(key, []).append(ci)
    adjacency: list[set] = [set() for _ in cells]
    for key, owners in boundary_index.items():
        if len(owners) == 2:
            adjacency[owners[0]].add(owners[1])
            adjacency[owners[1]].add(owners[0])
        elif len(owners) > 2:
            raise AssertionError("mesh interface shared by more than two cells")
    matched = 0
    for ci, cell in enumerate(cells):
        if cell.dim != d - 1:
            continue
        owners = boundary_index.get(cell.key, [])
        if len(owners) != 2:
            raise AssertionError("face cell does not bound exactly two facet cells")
        for o in owners:
            adjacency[ci].add(o)
            adjacency[o].add(ci)
        matched += 1
    return SingularMesh(dual, resolution, cells, adjacency)


def _cell_probes(mesh: SingularMesh):
    """Probe points per cell: a skew interior point for top cells; vertices
    plus the skew point for face cells (vertex probes catch exact ties at
    symmetry loci such as edge midpoints)."""
    for cell in mesh.cells:
        if cell.dim == mesh.dual.dim - 1:
            cell.probes = (skew_point(list(cell.vertices)),)
        else:
            cell.probes = tuple(cell.vertices) + (skew_point(list(cell.vertices)),)


def chart_labels(potentials, dual: DualPolytope, resolution: int,
                 mesh: SingularMesh | None = None) -> SingularMesh:
    """Label every mesh cell with its chart facet or SINGULAR.

    potentials: one DiscretePotential or a list (the optimal-dual ensemble).
    A cell is labeled U_sigma when the union of c-gradient sets over all its
    probes, all potentials in the ensemble, and (for codimension-1 cells) the
    probes of both adjacent open-facet cells lies in the single open primal
    facet sigma; otherwise it is SINGULAR.
    """
    if isinstance(potentials, DiscretePotential):
        potentials = [potentials]
    if mesh is None:
        mesh = build_mesh(dual, resolution)
    _cell_probes(mesh)
    d = dual.dim - 1
    facet_sets: list[set] = []
    for cell in mesh.cells:
        hit = set()
        for pot in potentials:
            for probe in cell.probes:
                hit.update(pot.facet_ids[i] for i in pot.argmax(probe))
        facet_sets.append(hit)
    labels = []
    for ci, cell in enumerate(mesh.cells):
        hit = set(facet_sets[ci])
        if cell.dim == d - 1:
            for other in mesh.adjacency[ci]:
                if mesh.cells[other].dim == d:
                    hit |= facet_sets[other]
        labels.append(SINGULAR if len(hit) != 1 else ("U", hit.pop()))
    mesh.labels = labels
    return mesh


def connectivity(mesh: SingularMesh):
    """Connected components of the non-SINGULAR cells under mesh adjacency.

    Returns (component count, assignment) with -1 marking singular cells.
    """
    if not mesh.labels:
        raise ValueError("mesh has no labels; run chart_labels first")
    n = len(mesh.cells)
    assign = [-1] * n
    comp = 0
    for start in range(n):
        if mesh.labels[start] == SINGULAR or assign[start] != -1:
            continue
        stack = [start]
        assign[start] = comp
        while stack:
            node = stack.pop()
            for other in mesh.adjacency[node]:
                if mesh.labels[other] == SINGULAR or assign[other] != -1:
                    continue
                assign[other] = comp
                stack.append(other)
        comp += 1
    return comp, assign


def T_map(pot: DiscretePotential, m, candidates):
    """argmax_b <m, b> - Psi(b) over candidate points.

    Returns (index, tie_flag); ties are broken toward the lexicographically
    smallest point so pushforward statistics are reproducible.
    """
    best_val = None
    best_idx = None
    tie = False
    for idx, b in enumerate(candidates):
        val = Fraction(dot(m, b)) - pot.value(b)
        if best_val is None or val > best_val:
            best_val, best_idx, tie = val, idx, False
        elif val == best_val:
            tie = True
            if tuple(candidates[idx]) < tuple(candidates[best_idx]):
                best_idx = idx
    return best_idx, tie


@dataclass
class PushforwardReport:
    level_probes: int
    facet_masses: dict          # dual facet id -> pushed mass
    facet_tv: Fraction          # half the l1 distance to nu's facet weights
    cell_tv: Fraction           # same against per-cell shares of nu
    ties: int


def pushforward_residual(pot: DiscretePotential, poly: ReflexivePolytope,
                         dual: DualPolytope, mu, nu, probe_resolution: int,
                         mesh_resolution: int) -> PushforwardReport:
    """Push a deterministic probe grid on the primal boundary through the
    transport map and compare the arriving masses with nu, exactly.

    Probes live at the skew points of an edgewise-subdivided triangulation of
    each primal facet (off symmetry axes, so exact ties cannot be forced by a
    mirror symmetry); targets are the barycenters of the dual mesh cells in
    the facets admissible for the probe's facet.
    """
    from .volume import chart_coordinates, facet_lattice_volume
    from .lattice import det, kernel_lattice_basis

    mesh = build_mesh(dual, mesh_resolution)
    d = dual.dim - 1
    top = mesh.top_cells()
    cell_points = {ci: barycenter(list(mesh.cells[ci].vertices)) for ci in top}
    allowed_cells: dict[int, list[int]] = {}
    for sigma_id, sigma in enumerate(poly.facets):
        taus = {
            tau_id for tau_id, tau in enumerate(dual.facets)
            if dot(tau.normal, sigma.normal) == sigma.offset
        }
        allowed_cells[sigma_id] = [
            ci for ci in top if mesh.cells[ci].facet_ids[0] in taus
        ]
    facet_mass = {tau_id: Fraction(0) for tau_id in range(len(dual.facets))}
    cell_mass = {ci: Fraction(0) for ci in top}
    ties = 0
    for sigma_id in range(len(poly.facets)):
        fvol = facet_lattice_volume(poly, sigma_id)
        basis = kernel_lattice_basis(poly.facets[sigma_id].normal)
        base = poly.vertices[sorted(poly.facets[sigma_id].vertex_ids)[0]]
        weight_sigma = mu.weight(sigma_id)
        cand = allowed_cells[sigma_id]
        cand_points = [cell_points[ci] for ci in cand]
        for simplex in facet_triangulation(poly, sigma_id):
            pts = [poly.vertices[i] for i in simplex]
            for cell in edgewise_subdivision(pts, probe_resolution):
                coords = chart_coordinates(basis, base, cell)
                edges = [vsub(c, coords[0]) for c in coords[1:]]
                vol = abs(det(edges)) if edges else Fraction(1)
                mass = weight_sigma * vol / fvol
                probe = skew_point(cell)
                idx, tie = T_map(pot, probe, cand_points)
                ties += tie
                target = cand[idx]
                facet_mass[mesh.cells[target].facet_ids[0]] += mass
                cell_mass[target] += mass
    facet_tv = sum(
        (abs(facet_mass[t] - nu.weight(t)) for t in facet_mass), Fraction(0)
    ) / 2
    cell_share = {}
    for tau_id in range(len(dual.facets)):
        members = [ci for ci in top if mesh.cells[ci].facet_ids[0] == tau_id]
        fvol = facet_lattice_volume(dual, tau_id)
        bas = kernel_lattice_basis(dual.facets[tau_id].normal)
        base = _some_facet_point(dual, tau_id)
        for ci in members:
            coords = chart_coordinates(bas, base, list(mesh.cells[ci].vertices))
            edges = [vsub(c, coords[0]) for c in coords[1:]]
            cell_share[ci] = nu.weight(tau_id) * abs(det(edges)) / fvol
    cell_tv = sum(
        (abs(cell_mass[ci] - cell_share[ci]) for ci in top), Fraction(0)
    ) / 2
    return PushforwardReport(probe_resolution, facet_mass, facet_tv, cell_tv, ties)


def _some_facet_point(dual, tau_id):
    from .volume import lattice_point_on_hyperplane

    f = dual.facets[tau_id]
    return lattice_point_on_hyperplane(f.normal, f.offset)


@dataclass
class GradientImageReport:
    """Heuristic convexity proxy for a gradient image; never a theorem."""

    tau_id: int
    chart_points: tuple
    hull_volume: Fraction
    coverage: Fraction          # fraction of hull grid points near an image point
    label: str = "HEURISTIC"


def gradient_image_convexity(pot: DiscretePotential, poly: ReflexivePolytope,
                             dual: DualPolytope, tau_id: int,
                             resolution: int = 6, grid: int = 8) -> GradientImageReport:
    """Push probe points of one dual facet through the c-gradient and measure
    how convex the chart image looks (hull volume and fill fraction)."""
    from .polytope import compatible_chart_pair
    from .volume import chart_coordinates

    tau = dual.facets[tau_id]
    sigma_id = next(
        i for i, f in enumerate(poly.facets)
        if dot(tau.normal, f.normal) == f.offset
    )
    alpha, _ = compatible_chart_pair(poly, dual, sigma_id, tau_id)
    image = set()
    for simplex in facet_triangulation(dual, tau_id):
        pts = [dual.vertices[i] for i in simplex]
        for cell in edgewise_subdivision(pts, resolution):
            for i in pot.argmax(skew_point(cell)):
                image.add(alpha(pot.points[i]))
    image = sorted(image)
    dim = len(image[0])
    hull_vol = _hull_volume(image, dim)
    cov = _coverage(image, dim, grid)
    return GradientImageReport(tau_id, tuple(image), hull_vol, cov)


def _hull_volume(points, dim) -> Fraction:
    """Lebesgue volume of a convex hull: triangulate, sum |det|/dim!."""
    from math import factorial

    from .lattice import affine_rank, det

    if affine_rank(points) < dim:
        return Fraction(0)
    total = Fraction(0)
    for simplex in _hull_simplices(points, dim):
        edges = [vsub(p, simplex[0]) for p in simplex[1:]]
        total += abs(det(edges))
    return total / factorial(dim)


def _hull_simplices(points, dim):
    """Triangulation of a full-dimensional hull as tuples of ambient points.

    Cones the first point over recursively triangulated facets; the recursion
    only supplies combinatorics, so chart distortion is irrelevant.
    """
    from .lattice import hull_facets, integer_kernel_basis_rational, solve_in_span

    points = sorted(set(tuple(Fraction(x) for x in p) for p in points))
    if dim == 1:
        return [(points[0], points[-1])]
    p0 = points[0]
    out = []
    for normal, offset, tight in hull_facets(points):
        if Fraction(dot(normal, p0)) == offset:
            continue
        face_pts = [points[i] for i in sorted(tight)]
        basis = [
            tuple(b) for b in integer_kernel_basis_rational([normal], dim)
        ]
        base = face_pts[0]
        coords = [tuple(solve_in_span(basis, vsub(p, base))) for p in face_pts]
        lift = dict(zip(coords, face_pts))
        for sub in _hull_simplices(coords, dim - 1):
            out.append((p0,) + tuple(lift[c] for c in sub))
    return out


def _coverage(image, dim, grid) -> Fraction:
    if len(image) < 2:
        return Fraction(1)
    lows = [min(p[i] for p in image) for i in range(dim)]
    highs = [max(p[i] for p in image) for i in range(dim)]
    widths = [Fraction(h - l) for l, h in zip(lows, highs)]
    if all(w == 0 for w in widths):
        return Fraction(1)
    from itertools import product as _product

    cells = list(_product(range(grid), repeat=dim))
    inside = 0
    covered = 0
    hull_checks = _hull_inequalities(image, dim)
    for cell in cells:
        pt = tuple(
            Fraction(lows[i]) + widths[i] * Fraction(2 * cell[i] + 1, 2 * grid)
            for i in range(dim)
        )
        if hull_checks is not None and not all(
            dot(n, pt) <= c for n, c in hull_checks
        ):
            continue
        inside += 1
        tol = [w / grid for w in widths]
        near = any(
            all(abs(Fraction(p[i]) - pt[i]) <= tol[i] or widths[i] == 0
                for i in range(dim))
            for p in image
        )
        covered += near
    if inside == 0:
        return Fraction(1)
    return Fraction(covered, inside)


def _hull_inequalities(points, dim):
    from .lattice import affine_rank, hull_facets

    if affine_rank(points) < dim:
        return None
    return [(n, c) for n, c, _ in hull_facets(points)]


def smst_projection_convexity_test(poly: ReflexivePolytope, vertex_id: int,
                                   trials: int, seed: int = 0):
    """Randomized midpoint test for convexity of the projected small star.

    Draws pairs in SmSt(v), projects along v, and searches the fiber of the
    midpoint exactly for a point of SmSt(v). Returns "pass", or "fail", or
    "hypothesis not satisfied" when v is not the only vertex pairing
    positively with itself's halfspace.
    """
    import random

    v = poly.vertices[vertex_id]
    for wid, w in enumerate(poly.vertices):
        if wid != vertex_id and dot(v, w) > 0:
            return "hypothesis not satisfied"
    pieces = small_star(poly, vertex_id)
    star_facets = [p.facet_id for p in pieces]
    rng = random.Random(seed)

    def sample_point():
        for _ in range(10000):
            fid = star_facets[rng.randrange(len(star_facets))]
            verts = poly.facet_vertices(fid)
            weights = [rng.randint(0, 6) for _ in verts]
            if sum(weights) == 0:
                continue
            p = tuple(
                Fraction(sum(w * Fraction(x[i]) for w, x in zip(weights, verts)),
                         sum(weights))
                for i in range(poly.dim)
            )
            # pull toward the vertex to land inside the small star
            t = Fraction(rng.randint(0, 8), 8)
            q = vadd(vscale(t, v), vscale(1 - t, p))
            if in_small_star(pieces, q):
                return q
        raise RuntimeError("sampling the small star failed")

    for _ in range(trials):
        x = sample_point()
        y = sample_point()
        mid = vscale(Fraction(1, 2), vadd(x, y))
        if not _fiber_hits_small_star(pieces, mid, v):
            return "fail"
    return "pass"


def _fiber_hits_small_star(pieces, point, direction) -> bool:
    """Exact search for s with point + s*direction in some small-star piece."""
    for piece in pieces:
        a, b = piece.equality
        pace = Fraction(dot(a, direction))
        if pace == 0:
            if Fraction(dot(a, point)) != b:
                continue
            # any s works for the equality; solve the inequalities' interval
            lo, hi = None, None
            ok = True
            for u, c in piece.inequalities:
                du = Fraction(dot(u, direction))
                rhs = Fraction(c) - Fraction(dot(u, point))
                if du == 0:
                    if rhs < 0:
                        ok = False
                        break
                elif du > 0:
                    bound = rhs / du
                    hi = bound if hi is None else min(hi, bound)
                else:
                    bound = rhs / du
                    lo = bound if lo is None else max(lo, bound)
            if ok and (lo is None or hi is None or lo <= hi):
                return True
            continue
        s = (Fraction(b) - Fraction(dot(a, point))) / pace
        candidate = vadd(point, vscale(s, direction))
        if piece.contains(candidate):
            return True
    return False
