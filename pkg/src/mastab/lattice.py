"""Exact integer/rational linear algebra and low-dimensional convex geometry.

Everything here runs on Python ints and ``fractions.Fraction``; no floating
point enters any computation. Ambient dimensions are tiny (2 to 4), so plain
Gaussian elimination and exhaustive subset enumeration are the right tools.

Vectors are plain tuples. Integer vectors are tuples of ``int``, rational
vectors tuples of ``Fraction`` (or ints where exactness is automatic).
"""

from __future__ import annotations

from fractions import Fraction
from itertools import combinations, product
from math import gcd

Vec = tuple
IntVec = tuple
Halfspace = tuple  # (normal, offset): <normal, x> <= offset


class UnboundedSystemError(ValueError):
    """Halfspace system has a nonzero recession direction."""


class DegenerateSystemError(ValueError):
    """Halfspace system is empty or not full-dimensional."""


def dot(u: Vec, v: Vec):
    if len(u) != len(v):
        raise ValueError(f"dimension mismatch: {len(u)} vs {len(v)}")
    return sum(a * b for a, b in zip(u, v))


def vadd(u: Vec, v: Vec) -> Vec:
    return tuple(a + b for a, b in zip(u, v))


def vsub(u: Vec, v: Vec) -> Vec:
    return tuple(a - b for a, b in zip(u, v))


def vscale(c, v: Vec) -> Vec:
    return tuple(c * x for x in v)


def as_fractions(v: Vec) -> Vec:
    return tuple(Fraction(x) for x in v)


def is_zero(v: Vec) -> bool:
    return all(x == 0 for x in v)


def xgcd(a: int, b: int) -> tuple[int, int, int]:
    """Return (x, y, g) with x*a + y*b == g == gcd(a, b), g >= 0."""
    x, nx = 1, 0
    y, ny = 0, 1
    g, ng = a, b
    while ng:
        q = g // ng
        x, nx = nx, x - q * nx
        y, ny = ny, y - q * ny
        g, ng = ng, g - q * ng
    if g < 0:
        x, y, g = -x, -y, -g
    return x, y, g


def primitive_part(v: IntVec) -> IntVec:
    """Divide an integer vector by the gcd of its entries.

    The result points in the same direction as ``v`` and has coprime entries.
    """
    if is_zero(v):
        raise ValueError("zero vector has no primitive part")
    g = 0
    for x in v:
        g = gcd(g, abs(x))
    return tuple(x // g for x in v)


def rational_primitive(v: Vec) -> IntVec:
    """Primitive integer vector parallel (same direction) to a rational vector."""
    fr = [Fraction(x) for x in v]
    if all(x == 0 for x in fr):
        raise ValueError("zero vector has no primitive part")
    mult = 1
    for x in fr:
        mult = mult * x.denominator // gcd(mult, x.denominator)
    return primitive_part(tuple(int(x * mult) for x in fr))


def integer_kernel_basis(rows: list[IntVec], dim: int) -> list[IntVec]:
    """Basis of the saturated lattice {m in Z^dim : <r, m> = 0 for all rows r}.

    Works by unimodular column operations on an identity matrix: each row is
    gcd-reduced across the still-active columns, the single surviving nonzero
    column is retired as a pivot, and whatever stays active at the end is
    orthogonal to every row. Because only unimodular operations are used, the
    active columns generate the full kernel lattice, not a finite-index
    sublattice.
    """
    cols = [[1 if i == j else 0 for i in range(dim)] for j in range(dim)]
    active = list(range(dim))
    for row in rows:
        if len(row) != dim:
            raise ValueError("row dimension mismatch")
        nz = [c for c in active if dot(row, cols[c]) != 0]
        while len(nz) > 1:
            ci, cj = nz[0], nz[1]
            a, b = dot(row, cols[ci]), dot(row, cols[cj])
            x, y, g = xgcd(a, b)
            new_i = [x * cols[ci][k] + y * cols[cj][k] for k in range(dim)]
            new_j = [(-b // g) * cols[ci][k] + (a // g) * cols[cj][k] for k in range(dim)]
            cols[ci], cols[cj] = new_i, new_j
            nz = [c for c in active if dot(row, cols[c]) != 0]
        if nz:
            active.remove(nz[0])
    return [tuple(cols[c]) for c in active]


def unimodular_complement(n: IntVec) -> tuple[IntVec, list[IntVec]]:
    """For primitive n, return (m, basis) with <m, n> = 1 and basis spanning
    the kernel lattice of n; together they form a unimodular matrix."""
    if is_zero(n):
        raise ValueError("zero vector")
    if any(x % 1 for x in n):  # pragma: no cover - int inputs only
        raise ValueError("integer vector required")
    g = 0
    for x in n:
        g = gcd(g, abs(x))
    if g != 1:
        raise ValueError(f"vector {n} is not primitive (gcd {g})")
    dim = len(n)
    cols = [[1 if i == j else 0 for i in range(dim)] for j in range(dim)]
    nz = [c for c in range(dim) if n[c] != 0]
    while len(nz) > 1:
        ci, cj = nz[0], nz[1]
        a, b = dot(n, cols[ci]), dot(n, cols[cj])
        x, y, g = xgcd(a, b)
        new_i = [x * cols[ci][k] + y * cols[cj][k] for k in range(dim)]
        new_j = [(-b // g) * cols[ci][k] + (a // g) * cols[cj][k] for k in range(dim)]
        cols[ci], cols[cj] = new_i, new_j
        nz = [c for c in range(dim) if dot(n, cols[c]) != 0]
    pivot = nz[0]
    val = dot(n, cols[pivot])
    m = tuple(cols[pivot]) if val == 1 else tuple(-x for x in cols[pivot])
    basis = [tuple(cols[c]) for c in range(dim) if c != pivot]
    return m, basis


def kernel_lattice_basis(n: IntVec) -> list[IntVec]:
    """Generators of the lattice {m : <m, n> = 0}, for primitive n."""
    _, basis = unimodular_complement(n)
    return basis


def det(rows: list[Vec]):
    """Exact determinant of a square matrix (rows of ints or Fractions)."""
    n = len(rows)
    m = [[Fraction(x) for x in row] for row in rows]
    if any(len(row) != n for row in m):
        raise ValueError("matrix is not square")
    sign = 1
    result = Fraction(1)
    for col in range(n):
        pivot = next((r for r in range(col, n) if m[r][col] != 0), None)
        if pivot is None:
            return Fraction(0)
        if pivot != col:
            m[col], m[pivot] = m[pivot], m[col]
            sign = -sign
        result *= m[col][col]
        inv = 1 / m[col][col]
        for r in range(col + 1, n):
            factor = m[r][col] * inv
            if factor:
                m[r] = [a - factor * b for a, b in zip(m[r], m[col])]
    return sign * result


def rank(rows: list[Vec]) -> int:
    """Exact rank of a matrix given as a list of row vectors."""
    if not rows:
        return 0
    m = [[Fraction(x) for x in row] for row in rows]
    ncols = len(m[0])
    r = 0
    for col in range(ncols):
        pivot = next((i for i in range(r, len(m)) if m[i][col] != 0), None)
        if pivot is None:
            continue
        m[r], m[pivot] = m[pivot], m[r]
        inv = 1 / m[r][col]
        for i in range(len(m)):
            if i != r and m[i][col] != 0:
                factor = m[i][col] * inv
                m[i] = [a - factor * b for a, b in zip(m[i], m[r])]
        r += 1
        if r == len(m):
            break
    return r


def solve_rational(a: list[Vec], b: Vec) -> Vec | None:
    """Exact solution of the square system a @ x == b, or None when singular."""
    n = len(a)
    if any(len(row) != n for row in a) or len(b) != n:
        raise ValueError("shape mismatch in solve_rational")
    m = [[Fraction(x) for x in row] + [Fraction(b[i])] for i, row in enumerate(a)]
    for col in range(n):
        pivot = next((r for r in range(col, n) if m[r][col] != 0), None)
        if pivot is None:
            return None
        m[col], m[pivot] = m[pivot], m[col]
        inv = 1 / m[col][col]
        m[col] = [x * inv for x in m[col]]
        for r in range(n):
            if r != col and m[r][col] != 0:
                factor = m[r][col]
                m[r] = [x - factor * y for x, y in zip(m[r], m[col])]
    return tuple(m[i][n] for i in range(n))


def solve_in_span(spanning: list[Vec], target: Vec) -> Vec | None:
    """Coefficients c with sum(c_i * spanning_i) == target, or None.

    The spanning vectors need not be square; consistency is checked exactly.
    """
    if not spanning:
        return () if is_zero(target) else None
    dim = len(spanning[0])
    k = len(spanning)
    m = [[Fraction(spanning[j][i]) for j in range(k)] + [Fraction(target[i])]
         for i in range(dim)]
    pivots = []
    r = 0
    for col in range(k):
        pivot = next((i for i in range(r, dim) if m[i][col] != 0), None)
        if pivot is None:
            continue
        m[r], m[pivot] = m[pivot], m[r]
        inv = 1 / m[r][col]
        m[r] = [x * inv for x in m[r]]
        for i in range(dim):
            if i != r and m[i][col] != 0:
                factor = m[i][col]
                m[i] = [x - factor * y for x, y in zip(m[i], m[r])]
        pivots.append(col)
        r += 1
    for i in range(r, dim):
        if m[i][k] != 0:
            return None
    coeffs = [Fraction(0)] * k
    for row_idx, col in enumerate(pivots):
        coeffs[col] = m[row_idx][k]
    return tuple(coeffs)


def _recession_direction(halfspaces: list[Halfspace], dim: int) -> IntVec | None:
    """A nonzero u with <n, u> <= 0 for every normal n, if one exists.

    The recession cone {u : Au <= 0} is polyhedral; when nontrivial it
    contains either a full line (kernel of all normals) or an extreme ray
    tight on dim-1 independent normals, so candidate directions can be
    enumerated from (dim-1)-subsets.
    """
    normals = [tuple(h[0]) for h in halfspaces]
    kern = integer_kernel_basis(normals, dim)
    if kern:
        return kern[0]
    if dim == 1:
        candidates = [(1,)]
    else:
        candidates = []
        for subset in combinations(normals, dim - 1):
            basis = integer_kernel_basis(list(subset), dim)
            if len(basis) == 1:
                candidates.append(basis[0])
    seen = set()
    for u in candidates:
        for cand in (u, tuple(-x for x in u)):
            if cand in seen:
                continue
            seen.add(cand)
            if all(dot(n, cand) <= 0 for n in normals):
                return cand
    return None


def vertex_enumeration(halfspaces: list[Halfspace]) -> list[Vec]:
    """Exact vertex set of the polytope cut out by <n_i, x> <= c_i.

    Every dim-subset of constraints with an invertible normal matrix is
    solved; solutions feasible for all constraints are the vertices. The
    caller promises a bounded, full-dimensional system; violations raise
    UnboundedSystemError / DegenerateSystemError.
    """
    if not halfspaces:
        raise DegenerateSystemError("no constraints")
    dim = len(halfspaces[0][0])
    for n, _ in halfspaces:
        if is_zero(n):
            raise ValueError("zero normal in halfspace system")
    if _recession_direction(halfspaces, dim) is not None:
        raise UnboundedSystemError("system has a recession direction")
    verts: set[Vec] = set()
    for subset in combinations(range(len(halfspaces)), dim):
        a = [halfspaces[i][0] for i in subset]
        b = [halfspaces[i][1] for i in subset]
        x = solve_rational(a, b)
        if x is None:
            continue
        if all(dot(n, x) <= c for n, c in halfspaces):
            verts.add(tuple(Fraction(v) for v in x))
    if not verts:
        raise DegenerateSystemError("empty polytope")
    if affine_rank(list(verts)) < dim:
        raise DegenerateSystemError("polytope has empty interior")
    return sorted(verts)


def affine_rank(points: list[Vec]) -> int:
    """Dimension of the affine hull of a point set (0 for a single point)."""
    if len(points) <= 1:
        return 0
    base = points[0]
    return rank([vsub(p, base) for p in points[1:]])


def hull_facets(vertices: list[Vec]) -> list[tuple[IntVec, Fraction, frozenset[int]]]:
    """Facets of the full-dimensional convex hull of the given vertices.

    Returns (primitive outward normal, offset, tight vertex indices) per
    facet. Brute force over dim-subsets of vertices: any supporting
    hyperplane spanned by dim affinely independent vertices is a facet
    hyperplane of a full-dimensional polytope.
    """
    if not vertices:
        raise ValueError("no vertices")
    dim = len(vertices[0])
    if affine_rank(vertices) != dim:
        raise DegenerateSystemError("hull is not full-dimensional")
    facets: dict[tuple[IntVec, Fraction], frozenset[int]] = {}
    for subset in combinations(range(len(vertices)), dim):
        pts = [vertices[i] for i in subset]
        diffs = [vsub(p, pts[0]) for p in pts[1:]]
        normals = integer_kernel_basis_rational(diffs, dim)
        if len(normals) != 1:
            continue
        n = normals[0]
        c = Fraction(dot(n, pts[0]))
        values = [dot(n, v) for v in vertices]
        if all(val <= c for val in values):
            pass
        elif all(val >= c for val in values):
            n = tuple(-x for x in n)
            c = -c
            values = [-v for v in values]
        else:
            continue
        key = (n, c)
        if key not in facets:
            facets[key] = frozenset(i for i, val in enumerate(values) if val == c)
    return [(n, c, tight) for (n, c), tight in sorted(facets.items())]


def integer_kernel_basis_rational(rows: list[Vec], dim: int) -> list[IntVec]:
    """integer_kernel_basis for rational rows: clear denominators first."""
    cleaned = []
    for row in rows:
        fr = [Fraction(x) for x in row]
        mult = 1
        for x in fr:
            mult = mult * x.denominator // gcd(mult, x.denominator)
        cleaned.append(tuple(int(x * mult) for x in fr))
    return integer_kernel_basis(cleaned, dim)


def lattice_points(vertices: list[IntVec]) -> list[IntVec]:
    """All integer points in the convex hull of integral vertices.

    Full-dimensional hulls use a bounding-box scan filtered by the facet
    inequalities. Lower-dimensional hulls recurse into exact lattice
    coordinates on the affine span.
    """
    if not vertices:
        return []
    dim = len(vertices[0])
    uniq = sorted(set(tuple(int(x) for x in v) for v in vertices))
    if len(uniq) == 1:
        return uniq
    arank = affine_rank(uniq)
    if arank < dim:
        return _lattice_points_low_dim(uniq, dim)
    facets = hull_facets(uniq)
    lows = [min(v[i] for v in uniq) for i in range(dim)]
    highs = [max(v[i] for v in uniq) for i in range(dim)]
    out = []
    for point in product(*(range(lo, hi + 1) for lo, hi in zip(lows, highs))):
        if all(dot(n, point) <= c for n, c, _ in facets):
            out.append(point)
    return sorted(out)


def _lattice_points_low_dim(vertices: list[IntVec], dim: int) -> list[IntVec]:
    base = vertices[0]
    diffs = [vsub(v, base) for v in vertices[1:]]
    normals = integer_kernel_basis_rational(diffs, dim)
    tangent = integer_kernel_basis(normals, dim)
    coords = []
    for v in vertices:
        c = solve_in_span(tangent, vsub(v, base))
        if c is None or any(x.denominator != 1 for x in map(Fraction, c)):
            raise ValueError("vertices do not lie on a common lattice slice")
        coords.append(tuple(int(x) for x in c))
    inner = lattice_points(coords)
    out = []
    for c in inner:
        p = list(base)
        for coeff, t in zip(c, tangent):
            for i in range(dim):
                p[i] += coeff * t[i]
        out.append(tuple(p))
    return sorted(out)
