"""Dev-time enumeration of all reflexive polygons up to GL(2,Z) equivalence.

Not part of the package: its output is frozen into mastab/fixtures.py. A
polygon is reflexive iff every edge's primitive outward normal pairs to 1
with the edge. Search space: vertex subsets of primitive points in [-3,3]^2.
"""
from fractions import Fraction
from itertools import combinations
from math import gcd
import sys

sys.path.insert(0, "src")

BOX = 3
pts = [
    (x, y)
    for x in range(-BOX, BOX + 1)
    for y in range(-BOX, BOX + 1)
    if (x, y) != (0, 0) and gcd(abs(x), abs(y)) == 1
]
print(f"{len(pts)} primitive points in box")


def cross(o, a, b):
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])


def hull(points):
    """Monotone chain; returns CCW vertex list."""
    points = sorted(set(points))
    if len(points) <= 2:
        return points
    lower, upper = [], []
    for p in points:
        while len(lower) >= 2 and cross(lower[-2], lower[-1], p) <= 0:
            lower.pop()
        lower.append(p)
    for p in reversed(points):
        while len(upper) >= 2 and cross(upper[-2], upper[-1], p) <= 0:
            upper.pop()
        upper.append(p)
    return lower[:-1] + upper[:-1]


def reflexive_polygon(subset):
    """Return CCW vertices if subset is the vertex set of a reflexive polygon."""
    h = hull(subset)
    if len(h) != len(subset):
        return None
    n = len(h)
    for i in range(n):
        a, b = h[i], h[(i + 1) % n]
        # outward normal of CCW edge a->b
        nx, ny = b[1] - a[1], a[0] - b[0]
        g = gcd(abs(nx), abs(ny))
        nx, ny = nx // g, ny // g
        if nx * a[0] + ny * a[1] != 1:
            return None
        # origin strictly inside: <n, 0> = 0 < 1 holds automatically
    return tuple(h)


def edge_lengths(verts):
    n = len(verts)
    out = []
    for i in range(n):
        a, b = verts[i], verts[(i + 1) % n]
        out.append(gcd(abs(b[0] - a[0]), abs(b[1] - a[1])))
    return out


def dual_vertices(verts):
    n = len(verts)
    out = []
    for i in range(n):
        a, b = verts[i], verts[(i + 1) % n]
        nx, ny = b[1] - a[1], a[0] - b[0]
        g = gcd(abs(nx), abs(ny))
        out.append((nx // g, ny // g))
    return tuple(out)


def invariant(verts):
    el = edge_lengths(verts)
    dl = edge_lengths(dual_vertices(verts))
    return (len(verts), sum(el), tuple(sorted(el)), sum(dl), tuple(sorted(dl)))


def equivalent(p, q):
    if len(p) != len(q):
        return False
    ps, qs = set(p), set(q)
    base = None
    for i in range(len(p)):
        for j in range(len(p)):
            d = p[i][0] * p[j][1] - p[i][1] * p[j][0]
            if d != 0:
                base = (p[i], p[j], d)
                break
        if base:
            break
    assert base, "no independent vertex pair found"
    (v1, v2, d) = base
    inv = [[Fraction(v2[1], d), Fraction(-v2[0], d)],
           [Fraction(-v1[1], d), Fraction(v1[0], d)]]  # [v1 v2]^{-1} columns-wise
    for w1 in q:
        for w2 in q:
            if w1[0] * w2[1] - w1[1] * w2[0] not in (d, -d):
                continue
            # U = [w1 w2] @ [v1 v2]^{-1}
            u = [[w1[0] * inv[0][0] + w2[0] * inv[1][0],
                  w1[0] * inv[0][1] + w2[0] * inv[1][1]],
                 [w1[1] * inv[0][0] + w2[1] * inv[1][0],
                  w1[1] * inv[0][1] + w2[1] * inv[1][1]]]
            flat = [u[0][0], u[0][1], u[1][0], u[1][1]]
            if any(f.denominator != 1 for f in map(Fraction, flat)):
                continue
            det = u[0][0] * u[1][1] - u[0][1] * u[1][0]
            if det not in (1, -1):
                continue
            image = {(int(u[0][0]) * v[0] + int(u[0][1]) * v[1],
                      int(u[1][0]) * v[0] + int(u[1][1]) * v[1]) for v in ps}
            if image == qs:
                return True
    return False


def niceness(verts):
    flat = [abs(c) for v in verts for c in v]
    return (max(flat), sum(flat), sorted(verts))


found = {}
best = {}
for size in range(3, 7):
    count = 0
    for subset in combinations(pts, size):
        rp = reflexive_polygon(subset)
        if rp is None:
            continue
        count += 1
        inv = invariant(rp)
        bucket = found.setdefault(inv, [])
        hit = None
        for k, rep in enumerate(bucket):
            if equivalent(rp, rep):
                hit = k
                break
        if hit is None:
            bucket.append(rp)
            best[(inv, len(bucket) - 1)] = rp
        else:
            if niceness(rp) < niceness(best[(inv, hit)]):
                best[(inv, hit)] = rp
    print(f"size {size}: {count} reflexive polygons in box")

classes = [best[(inv, k)] for inv, bucket in found.items() for k in range(len(bucket))]
print(f"total classes: {len(classes)}")

# classify with the real package and tally Table 1
from mastab.polytope import build_reflexive, HeightFunction
from mastab.screens import classify

classes.sort(key=lambda v: (len(v), sum(edge_lengths(v)), sorted(v)))
tally = {"sss": 0, "unstable": 0, "li": 0, "sss_li": 0}
for i, verts in enumerate(classes):
    P = build_reflexive(list(verts))
    r = classify(P, HeightFunction.trivial(P))
    flag = ("U" if r.structurally_unstable else
            "S" if r.structurally_strictly_semistable else "-")
    li = "L" if r.li_admissible else "-"
    tally["unstable"] += r.structurally_unstable
    tally["sss"] += r.structurally_strictly_semistable
    tally["li"] += bool(r.li_admissible)
    tally["sss_li"] += r.structurally_strictly_semistable and bool(r.li_admissible)
    print(f"pg{i:02d} {flag}{li} b={sum(edge_lengths(verts))} verts={verts}")
print(tally)
