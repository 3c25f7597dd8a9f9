"""Embedded fixtures: named example polytopes and the 16 reflexive polygons.

The polygon list was produced by exhaustive enumeration of reflexive polygons
over a coordinate box, deduplicated up to GL(2,Z); the classification counts
over these 16 are pinned by the acceptance suite. Shipping them as data keeps
the classification reproducible without regenerating it.
"""

from __future__ import annotations

from .polytope import HeightFunction, ReflexivePolytope, build_reflexive

# One representative per unimodular equivalence class, minimal coordinates.
REFLEXIVE_POLYGONS: dict[str, tuple[tuple[int, int], ...]] = {
    "pg00": ((-1, -1), (1, 0), (0, 1)),
    "pg01": ((-1, -1), (1, 0), (-1, 1)),
    "pg02": ((-2, -1), (1, -1), (0, 1)),
    "pg03": ((-2, -1), (2, -1), (0, 1)),
    "pg04": ((-2, -1), (1, -1), (1, 2)),
    "pg05": ((-1, -1), (1, 0), (0, 1), (-1, 0)),
    "pg06": ((-1, 0), (0, -1), (1, 0), (0, 1)),
    "pg07": ((-1, -1), (1, -1), (0, 1), (-1, 0)),
    "pg08": ((-1, -1), (1, -1), (1, 1), (-1, 0)),
    "pg09": ((-2, -1), (1, -1), (1, 0), (0, 1)),
    "pg10": ((-2, -1), (0, -1), (1, 0), (1, 2)),
    "pg11": ((-1, -1), (1, -1), (1, 1), (-1, 1)),
    "pg12": ((-1, -1), (0, -1), (1, 0), (0, 1), (-1, 0)),
    "pg13": ((-1, -1), (1, -1), (1, 0), (0, 1), (-1, 0)),
    "pg14": ((-1, -1), (1, -1), (1, 1), (0, 1), (-1, 0)),
    "pg15": ((-1, -1), (0, -1), (1, 0), (1, 1), (0, 1), (-1, 0)),
}

NAMED_FIXTURES: dict[str, tuple[tuple[int, ...], ...]] = {
    # moment polytope of P^2 (the standard unit simplex for d = 1)
    "p2": ((2, -1), (-1, 2), (-1, -1)),
    # unit cube for d = 1 and its dual
    "square": ((1, 1), (1, -1), (-1, 1), (-1, -1)),
    "diamond": ((1, 0), (0, 1), (-1, 0), (0, -1)),
    # standard unit simplex for d = 2
    "simplex-d2": ((3, -1, -1), (-1, 3, -1), (-1, -1, 3), (-1, -1, -1)),
    # unit cube for d = 2 (dual is the octahedron)
    "cube-d2": ((1, 1, 1), (1, 1, -1), (1, -1, 1), (1, -1, -1),
                (-1, 1, 1), (-1, 1, -1), (-1, -1, 1), (-1, -1, -1)),
    # (1,2)-weighted blowup of P^2: structurally unstable with trivial height
    "blowup12": ((1, 1), (1, 0), (0, -1), (-1, 1)),
    # Kreuzer-Skarke ids 2 and 16 among three-dimensional reflexive polytopes
    "id2": ((1, 0, 0), (0, 1, 0), (0, 0, 1), (-3, -1, -1)),
    "id16": ((1, 0, 0), (0, 1, 0), (0, 0, 1), (-2, -1, -1), (-1, 1, 0)),
}

# The nontrivial height on p2 making the pair structurally unstable:
# h(m) = max(1, <(-1,4), m>, <(1,5), m>) away from the origin.
P2_EXAMPLE_HEIGHTS: dict[tuple[int, int], int] = {
    (-1, 2): 9,
    (-1, 1): 5,
    (0, 1): 5,
    (-1, 0): 1,
    (1, 0): 1,
    (-1, -1): 1,
    (0, -1): 1,
    (1, -1): 1,
    (2, -1): 1,
}


def fixture_names() -> list[str]:
    return sorted(NAMED_FIXTURES) + sorted(REFLEXIVE_POLYGONS)


def fixture_vertices(name: str) -> tuple[tuple[int, ...], ...]:
    if name in NAMED_FIXTURES:
        return NAMED_FIXTURES[name]
    if name in REFLEXIVE_POLYGONS:
        return REFLEXIVE_POLYGONS[name]
    raise KeyError(f"unknown fixture {name!r}")


def fixture_polytope(name: str) -> ReflexivePolytope:
    return build_reflexive(list(fixture_vertices(name)))


def p2_example_height(poly: ReflexivePolytope) -> HeightFunction:
    """The section-9 nontrivial height on the p2 fixture."""
    return HeightFunction(poly, dict(P2_EXAMPLE_HEIGHTS))
