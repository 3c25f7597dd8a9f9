"""mastab: exact stability analysis for real Monge-Ampere equations attached
to reflexive polytopes with height functions.

The toolkit decides solvability through a discretized optimal-transport
certificate together with exact structural screens, and probes the singular
set of the induced tropical affine structure on the dual boundary.
"""

from .polytope import (
    HeightFunction,
    ReflexivePolytope,
    build_reflexive,
    dual_polytope,
)
from .screens import StabilityReport, classify

__all__ = [
    "HeightFunction",
    "ReflexivePolytope",
    "StabilityReport",
    "build_reflexive",
    "classify",
    "dual_polytope",
]

__version__ = "0.1.0"
