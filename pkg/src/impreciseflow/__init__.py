"""Water flow on terrains whose elevations are only known up to intervals."""

from .core import (
    ImpreciseTerrain,
    InvalidRealization,
    NodeSet,
    Violation,
    check_realization,
    grid_terrain,
    lowermost,
    neighborhood,
    uppermost,
    validate,
)
from .flowsim import crossing, downstream, flow_graph, local_minima, overlay, watershed
from .fuzzy import (
    NonRegularTerrainError,
    PreconditionError,
    fuzzy_boundary_area,
    fuzzy_ridge,
    pairwise_intersections,
)
from .propagate import (
    ReachResult,
    avoiding_potential_watershed,
    potential_downstream,
    potential_watershed,
    tagged_potential_watershed,
)
from .regular import (
    MinimaReport,
    bar,
    is_imprecise_minimum,
    is_regular,
    regularize_sweep,
    regularized_terrain,
)
from .slope import SlopeDiagram, build_diagram, expand_down, expand_pws, min_elev_for_edge_flow
from .watersheds import GuardExceeded, core_watershed_bruteforce, persistent_watershed

__version__ = "0.1.0"

__all__ = [
    "ImpreciseTerrain",
    "InvalidRealization",
    "NodeSet",
    "Violation",
    "check_realization",
    "grid_terrain",
    "lowermost",
    "neighborhood",
    "uppermost",
    "validate",
    "crossing",
    "downstream",
    "flow_graph",
    "local_minima",
    "overlay",
    "watershed",
    "NonRegularTerrainError",
    "PreconditionError",
    "fuzzy_boundary_area",
    "fuzzy_ridge",
    "pairwise_intersections",
    "ReachResult",
    "avoiding_potential_watershed",
    "potential_downstream",
    "potential_watershed",
    "tagged_potential_watershed",
    "MinimaReport",
    "bar",
    "is_imprecise_minimum",
    "is_regular",
    "regularize_sweep",
    "regularized_terrain",
    "SlopeDiagram",
    "build_diagram",
    "expand_down",
    "expand_pws",
    "min_elev_for_edge_flow",
    "GuardExceeded",
    "core_watershed_bruteforce",
    "persistent_watershed",
]
