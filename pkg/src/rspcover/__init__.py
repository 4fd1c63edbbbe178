"""Bloch-sphere point sets, spherical Voronoi covering radii, and the
classical-communication cost of remotely preparing a pure qubit."""

from .bloch import (
    BlochRotation,
    BlochVector,
    QubitState,
    SchmidtPair,
    SphericalCap,
    apply_rotation,
    bloch_to_state,
    cap_contains,
    fidelity,
    rotation_taking,
    state_to_bloch,
)
from .errors import (
    DegenerateInput,
    DomainError,
    EmptyPointSet,
    IndexOutOfRange,
    InvalidCount,
    NoCoverAvailable,
    RspCoverError,
)
from .pointsets import PointSet, berry_grid, dedup, platonic, spiral_points
from .protocol import RspMessage, SimulationReport, decode, encode, simulate
from .tradeoff import (
    CoverEntry,
    CoverTable,
    TradeoffPoint,
    area_lower_bound,
    baseline_table,
    build_table,
    ebits,
    min_n,
    r2_grid,
    tradeoff_curve,
)
from .voronoi import (
    CoveringResult,
    VoronoiDiagram,
    covering_radius,
    covering_radius_sampled,
    is_cover,
    voronoi,
)

__version__ = "0.1.0"
