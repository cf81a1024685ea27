"""Forcing order, symbolic dynamics and periodic-orbit tongues for shear
homeomorphisms of the torus."""

from .rationals import (
    FareyPair,
    PairCase,
    Rational,
    is_farey_neighbor,
    make_rational,
    mediant,
    parse_pair,
    parse_rational,
    rationals_between,
    weighted_mediant,
)
from .forcing import (
    ForcingElement,
    MediantTree,
    SimpleOrbit,
    SimplePair,
    forced_set,
    forces,
    forcing_chain,
    mediant_tree,
)
from .markov import (
    RectangleId,
    RectangleKind,
    SymbolicCycle,
    TransitionGraph,
    build_Onm,
    build_skeleton_graph,
    cycle_rotation_number,
    enumerate_cycles,
    label_rectangles,
    realized_rotation_numbers,
)
from .kicked import (
    LiftedPoint,
    MapParams,
    OrbitNotFound,
    PeriodicOrbit,
    Stability,
    acceleration,
    find_periodic_orbit,
    jacobian_step,
    lift_step,
    orbit_search_grid,
    step,
)
from .sweep import SweepConfig, TongueRecord, emit_csv, emit_svg, run_sweep, tip_locations

__version__ = "0.1.0"
