"""DFJ and MTZ relaxations of the asymmetric TSP, and the shortest-path lift between them."""

from .dfj import (
    CutCertificate,
    brute_force_optimum,
    dfj_check_enumerate,
    dfj_cutting_plane,
    dfj_lhs,
    dfj_lp_bound,
    separation_mincut,
)
from .instance import (
    AtspInstance,
    FractionalPoint,
    Tour,
    check_degrees,
    convex_combination,
    parse_tsplib,
    point_from_tour,
    random_dfj_point,
    serialize_tsplib,
)
from .lift import LiftResult, ModifiedGraph, NegativeCycleError, bellman_ford, build_modified_graph, cycle_to_cut, lift_point
from .lp import Constraint, LpModel, LpSolution, Status, lp_add_constraint, lp_solve
from .mtz import Potentials, mtz_check, mtz_lp_bound, mtz_slack

__version__ = "0.1.0"
