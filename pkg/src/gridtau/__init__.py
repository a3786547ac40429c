"""Concordance invariants tau_top, tau_bot and the tau function of links in S^3,
computed from grid diagrams."""

import warnings

# numba probes an optional TBB threading layer and warns when the system copy is old
warnings.filterwarnings("ignore", message="The TBB threading layer")

from .braid import (  # noqa: E402
    BraidWord,
    QuasipositiveWord,
    closure_components,
    expand_quasipositive,
    legendrian_tb_rot,
    parse_braid,
    parse_quasipositive,
    qp_euler_characteristic,
    seifert_matrix,
    signature,
    to_grid,
)
from .grid import (  # noqa: E402
    GridDiagram,
    commutation_move,
    components,
    connected_sum,
    mirror,
    parse_grid,
    stabilize,
    translate,
)
from .invariants import InvariantReport, braid_report, compute_report, quasipositive_report  # noqa: E402

__all__ = [
    "BraidWord", "QuasipositiveWord", "closure_components", "expand_quasipositive",
    "legendrian_tb_rot", "parse_braid", "parse_quasipositive", "qp_euler_characteristic",
    "seifert_matrix", "signature", "to_grid", "GridDiagram", "commutation_move",
    "components", "connected_sum", "mirror", "parse_grid", "stabilize", "translate",
    "InvariantReport", "braid_report", "compute_report", "quasipositive_report",
]
