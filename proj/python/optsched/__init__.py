"""Crossbar scheduling under reconfiguration delay.

Thin wrapper over the C++ core: schedule weights, exact matchings,
Sinkhorn scaling, Birkhoff-von-Neumann decomposition, traffic generators
and the slot-level simulator. Schedules are destination lists indexed by
source port (0-based); a self-loop entry means the port idles.
"""

from ._core import (
    birkhoff_decompose,
    brute_force_assignment,
    check_gf_admissibility,
    complete_to_permutation,
    dwell_bound,
    eval_hysteresis,
    invert_hysteresis,
    load,
    max_size_matching,
    max_weight_assignment,
    nonuniform_rates,
    run,
    sinkhorn_scale,
    top_q,
    total_queue,
    uniform_rates,
    weight,
)

__all__ = [
    "birkhoff_decompose",
    "brute_force_assignment",
    "check_gf_admissibility",
    "complete_to_permutation",
    "dwell_bound",
    "eval_hysteresis",
    "invert_hysteresis",
    "load",
    "max_size_matching",
    "max_weight_assignment",
    "nonuniform_rates",
    "run",
    "sinkhorn_scale",
    "top_q",
    "total_queue",
    "uniform_rates",
    "weight",
]

__version__ = "0.1.0"
