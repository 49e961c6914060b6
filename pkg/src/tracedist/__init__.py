"""Average subsystem trace distances of random pure states.

Closed-form predictions, exact combinatorics, Monte Carlo sampling and exact
diagonalization of two chaotic models, cross-checked against each other.
"""
from .predictions import (
    Bipartition,
    ChargeModel,
    charge_general_trace_distance,
    charge_half_partition_closed,
    charge_half_partition_q0_limit,
    charge_q0_trace_distance,
    discrimination_probability,
    page_trace_distance,
    schatten_n_page_average,
)
from .quantum import RngStream

__version__ = "0.1.0"
