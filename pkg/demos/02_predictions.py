"""Closed-form average trace distances as a function of the kept fraction.

For Haar-random states the answer depends only on f = N_B / N and N.  The
half-partition value (4 + pi) / (4 pi) is independent of N.  A conserved
charge pushes the curve up, and at finite total charge the half-partition
value rises to a small peak before decaying back toward 1/2.
"""
import math

import numpy as np

from tracedist import (
    Bipartition,
    ChargeModel,
    charge_half_partition_closed,
    charge_q0_trace_distance,
    discrimination_probability,
    page_trace_distance,
)

n = 20
print(f"N={n}:  N_B   f     Page    Q=0 charge")
for nb in range(1, n):
    part = Bipartition(n, nb)
    print(f"       {nb:3d}  {nb / n:.2f}  {page_trace_distance(part):.4f}  {charge_q0_trace_distance(part):.4f}")

half = page_trace_distance(Bipartition(n, n // 2))
print(f"\nhalf partition {half:.12f} vs (4+pi)/(4pi) = {(4 + math.pi) / (4 * math.pi):.12f}")
print(f"success probability for telling the two states apart: {discrimination_probability(half):.6f}")

gamma = 0.5
scale = gamma * math.sqrt(n)
print("\nhalf partition vs total charge, gamma=1/2:")
for q in np.linspace(0.25, 6, 12) * scale:
    print(f"  Q/(gamma sqrt N) = {q / scale:4.2f}  D1 = {charge_half_partition_closed(n, ChargeModel(gamma, q)):.4f}")
