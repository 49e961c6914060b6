"""The chaotic Ising chain conserves momentum, and its eigenstates feel it.

Restrict to zero momentum, take eigenstates near the middle of the spectrum
and compare their subsystem trace distances with the curve for random
states that carry a conserved charge.
"""
from tracedist import Bipartition, charge_q0_trace_distance, page_trace_distance
from tracedist.models import (
    IsingSpec,
    band_center_eigenstates,
    build_ising_hamiltonian,
    eigenstate_pair_distances,
    momentum_sectors,
    sector_hamiltonian,
)

n = 10
h = build_ising_hamiltonian(IsingSpec(n))
s0 = momentum_sectors(n)[0]
sel = band_center_eigenstates(sector_hamiltonian(h, s0), 7, basis=s0.basis)
print(f"{n} spins, zero-momentum block of dimension {s0.dim}")
for nb, f, mean, std in eigenstate_pair_distances(sel.states, range(1, n)):
    part = Bipartition(n, nb)
    print(
        f"  N_B={nb}: eigenstates {mean:.4f} +- {std:.4f}   "
        f"charge {charge_q0_trace_distance(part):.4f}   Page {page_trace_distance(part):.4f}"
    )
