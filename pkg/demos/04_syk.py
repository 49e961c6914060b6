"""Eigenstates of the SYK model look like random states on small subsystems.

Build the Hamiltonian for 14 Majoranas, keep the even-parity block, pick
eigenstates near the band centre and compare their pairwise subsystem
trace distances with the Page prediction for the same number of qubits.
"""
import numpy as np

from tracedist import Bipartition, RngStream, page_trace_distance
from tracedist.models import (
    SykSpec,
    band_center_eigenstates,
    build_syk_hamiltonian,
    eigenstate_pair_distances,
    even_parity_sector,
)

n_majorana = 14
rows = []
for r in range(5):
    h = even_parity_sector(build_syk_hamiltonian(SykSpec(n_majorana, RngStream(3, r))))
    sel = band_center_eigenstates(h, 10)
    n_qubits = int(np.log2(h.shape[0]))
    rows.append(eigenstate_pair_distances(sel.states, range(1, n_qubits)))

print(f"{n_majorana} Majoranas, {n_qubits} qubits in the even sector")
for i, nb in enumerate(range(1, n_qubits)):
    means = [block[i][2] for block in rows]
    print(f"  N_B={nb}: eigenstates {np.mean(means):.4f}  Page {page_trace_distance(Bipartition(n_qubits, nb)):.4f}")
