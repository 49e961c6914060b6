"""Monte Carlo check of the Page-curve prediction.

Draw pairs of random states on N qubits, trace out N_A of them and average
the trace distance of what is left.  The estimate should sit within a few
standard errors of the closed form, up to finite-size corrections of order
1/2^N.
"""
from tracedist import Bipartition, RngStream, page_trace_distance
from tracedist import charge_q0_trace_distance
from tracedist.quantum import ChargeAssignment, trace_distance_estimator

n, samples = 8, 400
print(" N_B  Monte Carlo          prediction")
for nb in range(1, n):
    part = Bipartition(n, nb)
    mean, se, _ = trace_distance_estimator(part, samples, RngStream(1, nb))
    print(f" {nb:3d}  {mean:.4f} +- {se:.4f}    {page_trace_distance(part):.4f}")

part = Bipartition(n, n // 2)
# Hamming-weight charge; zero charge relative to the middle means weight N/2
ca = ChargeAssignment.hamming(n)
mean, se, _ = trace_distance_estimator(part, samples, RngStream(2), ensemble="charge", charge=ca, q_total=n // 2)
print(f"\ncharge-eigenstate pairs at f=1/2: {mean:.4f} +- {se:.4f} (prediction {charge_q0_trace_distance(part):.4f})")
