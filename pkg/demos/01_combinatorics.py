"""Non-crossing permutations, counted by brute force and by closed formulas.

The average of tr(rho_A - sigma_A)^n over random states is a sum over
non-crossing permutations weighted by cycle structure.  Here we enumerate
them for small n and compare with the Catalan, Narayana and even-Narayana
numbers.
"""
from tracedist.combinatorics import (
    catalan,
    count_by_cycle_type,
    enumerate_noncrossing,
    even_narayana,
    narayana,
)

for n in range(1, 9):
    perms = enumerate_noncrossing(n)
    by_cycles = {}
    even = {}
    for part, c in count_by_cycle_type(perms).items():
        by_cycles[part.length] = by_cycles.get(part.length, 0) + c
        if part.is_even:
            even[part.length] = even.get(part.length, 0) + c
    print(f"n={n}: {len(perms)} non-crossing (Catalan {catalan(n)})")
    print("   by cycle count:", [by_cycles.get(k, 0) for k in range(1, n + 1)])
    print("   Narayana:      ", [narayana(n, k) for k in range(1, n + 1)])
    if n % 2 == 0:
        print("   even cycles:   ", [even.get(k, 0) for k in range(1, n // 2 + 1)])
        print("   even Narayana: ", [even_narayana(n, k) for k in range(1, n // 2 + 1)])
