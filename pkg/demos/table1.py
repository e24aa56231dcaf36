"""Point counts of V(f_r,h_r) and V(g_r,h_r), by stratification and by brute force."""

import time

from cyclic_mip.finitefield import field_for_order
from cyclic_mip.varieties import astar_count, brute_count, format_table1, strat_count, table1

t = time.perf_counter()
rows = table1()
print(format_table1(rows))
print(f"stratified counts in {time.perf_counter() - t:.3f} s\n")

# small rows again, point by point
for q, r in [(4, 3), (4, 4), (16, 3)]:
    F = field_for_order(q)
    t = time.perf_counter()
    fh, gh = brute_count(F, r, "fh"), brute_count(F, r, "gh")
    print(f"brute q={q:2d} r={r}: {fh} / {gh}  ({time.perf_counter() - t:.1f} s)")

print()
for q in (2, 4, 8, 16):
    F = field_for_order(q)
    print(f"q={q:2d}  |V(f_2,h_2)| = {strat_count(F, 2, 'fh'):5d} (6q^2-9q+4 = {6*q*q - 9*q + 4:5d})"
          f"  |A*| = {astar_count(F):3d}")
