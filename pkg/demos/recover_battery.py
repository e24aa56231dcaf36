"""Rebuild the defining parameters of every small group from its fingerprint."""

import sys
import time
from collections import Counter

from cyclic_mip import field_for_order, fingerprint, format_spec, recover_parameters
from cyclic_mip.battery import battery

max_log2 = int(sys.argv[1]) if len(sys.argv) > 1 else 9
specs = battery(max_log2, min(max_log2, 6))
sources = Counter()
bad = 0
t = time.perf_counter()
for s in specs:
    fp = fingerprint(s, field_for_order(s.prime))
    sources[fp.sources.get("r_alpha_marker", "-")] += 1
    got = recover_parameters(fp)
    if got != s:
        bad += 1
        print("MISMATCH", format_spec(s), "->", got)
print(f"{len(specs)} groups, {bad} mismatches, {time.perf_counter() - t:.1f} s")
print("marker sources:", dict(sources))
