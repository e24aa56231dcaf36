"""The kernel of the squaring map, projected to F^4, against the variety points."""

from cyclic_mip import field_for_order, make_group, parse_spec
from cyclic_mip.groupalgebra import lambda5_kernel
from cyclic_mip.varieties import variety_points

F = field_for_order(4)
for text, pair in [("Q p=2 [] [1,1]", "fh"), ("R p=2 n=1 [1]", "gh")]:
    res = lambda5_kernel(make_group(parse_spec(text)), F)
    V = variety_points(F, res.r, pair)
    print(f"{text:18s} n={res.n} r={res.r} |kernel| = {len(res.kernel):3d}  |V({pair})| = {len(V):3d}"
          f"  equal: {res.kernel == V}")
    print("   checks:", res.checks)
