"""Two groups no group invariant separates, and the Arf class that does."""

from cyclic_mip import field_for_order, fingerprint, mip_verdict, parse_spec
from cyclic_mip.recover import GROUP_FIELDS

F = field_for_order(2)
pairs = [("Q p=2 [(2,2)] []", "R p=2 n=2 []"), ("Q p=2 [(2,2)] [1]", "R p=2 n=2 [1]")]

for a, b in pairs:
    A, B = parse_spec(a), parse_spec(b)
    fa, fb = fingerprint(A, F), fingerprint(B, F)
    print(f"{a}  vs  {b}")
    for k in GROUP_FIELDS:
        print(f"  {k:20s} {getattr(fa, k)!s:32s} {getattr(fb, k)}")
    print(f"  {'arf_class':20s} {fa.arf_class!s:32s} {fb.arf_class}")
    print("  verdict:", mip_verdict(A, B, F))
    print()

# over GF(4) X^2+X+1 has a root, the Arf class stops separating,
# and the variety count takes over
F4 = field_for_order(4)
A, B = parse_spec("Q p=2 [] [1,1]"), parse_spec("R p=2 n=1 [1]")
v = mip_verdict(A, B, F4)
print(A, "vs", B, "over GF(4):", v, "-", v.detail)
