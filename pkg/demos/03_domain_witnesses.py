"""Sequences that separate the domains from the classical spaces.

fib_squares is unbounded yet its transform is e^(0); ratio_sum transforms
to the Fibonacci ratios, convergent but not null; and multiplying a domain
member by a bounded sign sequence can leave the domain.
"""

from fibspaces import apply, counterexample, membership_estimate
from fibspaces.bandops import BandMatrixSpec

F = BandMatrixSpec.fhat()

x = counterexample("fib_squares", 200)
print("fib_squares head:", [str(v) for v in x[:6]])
print("  transform head:", [str(v) for v in apply(F, x)[:6]])
for tag in ("ell_inf", "c0_fhat"):
    v = membership_estimate(x, tag)
    print(f"  {tag:8s} {v.verdict.value:20s} {v.exact_witness or v.note}")

z = counterexample("ratio_sum", 101)
print("ratio_sum transform at 40:", float(apply(F, z)[40]))
for tag in ("c_fhat", "c0_fhat"):
    print(f"  {tag:8s} {membership_estimate(z, tag).verdict.value}")

u = counterexample("nonsolid_u", 101)
uv = counterexample("nonsolid_uv", 101)
print("u  in c0_fhat:", membership_estimate(u, "c0_fhat").verdict.value)
print("uv in c0_fhat:", membership_estimate(uv, "c0_fhat").verdict.value)
print("transform of uv:", [str(v) for v in apply(F, uv)[:8]])
