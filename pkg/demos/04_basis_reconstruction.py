"""Expanding a sequence in the basis c^(n) and watching the residual shrink.

The residual norm after m terms is the largest dropped coefficient, exactly.
"""

from fractions import Fraction

from fibspaces import apply_fhat_inverse, basis_sequence, reconstruct

print("c^(3) head:", [str(v) for v in basis_sequence(3, 8)])

x = apply_fhat_inverse([Fraction(1, 2 ** k) for k in range(30)])
for m in (0, 5, 10, 20):
    _, res = reconstruct(x, "c0_fhat", m)
    print(f"m={m:2d} residual = {res}")

z = apply_fhat_inverse([1 + Fraction(1, 3 ** k) for k in range(30)])
_, res = reconstruct(z, "c_fhat", 10, limit=1)
print("with limit coefficient 1, residual after 10 terms:", res)
