"""The difference matrix and its inverse act exactly on rational prefixes."""

import random
from fractions import Fraction

from fibspaces import BandMatrixSpec, TruncatedMatrix, apply, apply_fhat_inverse

F = BandMatrixSpec.fhat()
print("fhat(1,1,1,1)      =", [str(v) for v in apply(F, [1, 1, 1, 1])])
print("inverse(1,1,1)     =", [str(v) for v in apply_fhat_inverse([1, 1, 1])])

rng = random.Random(7)
x = [Fraction(rng.randint(-9, 9), rng.randint(1, 9)) for _ in range(64)]
print("random round trip exact:", apply_fhat_inverse(apply(F, x)) == x)

corner = TruncatedMatrix.from_spec(F, 32)
inv = TruncatedMatrix.from_spec(BandMatrixSpec.fhat_inverse(), 32)
print("32x32 corner times inverse is the identity:",
      corner.matmul(inv).entries == TruncatedMatrix.identity(32).entries)

# the classical difference and band matrices use the same machinery
for spec in (BandMatrixSpec.delta(), BandMatrixSpec.brs(2, 3), BandMatrixSpec.brst(1, -1, 1)):
    print(f"{spec.name:6s}", [str(v) for v in apply(spec, [1, 2, 4, 7, 11])])
