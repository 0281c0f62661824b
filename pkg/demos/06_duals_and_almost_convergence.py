"""Dual-set evidence and almost convergence.

Averages over long blocks tame oscillating sequences: (-1)^k averages to 0
and 0,1,0,1,... to 1/2, uniformly in the block start.
"""

from fractions import Fraction

from fibspaces import counterexample, f_lim_estimate, t_matrix
from fibspaces.classify import dual_summary
from fibspaces.fibcore import fib

a = [Fraction(1, 2 ** n * fib(n + 1) ** 2) for n in range(40)]
for name, verdict in dual_summary(a).items():
    print(f"{name:13s} {verdict.value}")

for name in ("alternating", "staircase"):
    x = counterexample(name, 256)
    v = f_lim_estimate(x, tol=1e-2)
    print(f"{name:12s} {v.verdict.value}  limit ~ {v.limit_estimate}")

grid = t_matrix(counterexample("alternating", 16), 3, 4)
for m, row in enumerate(grid):
    print(f"t_{m},n:", [str(v) for v in row])
