"""Truncation evidence for matrix classes.

Each verdict is read from a finite corner, so it is evidence rather than
proof: conditions report satisfied, violated (with a witness) or
inconclusive.
"""

from fibspaces import TruncatedMatrix, classify_domain_source, classify_into_domain, classify_pair
from fibspaces.bandops import BandMatrixSpec


def show(v):
    parts = ", ".join(f"{c.value}={v.reports[c].verdict.value}" for c in v.required)
    print(f"{v.pair[0]:>7s} -> {v.pair[1]:7s} {v.overall.value:16s} {parts}")


A = TruncatedMatrix.from_spec(BandMatrixSpec.fhat(), 200)
for pair in (("c0", "c0"), ("c", "c"), ("c", "c0"), ("c0", "ell_1")):
    show(classify_pair(A, *pair))

small = TruncatedMatrix.from_spec(BandMatrixSpec.fhat(), 40)
for tgt in ("c0", "ell_inf", "ell_1", "bs"):
    show(classify_domain_source(small, "c0_fhat", tgt))

inverse = TruncatedMatrix.from_spec(BandMatrixSpec.fhat_inverse(), 40)
show(classify_into_domain(inverse, "c0", "c0_fhat"))
