from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

import oracles
from strategies import grids, prefixes, rationals
from fibspaces.bandops import (
    BandMatrixSpec,
    Kind,
    TruncatedMatrix,
    apply,
    apply_fhat_inverse,
    build_B_from_A,
    build_C_from_a,
    build_D_from_A,
    build_Dm_from_A,
    build_scaled_inverse,
    roundtrip_check,
)

FHAT = BandMatrixSpec.fhat()
nonzero = rationals.filter(bool)


def test_fhat_of_ones():
    assert apply(FHAT, [1, 1, 1, 1]) == [1, Fraction(-3, 2), Fraction(-5, 6), Fraction(-16, 15)]


def test_inverse_of_ones():
    assert apply_fhat_inverse([1, 1, 1]) == [1, 6, 15]


@given(st.integers(0, 30), st.integers(0, 30))
def test_entries_match_definition(n, k):
    assert FHAT.entry(n, k) == oracles.fhat_entry(n, k)
    assert BandMatrixSpec.fhat_inverse().entry(n, k) == oracles.inverse_entry(n, k)


@given(prefixes())
def test_apply_matches_dense_product(x):
    assert apply(FHAT, x) == oracles.fhat_apply(x)


@given(prefixes())
def test_inverse_matches_forward_substitution(y):
    assert apply_fhat_inverse(y) == oracles.solve_fhat(y)


@given(prefixes())
def test_roundtrip_both_ways(x):
    assert apply_fhat_inverse(apply(FHAT, x)) == x
    assert apply(FHAT, apply_fhat_inverse(x)) == x
    assert roundtrip_check(x)


@given(prefixes(), prefixes(), rationals)
def test_linearity(x, y, c):
    n = min(len(x), len(y))
    x, y = x[:n], y[:n]
    combo = [a + c * b for a, b in zip(x, y)]
    assert apply(FHAT, combo) == [a + c * b for a, b in zip(apply(FHAT, x), apply(FHAT, y))]


def test_corner_product_is_identity():
    F = TruncatedMatrix.from_spec(FHAT, 24)
    G = TruncatedMatrix.from_spec(BandMatrixSpec.fhat_inverse(), 24)
    assert F.matmul(G).entries == TruncatedMatrix.identity(24).entries
    assert G.matmul(F).entries == TruncatedMatrix.identity(24).entries


@pytest.mark.parametrize("spec,expected", [
    (BandMatrixSpec.delta(), [1, 1, 2, 3]),
    (BandMatrixSpec.delta_forward(), [-1, -2, -3]),
    (BandMatrixSpec.brs(2, 3), [2, 7, 14, 26]),
    (BandMatrixSpec.brst(1, 1, 1), [1, 3, 7, 13]),
])
def test_classical_bands(spec, expected):
    assert apply(spec, [1, 2, 4, 7]) == expected


@given(prefixes(min_size=3), nonzero, nonzero, nonzero)
def test_apply_agrees_with_corner_matvec(x, r, s, t):
    for spec in (BandMatrixSpec.delta(), BandMatrixSpec.brs(r, s),
                 BandMatrixSpec.brst(r, s, t), BandMatrixSpec.delta_forward()):
        M = TruncatedMatrix.from_spec(spec, len(x) - spec.upper, len(x))
        assert apply(spec, x) == M.matvec(x)


def test_zero_parameters_rejected():
    with pytest.raises(ValueError):
        BandMatrixSpec.brs(0, 1)
    with pytest.raises(ValueError):
        BandMatrixSpec.brst(1, 1, 0)


def test_custom_band_masks_generator():
    spec = BandMatrixSpec.custom(lambda n, k: 7, lower=1)
    assert spec.kind is Kind.CUSTOM
    assert [spec.entry(3, k) for k in range(5)] == [0, 0, 7, 7, 0]
    full = BandMatrixSpec.custom(lambda n, k: Fraction(1, n + 1))
    assert apply(full, [1, 1, 1]) == [1, 1, 1]


def test_apply_rejects_empty_and_short():
    with pytest.raises(ValueError):
        apply(FHAT, [])
    with pytest.raises(ValueError):
        apply(BandMatrixSpec.delta_forward(), [1])


def test_ragged_grid_rejected():
    with pytest.raises(ValueError):
        TruncatedMatrix(2, 2, [[1, 2], [3]])


def test_row_closed_flag():
    assert TruncatedMatrix.from_spec(FHAT, 10, 10).row_closed
    assert not TruncatedMatrix.from_spec(FHAT, 10, 9).row_closed
    assert not TruncatedMatrix.from_spec(BandMatrixSpec.delta_forward(), 10, 10).row_closed
    assert TruncatedMatrix.from_spec(BandMatrixSpec.delta_forward(), 9, 10).row_closed


@given(grids(8, 8), prefixes(8, 8), st.integers(0, 7))
def test_truncation_ladder_identity(A, x, m):
    """sum_{k<=m} a_nk x_k equals sum_{k<=m} d^(m)_nk (fhat x)_k."""
    M = TruncatedMatrix.from_rows(A)
    Dm = build_Dm_from_A(M, m)
    y = apply(FHAT, x)
    for n in range(8):
        lhs = sum((A[n][k] * x[k] for k in range(m + 1)), Fraction(0))
        rhs = sum((Dm[n, k] * y[k] for k in range(m + 1)), Fraction(0))
        assert lhs == rhs


@given(grids(5, 6), st.integers(0, 5))
def test_ladder_entries_match_definition(A, m):
    Dm = build_Dm_from_A(TruncatedMatrix.from_rows(A), m)
    for n in range(5):
        for k in range(6):
            assert Dm[n, k] == oracles.Dm_entry(A[n], m, k)


@given(grids(8, 8), prefixes(8, 8))
def test_B_rows_are_fhat_of_A(A, z):
    M = TruncatedMatrix.from_rows(A)
    B = build_B_from_A(M)
    assert B.entries == oracles.B_rows(A)
    assert B.matvec(z) == apply(FHAT, M.matvec(z))


@given(grids(6, 6))
def test_D_of_closed_corner_is_last_ladder_rung(A):
    M = TruncatedMatrix(6, 6, [list(map(Fraction, r)) for r in A], "t", True)
    D, flags = build_D_from_A(M, window=3)
    assert D.entries == build_Dm_from_A(M, 5).entries
    assert all(all(r) for r in flags)


def test_D_flags_unsettled_entries():
    grow = TruncatedMatrix.from_rows([[Fraction(1)] * 12 for _ in range(3)])
    _, flags = build_D_from_A(grow, window=4)
    assert not any(any(r) for r in flags)
    decay = TruncatedMatrix.from_rows(
        [[Fraction(1, oracles.fib(k + 1) ** 4) for k in range(60)] for _ in range(2)])
    _, flags = build_D_from_A(decay, tol=1e-6, window=4)
    assert flags[0][0] and not flags[0][59]


@given(prefixes(max_size=10))
def test_C_matrix_matches_definition(a):
    C = build_C_from_a(a)
    for n in range(len(a)):
        for k in range(len(a)):
            assert C[n, k] == oracles.C_entry(a, n, k)


@given(prefixes(max_size=10))
def test_scaled_inverse(a):
    S = build_scaled_inverse(a)
    for n in range(len(a)):
        for k in range(len(a)):
            assert S[n, k] == a[n] * oracles.inverse_entry(n, k)
