from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

import oracles
from strategies import prefixes, rationals
from fibspaces.bandops import BandMatrixSpec, apply, apply_fhat_inverse
from fibspaces.fibcore import golden_ratio
from fibspaces.spaces import (
    MembershipVerdict,
    SpaceTag,
    Verdict,
    basis_c_minus1,
    basis_coefficients,
    basis_sequence,
    counterexample,
    f_lim_estimate,
    fhat_norm,
    membership_estimate,
    parse_space,
    reconstruct,
    t_matrix,
)

FHAT = BandMatrixSpec.fhat()
M, N, I = Verdict.MEMBER, Verdict.NON_MEMBER, Verdict.INCONCLUSIVE


def unit(n, length):
    return [Fraction(int(k == n)) for k in range(length)]


# -- norm ----------------------------------------------------------------------

def test_norm_values():
    assert fhat_norm(unit(0, 6)) == 2
    assert fhat_norm([0] * 5) == 0
    assert fhat_norm(counterexample("fib_squares", 40)) == 1


def test_norm_rejects_empty():
    with pytest.raises(ValueError):
        fhat_norm([])


@given(prefixes(), rationals)
def test_norm_is_homogeneous(x, c):
    assert fhat_norm([c * v for v in x]) == abs(c) * fhat_norm(x)


# -- named sequences -----------------------------------------------------------

def test_named_prefixes():
    assert counterexample("fib_squares", 4) == [1, 4, 9, 25]
    assert counterexample("ratio_sum", 3)[:2] == [1, 8]
    assert counterexample("unit2", 4) == [0, 0, 1, 0]
    assert counterexample("unit", 3, n=0) == [1, 0, 0]
    assert counterexample("staircase", 4) == [0, 1, 0, 1]
    assert counterexample("nonsolid_v", 3) == [-1, 1, -1]


@given(st.integers(1, 60))
def test_product_sequence(length):
    u = counterexample("nonsolid_u", length)
    v = counterexample("nonsolid_v", length)
    assert counterexample("nonsolid_uv", length) == [a * b for a, b in zip(u, v)]


def test_unknown_name():
    with pytest.raises(ValueError):
        counterexample("nope", 5)
    with pytest.raises(ValueError):
        counterexample("ones", 0)


def test_non_solid_transform():
    y = apply(FHAT, counterexample("nonsolid_uv", 101))
    for k in range(1, 101):
        assert y[k] == 2 * (-1) ** (k + 1) * oracles.fib(k) * oracles.fib(k + 1)
    assert y[0] == -1


# -- membership ----------------------------------------------------------------

def test_fib_squares_witnesses():
    x = counterexample("fib_squares", 200)
    dom = membership_estimate(x, SpaceTag.C0_FHAT)
    assert dom.verdict is M and dom.exact_witness
    assert membership_estimate(x, SpaceTag.ELL_INF).verdict is N


def test_ratio_sum_witnesses():
    x = counterexample("ratio_sum", 120)
    cf = membership_estimate(x, "c_fhat")
    assert cf.verdict is M
    assert abs(cf.limit_estimate - float(golden_ratio())) < 1e-8
    assert membership_estimate(x, "c0_fhat").verdict is N


def test_non_solid_memberships():
    u = counterexample("nonsolid_u", 101)
    uv = counterexample("nonsolid_uv", 101)
    assert membership_estimate(u, "c0_fhat").verdict is M
    assert membership_estimate(uv, "c0_fhat").verdict is N


@pytest.mark.parametrize("name,tag,verdict", [
    ("ones", "c", M), ("ones", "c0", N), ("zero", "c0", M),
    ("alternating", "c", N), ("alternating", "ell_inf", M),
    ("geometric", "ell_1", M), ("geometric", "cs", M), ("ones", "cs", N),
    ("alternating", "bs", M), ("ones", "bv1", M), ("alternating", "bv1", N),
    ("ones", "c_fhat", M), ("ones", "c0_fhat", N), ("staircase", "c_fhat", N),
    ("ones", "f", M), ("ones", "f0", N), ("zero", "fs", M),
])
def test_membership_table(name, tag, verdict):
    assert membership_estimate(counterexample(name, 64), tag).verdict is verdict


def test_slow_convergence_is_inconclusive():
    harmonic = [Fraction(1, k + 1) for k in range(64)]
    assert membership_estimate(harmonic, "c0").verdict is I


@given(st.integers(2, 9), st.integers(0, 5))
def test_geometric_decay_is_in_domain(base, shift):
    x = [Fraction(1, base ** (k + shift)) for k in range(64)]
    assert membership_estimate(x, "c0_fhat", tol=1e-8).verdict is M


def test_member_for_c_has_small_oscillation():
    v = membership_estimate(counterexample("ones", 40), "c", tol=1e-6)
    assert v.verdict is M and v.tail_oscillation < 1e-6


def test_membership_preconditions():
    with pytest.raises(ValueError):
        membership_estimate([1] * 15, "c", window=8)
    with pytest.raises(ValueError):
        membership_estimate([1] * 40, "c", window=1)
    with pytest.raises(ValueError):
        membership_estimate([1] * 40, "nonsense")


def test_witness_requires_decision():
    with pytest.raises(ValueError):
        MembershipVerdict(SpaceTag.C, Verdict.INCONCLUSIVE, None, 0.0, exact_witness="x")


def test_space_aliases():
    assert parse_space("l_inf") is SpaceTag.ELL_INF
    assert parse_space("C0_FHAT") is SpaceTag.C0_FHAT


# -- basis ---------------------------------------------------------------------

def test_basis_prefixes():
    assert basis_sequence(0, 3) == [1, 4, 9]
    assert basis_sequence(2, 3) == [0, 0, Fraction(3, 2)]
    assert basis_c_minus1(1) == [1]
    assert basis_c_minus1(2) == [1, 6]


@pytest.mark.parametrize("n", range(33))
def test_basis_maps_to_units(n):
    assert apply(FHAT, basis_sequence(n, 40)) == unit(n, 40)


def test_limit_sequence_maps_to_ones():
    assert apply(FHAT, basis_c_minus1(60)) == [1] * 60
    assert basis_c_minus1(30) == apply_fhat_inverse([1] * 30)


def test_basis_bounds():
    with pytest.raises(ValueError):
        basis_sequence(3, 3)
    with pytest.raises(ValueError):
        basis_sequence(-1, 3)
    with pytest.raises(ValueError):
        basis_c_minus1(0)


def test_finite_expansion_reconstructs_exactly():
    x = basis_sequence(3, 20)
    for m in range(3, 20):
        assert reconstruct(x, "c0_fhat", m)[1] == 0


def test_geometric_transform_residual():
    x = apply_fhat_inverse([Fraction(1, 2 ** k) for k in range(30)])
    partial, res = reconstruct(x, "c0_fhat", 10)
    assert res == Fraction(1, 2 ** 11)


def test_limit_sequence_reconstruction():
    z = basis_c_minus1(30)
    for m in (0, 5, 29):
        assert reconstruct(z, "c_fhat", m, limit=1)[1] == 0


@given(prefixes(min_size=2, max_size=20), st.data())
def test_residual_is_dropped_coefficient_sup(x, data):
    m = data.draw(st.integers(0, len(x) - 1))
    y = apply(FHAT, x)
    _, res = reconstruct(x, "c0_fhat", m)
    assert res == max((abs(v) for v in y[m + 1:]), default=Fraction(0))
    if m + 1 < len(x):
        assert reconstruct(x, "c0_fhat", m + 1)[1] <= res


@given(prefixes(min_size=2, max_size=20), rationals, st.data())
def test_limit_expansion_residual(x, l, data):
    m = data.draw(st.integers(0, len(x) - 1))
    y = apply(FHAT, x)
    _, res = reconstruct(x, "c_fhat", m, limit=l)
    assert res == max((abs(v - l) for v in y[m + 1:]), default=Fraction(0))


def test_default_limit_is_tail_mean():
    bc = basis_coefficients(counterexample("ratio_sum", 40), "c_fhat", window=4)
    y = apply(FHAT, counterexample("ratio_sum", 40))
    assert bc.l == sum(y[-4:]) / 4
    assert basis_coefficients([1, 2, 3], "c0_fhat").l is None


def test_reconstruct_range():
    with pytest.raises(ValueError):
        reconstruct([1, 2, 3], "c0_fhat", 3)
    with pytest.raises(ValueError):
        basis_coefficients([1, 2, 3], "c")


# -- almost convergence --------------------------------------------------------

@given(prefixes(min_size=4, max_size=20), st.data())
def test_t_grid_matches_direct_average(x, data):
    m_max = data.draw(st.integers(0, len(x) - 1))
    n_max = data.draw(st.integers(0, len(x) - 1 - m_max))
    grid = t_matrix(x, m_max, n_max)
    for m in range(m_max + 1):
        for n in range(n_max + 1):
            assert grid[m][n] == oracles.t_value(x, m, n)


def test_t_grid_small_cases():
    assert t_matrix([1] * 10, 4, 5) == [[1] * 6 for _ in range(5)]
    grid = t_matrix(unit(0, 10), 4, 5)
    for m in range(5):
        assert grid[m][0] == Fraction(1, m + 1)
        assert all(v == 0 for v in grid[m][1:])


def test_alternating_averages_bounded():
    x = counterexample("alternating", 256)
    grid = t_matrix(x, 127, 128)
    assert all(abs(v) <= Fraction(1, m + 1) for m, row in enumerate(grid) for v in row)


def test_t_grid_too_large():
    with pytest.raises(ValueError):
        t_matrix([1] * 10, 5, 5)


@pytest.mark.parametrize("name,limit", [("alternating", 0), ("staircase", 0.5), ("ones", 1)])
def test_almost_limits(name, limit):
    v = f_lim_estimate(counterexample(name, 256), tol=1e-2)
    assert v.verdict is M
    assert abs(v.limit_estimate - limit) < 1e-2


def test_almost_null():
    assert f_lim_estimate(counterexample("alternating", 256), 1e-2, null=True).verdict is M
    assert f_lim_estimate(counterexample("ones", 256), 1e-2, null=True).verdict is N


def test_not_almost_convergent():
    # blocks of 0s and 1s of doubling length never average out uniformly
    x, k = [], 0
    while len(x) < 256:
        x += [Fraction(k % 2)] * (2 ** k)
        k += 1
    assert f_lim_estimate(x[:256], tol=1e-2).verdict is not M
    assert f_lim_estimate(counterexample("fib_squares", 64), 1e-2).verdict is N


def test_almost_needs_sixteen_terms():
    with pytest.raises(ValueError):
        f_lim_estimate([1] * 15)
