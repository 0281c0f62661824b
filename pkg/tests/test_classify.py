from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

import oracles
from strategies import grids, prefixes
from fibspaces.bandops import BandMatrixSpec, TruncatedMatrix
from fibspaces.classify import (
    DOMAIN_TARGETS,
    MAX_SUBSET_COLS,
    ClassVerdict,
    ConditionId,
    ConditionReport,
    CondVerdict,
    Outcome,
    classify_domain_source,
    classify_into_domain,
    classify_pair,
    column_partial_sums,
    dual_membership,
    dual_summary,
    eval_condition,
    eval_delta_condition,
    row_differences,
    subset_sup,
)
from fibspaces.fibcore import fib

SAT, VIO, INC = CondVerdict.SATISFIED, CondVerdict.VIOLATED, CondVerdict.INCONCLUSIVE
FHAT = BandMatrixSpec.fhat()


@pytest.fixture(scope="module")
def fhat200():
    return TruncatedMatrix.from_spec(FHAT, 200)


@pytest.fixture(scope="module")
def fhat40():
    return TruncatedMatrix.from_spec(FHAT, 40)


def growing_column(rows=60, cols=30):
    return TruncatedMatrix.from_rows(
        [[Fraction(n) if k == 0 else Fraction(0) for k in range(cols)] for n in range(rows)])


# -- single conditions ---------------------------------------------------------

def test_row_abs_sum_sup(fhat200):
    rep = eval_condition(fhat200, "C1")
    assert rep.verdict is SAT
    assert rep.extracted["sup"] == Fraction(5, 2)
    assert rep.extracted["attained_at"] == 1


def test_columns_vanish(fhat200):
    assert eval_condition(fhat200, ConditionId.C2).verdict is SAT


def test_row_sum_limit(fhat200):
    rep = eval_condition(fhat200, "C5")
    assert rep.verdict is SAT
    assert abs(float(rep.extracted["alpha"]) + 1) < 1e-10
    n = 199
    assert rep.trace[n] == Fraction(fib(n), fib(n + 1)) - Fraction(fib(n + 1), fib(n))


def test_row_sums_not_null(fhat200):
    rep = eval_condition(fhat200, "C4")
    assert rep.verdict is VIO and rep.witness == (199,)


def test_too_small_for_columns():
    with pytest.raises(ValueError):
        eval_condition(TruncatedMatrix.identity(10), "C2")


def test_subset_cap_enforced():
    A = TruncatedMatrix.identity(20)
    with pytest.raises(ValueError):
        eval_condition(A, "C6", subset_cols=MAX_SUBSET_COLS + 1)
    with pytest.raises(ValueError):
        subset_sup(A, 17)


def test_delta_needs_alphas():
    with pytest.raises(ValueError):
        eval_condition(TruncatedMatrix.identity(20), "CDelta")
    with pytest.raises(ValueError):
        eval_delta_condition(TruncatedMatrix.identity(20), [0] * 5)


def test_report_invariants():
    with pytest.raises(ValueError):
        ConditionReport(ConditionId.C1, VIO, [])
    rep = ConditionReport(ConditionId.C1, INC, [], extracted={"sup": 1})
    assert rep.extracted is None


def test_anchor_is_the_formula():
    assert "sup_n" in eval_condition(TruncatedMatrix.identity(20), "C1").anchor


# -- subset sups ---------------------------------------------------------------

@given(grids(4, 6), st.integers(1, 6))
def test_subset_sup_matches_brute_force(A, cap):
    M = TruncatedMatrix.from_rows(A)
    assert subset_sup(M, cap)[-1] == oracles.subset_sup_abs(A, cap)


@given(grids(5, 12))
def test_subset_sup_monotone_in_cap(A):
    sups = subset_sup(TruncatedMatrix.from_rows(A), 12)
    assert all(a <= b for a, b in zip(sups, sups[1:]))


def test_subset_sup_between_quarter_mass_and_mass():
    A = TruncatedMatrix.from_spec(FHAT, 12)
    mass = sum(abs(v) for r in A.entries for v in r)
    top = subset_sup(A, 12)[-1]
    assert mass / 4 <= top <= mass


def test_split_mode():
    A = TruncatedMatrix.from_rows([[Fraction(1), Fraction(-1)], [Fraction(-2), Fraction(3)]])
    assert subset_sup(A, 2, "split") == [Fraction(2), Fraction(3)]
    assert subset_sup(A, 2, "abs") == [Fraction(3), Fraction(4)]


def test_large_entries_use_exact_path():
    big = Fraction(fib(200), 3)
    A = TruncatedMatrix.from_rows([[big, -big, Fraction(1, 7)]] * 3)
    assert subset_sup(A, 3)[-1] == oracles.subset_sup_abs(A.entries, 3)


@pytest.mark.parametrize("A,verdict", [
    (TruncatedMatrix.from_spec(FHAT, 40), VIO),
    (TruncatedMatrix.identity(40), VIO),
    (TruncatedMatrix.from_rows([[Fraction(1, 2 ** n)] + [Fraction(0)] * 19 for n in range(40)]), SAT),
    (TruncatedMatrix.zeros(40), SAT),
])
def test_summable_image(A, verdict):
    assert classify_pair(A, "c0", "ell_1").reports[ConditionId.C6].verdict is verdict


# -- classical pairs -----------------------------------------------------------

@pytest.mark.parametrize("src,tgt", [("c0", "c0"), ("c0", "c"), ("c", "c"), ("c0", "ell_inf"), ("c", "ell_inf")])
def test_fhat_pairs_member(fhat200, src, tgt):
    assert classify_pair(fhat200, src, tgt).overall is Outcome.MEMBER


def test_fhat_does_not_map_c_to_c0(fhat200):
    v = classify_pair(fhat200, "c", "c0")
    assert v.overall is Outcome.VIOLATED
    assert v.reports[ConditionId.C4].verdict is VIO


def test_growing_rows_break_boundedness():
    v = classify_pair(growing_column(), "c0", "c0")
    assert v.overall is Outcome.VIOLATED
    assert v.reports[ConditionId.C1].witness == (59,)


def test_identity_is_conservative():
    v = classify_pair(TruncatedMatrix.identity(60), "c", "c")
    assert v.overall is Outcome.MEMBER
    assert v.reports[ConditionId.C5].extracted["alpha"] == 1
    assert set(v.reports[ConditionId.C3].extracted["alpha_k"]) == {0}


def test_almost_convergent_source(fhat200):
    assert classify_pair(TruncatedMatrix.zeros(60), "f", "c").overall is Outcome.MEMBER
    assert classify_pair(fhat200, "f", "c0").overall is Outcome.VIOLATED


def test_almost_convergent_target():
    v = classify_pair(TruncatedMatrix.identity(60), "c", "f", tol=1e-1)
    assert [c.value for c in v.required] == ["C1", "CF1", "CF2"]
    assert v.reports[ConditionId.C1].verdict is SAT


def test_unsupported_pair():
    with pytest.raises(ValueError):
        classify_pair(TruncatedMatrix.identity(20), "ell_1", "c0")


def test_inconclusive_never_overstated():
    reports = {ConditionId.C1: ConditionReport(ConditionId.C1, SAT, []),
               ConditionId.C2: ConditionReport(ConditionId.C2, INC, [])}
    v = ClassVerdict(("c0", "c0"), [ConditionId.C1, ConditionId.C2], reports)
    assert v.overall is Outcome.INCONCLUSIVE


# -- delta condition -----------------------------------------------------------

def test_delta_rows_equal_alphas():
    alphas = [Fraction(k, 3) for k in range(12)]
    A = TruncatedMatrix.from_rows([alphas] * 30)
    rep = eval_delta_condition(A, alphas)
    assert rep.verdict is SAT and set(rep.trace) == {0}
    assert eval_delta_condition(TruncatedMatrix.zeros(30), [0] * 30).verdict is SAT


def test_delta_matches_double_loop(fhat40):
    rep = eval_delta_condition(fhat40, [0] * 40)
    for n, row in enumerate(fhat40.entries):
        expect = sum((row[k] - row[k + 1] for k in range(39)), Fraction(0))
        assert rep.trace[n] == expect


# -- domain source -------------------------------------------------------------

def test_fhat_on_its_domain(fhat40):
    for tgt in ("c0", "c", "ell_inf"):
        assert classify_domain_source(fhat40, "c0_fhat", tgt).overall is Outcome.MEMBER
    assert classify_domain_source(fhat40, "c0_fhat", "ell_1").overall is Outcome.VIOLATED


@pytest.mark.parametrize("tgt", DOMAIN_TARGETS)
def test_zero_matrix_on_domain(tgt):
    Z = TruncatedMatrix.zeros(40)
    assert classify_domain_source(Z, "c_fhat", tgt).overall is Outcome.MEMBER


def test_growing_row_on_domain():
    v = classify_domain_source(growing_column(), "c0_fhat", "ell_inf")
    assert v.reports[ConditionId.C9].verdict is VIO
    assert v.reports[ConditionId.C9].witness == (59,)


def test_identity_does_not_map_domain_into_c():
    v = classify_domain_source(TruncatedMatrix.identity(40), "c_fhat", "c")
    assert v.overall is Outcome.VIOLATED


def test_series_targets_use_partial_sums(fhat40):
    v = classify_domain_source(fhat40, "c0_fhat", "bs")
    direct = eval_condition(column_partial_sums(fhat40), "C9")
    assert v.reports[ConditionId.C9].trace == direct.trace


def test_unsupported_domain_pairs(fhat40):
    with pytest.raises(ValueError):
        classify_domain_source(fhat40, "c", "c0")
    with pytest.raises(ValueError):
        classify_domain_source(fhat40, "c0_fhat", "c_fhat")


# -- into the domain -----------------------------------------------------------

def test_inverse_maps_c0_into_domain():
    G = TruncatedMatrix.from_spec(BandMatrixSpec.fhat_inverse(), 40)
    assert classify_into_domain(G, "c0", "c0_fhat").overall is Outcome.MEMBER
    assert classify_into_domain(TruncatedMatrix.zeros(40), "c", "c_fhat").overall is Outcome.MEMBER


def test_growing_rows_not_into_domain():
    H = TruncatedMatrix.from_rows([[Fraction(fib(n + 1))] * 40 for n in range(40)])
    v = classify_into_domain(H, "c0", "c0_fhat")
    assert v.reports[ConditionId.C1].verdict is VIO


def test_into_domain_rejects(fhat40):
    with pytest.raises(ValueError):
        classify_into_domain(fhat40, "ell_1", "c0_fhat")
    with pytest.raises(ValueError):
        classify_into_domain(fhat40, "c0", "c")


# -- helpers -------------------------------------------------------------------

def test_column_partial_sums_examples(fhat40):
    P = column_partial_sums(TruncatedMatrix.identity(6))
    assert P.entries == [[Fraction(int(k <= n)) for k in range(6)] for n in range(6)]
    assert column_partial_sums(TruncatedMatrix.zeros(5)).entries == TruncatedMatrix.zeros(5).entries
    Q = column_partial_sums(fhat40)
    for n in range(40):
        for k in range(40):
            assert Q[n, k] == sum((fhat40[j, k] for j in range(n + 1)), Fraction(0))


@given(grids(5, 5))
def test_row_differences(A):
    M = TruncatedMatrix.from_rows(A)
    R = row_differences(M)
    assert R.entries[0] == M.entries[0]
    for n in range(1, 5):
        assert R.entries[n] == [a - b for a, b in zip(A[n], A[n - 1])]


# -- duals ---------------------------------------------------------------------

def test_zero_in_every_dual():
    for s in ("d1", "d2", "d3", "d4"):
        assert dual_membership([0] * 40, s).verdict is SAT


def test_unit_sequence_d2():
    rep = dual_membership([1] + [0] * 39, "d2")
    assert rep.verdict is SAT and rep.extracted["sup"] == 1
    assert set(rep.trace) == {1}


def test_dual_example_sequences():
    good = [Fraction(1, 2 ** n * fib(n + 1) ** 2) for n in range(40)]
    assert dual_membership(good, "d1").verdict is SAT
    bad = [Fraction(fib(n) * fib(n + 1), fib(n + 1) ** 2 * 2 ** n) for n in range(40)]
    assert dual_membership(bad, "d1").verdict is VIO


def test_dual_summary_structure():
    corpus = [[0] * 40, [1] + [0] * 39,
              [Fraction(1, 2 ** n * fib(n + 1) ** 2) for n in range(40)],
              [Fraction(1, n + 1) for n in range(40)]]
    for a in corpus:
        s = dual_summary(a)
        if s["beta_c_fhat"] is SAT:
            assert s["d2"] is SAT and s["d3"] is SAT and s["beta_c0_fhat"] is SAT


def test_dual_errors():
    with pytest.raises(ValueError):
        dual_membership([0] * 10, "d1")
    with pytest.raises(ValueError):
        dual_membership([0] * 40, "d9")
