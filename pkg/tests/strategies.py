from fractions import Fraction

from hypothesis import strategies as st

small_ints = st.integers(min_value=-50, max_value=50)
rationals = st.builds(Fraction, small_ints, st.integers(min_value=1, max_value=20))


def prefixes(min_size=1, max_size=24):
    return st.lists(rationals, min_size=min_size, max_size=max_size)


def grids(rows, cols):
    return st.lists(st.lists(rationals, min_size=cols, max_size=cols),
                    min_size=rows, max_size=rows)
