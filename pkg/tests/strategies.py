"""Hypothesis strategies for groups, homomorphisms and functions."""

from math import gcd, prod

import numpy as np
from hypothesis import strategies as st

from adelharm.finab import FinAbGroup, GroupHom
from adelharm.funcspace import FnOnGroup


@st.composite
def groups(draw, max_order=16, max_rank=3):
    orders = draw(st.lists(st.integers(2, 6), min_size=0, max_size=max_rank))
    while orders and prod(orders) > max_order:
        orders.pop()
    return FinAbGroup(orders)


@st.composite
def homs(draw, A=None, B=None, max_order=16):
    A = draw(groups(max_order)) if A is None else A
    B = draw(groups(max_order)) if B is None else B
    rows = []
    for n in B.orders:
        row = []
        for m in A.orders:
            step = n // gcd(n, m)
            row.append(step * draw(st.integers(0, n // step - 1)))
        rows.append(row)
    return GroupHom(A, B, rows)


@st.composite
def composable(draw, max_order=16):
    A, B, C = draw(groups(max_order)), draw(groups(max_order)), draw(groups(max_order))
    return draw(homs(A, B)), draw(homs(B, C))


@st.composite
def functions(draw, A):
    seed = draw(st.integers(0, 2**32 - 1))
    return FnOnGroup.random(A, np.random.default_rng(seed))


@st.composite
def group_and_functions(draw, k=1, max_order=16):
    A = draw(groups(max_order))
    return (A,) + tuple(draw(functions(A)) for _ in range(k))
