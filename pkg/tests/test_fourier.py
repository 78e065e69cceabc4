from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given

from adelharm.finab import FinAbGroup, GroupHom, double_dual_iso, dual_group
from adelharm.fourier import (
    fourier,
    fourier_batch,
    fourier_direct,
    fourier_F,
    fourier_Fprime,
    functoriality_holds,
    inversion_holds,
    modulation_holds,
    plancherel_holds,
    to_double_dual,
)
from adelharm.funcspace import FnOnGroup, delta_basis
from adelharm.scalars import root_of_unity
import oracles
from strategies import group_and_functions, groups, homs


def test_F_examples():
    Z2, Z4 = FinAbGroup([2]), FinAbGroup([4])
    assert fourier_F(FnOnGroup.delta(Z2, [0])) == FnOnGroup.constant(Z2, Fraction(1, 2))
    A = FinAbGroup([2, 3])
    assert fourier_F(FnOnGroup.constant(A)) == FnOnGroup.delta(dual_group(A), [0, 0])
    expect = [root_of_unity(Fraction(-a, 4), 4) / 4 for a in range(4)]
    assert fourier_F(FnOnGroup.delta(Z4, [1])).values == expect


def test_Fprime_examples():
    Z2 = FinAbGroup([2])
    A = FinAbGroup([3, 2])
    assert fourier_Fprime(FnOnGroup.delta(A, [0, 0])) == FnOnGroup.constant(dual_group(A))
    assert fourier_Fprime(FnOnGroup.delta(Z2, [1])).values == [1, -1]
    assert fourier_Fprime(FnOnGroup.constant(A)) == FnOnGroup.delta(dual_group(A), [0, 0]).scale(6)


@given(group_and_functions(1, max_order=12))
def test_matches_direct_sum(data):
    A, f = data
    for w in ("F", "F_prime"):
        assert fourier(f, w) == fourier_direct(f, w)


@given(group_and_functions(1, max_order=12))
def test_matches_float_oracle(data):
    A, f = data
    vals = {tuple(int(v) for v in r): complex(x) for r, x in zip(A.element_array, f.values)}
    ref = oracles.fourier(vals, A.orders, -1, True)
    got = fourier_F(f)
    for r, x in zip(dual_group(A).element_array, got.values):
        assert oracles.close(x, ref[tuple(int(v) for v in r)])
    ref = oracles.fourier(vals, A.orders, 1, False)
    for r, x in zip(A.element_array, fourier_Fprime(f).values):
        assert oracles.close(x, ref[tuple(int(v) for v in r)])


def test_Fprime_is_scaled_conjugate_exponent(rng):
    A = FinAbGroup([3, 4])
    f = FnOnGroup.random(A, rng)
    conj = FnOnGroup.from_values(A, [v.conjugate() for v in f.values])
    lhs = fourier_Fprime(f)
    rhs = FnOnGroup.from_values(dual_group(A), [v.conjugate() for v in fourier_F(conj).values]).scale(A.order)
    assert lhs == rhs


@given(group_and_functions(1))
def test_inversion(data):
    A, f = data
    for w in ("F", "F_prime", "F_tilde", "F_tilde_prime"):
        assert inversion_holds(f, w)


@given(groups(max_order=12))
def test_inversion_on_delta_basis(A):
    back = fourier_batch(fourier_batch(delta_basis(A), "F"), "F_tilde_prime")
    assert [to_double_dual(A, g) for g in back] == delta_basis(A)


@given(group_and_functions(2))
def test_plancherel(data):
    A, f, g = data
    assert plancherel_holds(f, g)


@given(homs())
def test_functoriality(phi):
    f = FnOnGroup.random(phi.target, np.random.default_rng(3))
    assert functoriality_holds(phi, f)


def test_functoriality_worked_case():
    phi = GroupHom(FinAbGroup([2]), FinAbGroup([4]), [[2]])
    for f in delta_basis(phi.target):
        assert functoriality_holds(phi, f)


@given(group_and_functions(1))
def test_modulation(data):
    A, f = data
    for a in list(A.elements())[:3]:
        assert modulation_holds(a, f)


def test_batch_equals_single(rng):
    A = FinAbGroup([2, 6])
    fs = [FnOnGroup.random(A, rng) for _ in range(5)]
    assert fourier_batch(fs, "F") == [fourier_F(f) for f in fs]
