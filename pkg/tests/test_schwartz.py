from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, strategies as st

from adelharm.filtered import FilterError, Tri, all_cuts, build_graded_model, lex_window, standard_splitting
from adelharm.fourier import fourier_Fprime
from adelharm.funcspace import FnOnGroup, delta_basis
from adelharm.generators import random_graded_model
from adelharm.schwartz import (
    LazyStructure,
    SchwartzFunction,
    admissibility_check,
    cardinality_identity,
    indicator_fourier,
    normalization,
    poisson_bruteforce,
    poisson_eval,
    random_schwartz,
    refinement_expand,
)
import oracles


def close_pair(res, ref):
    return oracles.close(res[0], ref[0]) and oracles.close(res[1], ref[1])


def oracle_sides(m, cut, s):
    comps = {k: list(v) for k, v in m.components.items()}
    terms = [(complex(t.coeff), t.a, t.z) for t in s.terms]
    return oracles.poisson_sides(comps, cut, terms)


def test_z2_delta_transform():
    m, X = build_graded_model({(0,): [2]})
    seq = standard_splitting(m, (1,))
    assert seq.D.order == 1
    s = SchwartzFunction(X, [("1", (1,), (-1,))])
    fh = indicator_fourier(s, seq)
    assert fh.terms[0].factor == Fraction(1, 2)
    assert fh.values().values == [Fraction(1, 2), Fraction(-1, 2)]


def test_indicator_of_subgroup_is_constant_factor():
    m, X = build_graded_model({(0,): [2], (1,): [3]})
    seq = standard_splitting(m, (1,))
    s = SchwartzFunction(X, [("1", (0, 0), (0,))])
    fh = indicator_fourier(s, seq)
    nd, nk = normalization(seq, (0,))
    F_hat_mask = [fh(chi) != 0 for chi in m.ambient.element_array]
    assert set(fh(chi) for chi, keep in zip(m.ambient.element_array, F_hat_mask) if keep) == {Fraction(nd, nk)}


def test_graded_p2_example():
    m, X = build_graded_model({(-1,): [2], (0,): [2]})
    seq = standard_splitting(m, (0,))
    s = SchwartzFunction(X, [("1", (0, 0), (-1,))])
    assert normalization(seq, (-1,)) == (1, 1)
    res = poisson_eval(s, seq)
    assert res.lhs == res.rhs == 1


def test_coset_outside_d_plus_f():
    m, X = build_graded_model({(-1,): [2], (0,): [2]})
    seq = standard_splitting(m, (0,))
    s = SchwartzFunction(X, [("1", (1, 0), (-2,))])
    res = poisson_eval(s, seq)
    assert res.lhs == 0 and res.rhs == 0


def test_trivial_d_delta_orthogonality():
    m, X = build_graded_model({(0,): [3], (1,): [2]})
    seq = standard_splitting(m, (5,))
    for a in m.ambient.element_array:
        a = tuple(int(v) for v in a)
        res = poisson_eval(SchwartzFunction(X, [("1", a, (-1,))]), seq)
        assert res.lhs == res.rhs == int(not any(a))


def test_consistency_with_finite_transform():
    m, X = build_graded_model({(0, 0): [2], (0, 1): [3], (1, 0): [2]})
    seq = standard_splitting(m, (9, 9))
    A = m.ambient
    z0 = lex_window(X)[0]
    for d in delta_basis(A):
        a = next(tuple(int(v) for v in r) for r, v in zip(A.element_array, d.values) if v == 1)
        fh = indicator_fourier(SchwartzFunction(X, [("1", a, z0)]), seq).values()
        assert fh.values == fourier_Fprime(d).scale(Fraction(1, A.order)).values


def test_refinement_examples():
    m, X = build_graded_model({(0,): [2]})
    seq = standard_splitting(m, (1,))
    s = SchwartzFunction(X, [("1", (0,), (0,))])
    assert refinement_expand(s, (0,)).terms == s.terms
    r = refinement_expand(s, (-1,))
    assert sorted(t.a for t in r.terms) == [(0,), (1,)]
    assert indicator_fourier(r, seq).values() == indicator_fourier(s, seq).values()
    with pytest.raises(FilterError):
        refinement_expand(SchwartzFunction(X, [("1", (0,), (-1,))]), (0,))


def test_refinement_level2_all_pairs():
    m, X = build_graded_model({(0, 0): [2], (0, 1): [3], (1, 0): [2], (1, 1): [2]})
    win = lex_window(X)
    for cut in all_cuts(m):
        seq = standard_splitting(m, cut)
        for n, z in enumerate(win):
            s = SchwartzFunction(X, [("2", (1, 1, 0, 1), z)])
            want = indicator_fourier(s, seq).values()
            for z2 in win[: n + 1]:
                assert indicator_fourier(refinement_expand(s, z2), seq).values() == want
                idx, ratio = cardinality_identity(seq, z, z2)
                assert idx == ratio


def test_admissibility():
    m, X = build_graded_model({(0,): [2]})
    assert admissibility_check((0,), standard_splitting(m, (0,))) is Tri.TRUE
    lazy = LazyStructure(1, discrete_below=0, cocompact_above=-5)
    assert admissibility_check((-1,), lazy) is Tri.TRUE
    assert admissibility_check((3,), lazy) is Tri.UNKNOWN
    assert admissibility_check((0,), LazyStructure(1)) is Tri.UNKNOWN


def test_literal_round_trip(rng):
    _, X = build_graded_model({(0, 0): [2], (1, 0): [4]})
    s = random_schwartz(X, rng)
    back = SchwartzFunction.from_literal(X, s.to_literal())
    assert back.values() == s.values()


@given(st.integers(0, 10_000), st.sampled_from([1, 2]))
def test_poisson_three_routes(seed, level):
    rng = np.random.default_rng(seed)
    m, X = random_graded_model(rng, level, orders=(2, 3, 4), box=3, max_order=96)
    for cut in all_cuts(m):
        seq = standard_splitting(m, cut)
        s = random_schwartz(X, rng, n_terms=3)
        res = poisson_eval(s, seq)
        assert res.equal
        brute = poisson_bruteforce(s, seq)
        assert brute == (res.lhs, res.rhs)
        assert close_pair(oracle_sides(m, cut, s), (complex(res.lhs), complex(res.rhs)))
