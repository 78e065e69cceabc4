import itertools

import numpy as np
import pytest
from hypothesis import given, strategies as st

from adelharm.finab import FinAbGroup, GroupHom, Subgroup
from adelharm.filtered import (
    FilterError,
    LazyFilteredObject,
    RegionModel,
    SectionMorphism,
    Tri,
    UnsupportedDescription,
    all_cuts,
    build_graded_model,
    cokernel_object,
    conditions_ab_check,
    discrete_compact_intersection,
    dual_filtration,
    dual_object,
    element_from_ambient,
    identity_morphism,
    kernel_object,
    lex_window,
    pairing_n,
    standard_splitting,
    total_filtration,
)
from adelharm.generators import exhaustive_models, random_graded_model
import oracles

SQUARE = {(0, 0): [2], (0, 1): [2], (1, 0): [2], (1, 1): [2]}


def as_set(S: Subgroup):
    return {tuple(int(v) for v in r) for r in S.elements_array()}


def test_level1_graded_steps():
    m, X = build_graded_model({(-1,): [2], (0,): [2], (1,): [2]})
    assert [X.step(i).order for i in (-2, -1, 0, 1)] == [1, 2, 4, 8]
    assert X.step(5) == X.top and X.top.order == m.ambient.order == 8


def test_level2_square():
    m, X = build_graded_model(SQUARE)
    assert m.ambient.order == 16
    assert X.step(0).order == 4
    inner = X.inner(-1, 0)
    assert inner.level == 1 and [inner.step(s).order for s in (-1, 0, 1)] == [1, 2, 4]


def test_empty_support_is_zero():
    m, X = build_graded_model({}, level=2)
    assert X.is_zero() and X.order == 1
    assert total_filtration(X, (0, 0)).order == 1


def test_total_filtration_example():
    m, X = build_graded_model(SQUARE)
    F = total_filtration(X, (0, 0))
    assert F.order == 8
    assert F == m.coordinate_subgroup([(0, 0), (0, 1), (1, 0)])
    assert dual_filtration(X, (0, 0)).order == 2
    assert total_filtration(X, (-5, 0)).order == 1 and total_filtration(X, (3, 3)).order == 16
    assert dual_filtration(X, (-5, 0)).order == 16 and dual_filtration(X, (3, 3)).order == 1


def test_level1_total_is_standard():
    m, X = build_graded_model({(0,): [3], (2,): [2]})
    for z in range(-2, 4):
        assert total_filtration(X, (z,)) == X.step(z)


def test_wrong_index_length():
    _, X = build_graded_model(SQUARE)
    with pytest.raises(FilterError):
        total_filtration(X, (0,))


def test_total_filtration_matches_oracle():
    for m, X in exhaustive_models(level=2, orders=(2, 3), box=2)[::7]:
        comps = {k: list(v) for k, v in m.components.items()}
        for z in lex_window(X):
            keys = oracles.graded_keys_below(comps, z)
            want, _ = oracles.coordinate_subgroup(comps, keys)
            assert as_set(total_filtration(X, z)) == want


def test_perp_duality_exhaustive_small():
    for m, X in exhaustive_models(level=2, orders=(2,), box=2):
        win = lex_window(X)
        for z in win:
            F = total_filtration(X, z)
            Fh = dual_filtration(X, z)
            assert Fh == F.perp()
            assert Fh.order * F.order == m.ambient.order
        for z, z2 in zip(win, win[1:]):
            assert total_filtration(X, z) <= total_filtration(X, z2)
            assert dual_filtration(X, z2) <= dual_filtration(X, z)


def test_perp_against_brute_oracle():
    m, X = build_graded_model({(0, 0): [2], (0, 1): [4], (1, 0): [3]})
    orders = m.ambient.orders
    for z in lex_window(X):
        F = as_set(total_filtration(X, z))
        assert as_set(dual_filtration(X, z)) == oracles.perp(F, orders)


def _triples(X):
    idx = list(X.window())
    return itertools.combinations_with_replacement(idx, 3)


@pytest.mark.parametrize("seed", range(5))
def test_exact_triples(seed):
    _, X = random_graded_model(np.random.default_rng(seed), 2, box=3, max_order=128)
    for i, j, k in _triples(X):
        qij, qik, qjk = (X.section(a, b).group for a, b in ((i, j), (i, k), (j, k)))
        assert qik.order == qij.order * qjk.order


def test_kernel_cokernel_of_doubling():
    m, X = build_graded_model({(0,): [4], (1,): [4]})
    phi = SectionMorphism(GroupHom(m.ambient, m.ambient, [[2, 0], [0, 2]]), X, X)
    K, inc = kernel_object(phi)
    assert K.order == 4
    for i in range(-1, 3):
        want = X.step(i).intersect(Subgroup(m.ambient, [[2, 0], [0, 2]]))
        assert K.step(i) == want
    C, _ = cokernel_object(phi)
    assert C.order == 4


def test_identity_kernel_cokernel_zero():
    _, X = build_graded_model(SQUARE)
    idm = identity_morphism(X)
    assert kernel_object(idm)[0].is_zero()
    assert cokernel_object(idm)[0].is_zero()


def test_submodel_inclusion():
    # kernel of the projection onto A_1 is the submodel A_0; its cokernel is A_1
    m, X = build_graded_model({(0,): [2], (1,): [3]})
    proj = SectionMorphism(GroupHom(m.ambient, m.ambient, [[0, 0], [0, 1]]), X, X)
    K, inc = kernel_object(proj)
    assert K.top == m.coordinate_subgroup([(0,)])
    assert kernel_object(inc)[0].is_zero()
    C, _ = cokernel_object(inc)
    assert C.order == 3
    assert [C.step(i).order // C.bottom.order for i in (-1, 0, 1)] == [1, 1, 3]


def test_bounded_models_discrete_and_compact():
    _, X = build_graded_model(SQUARE)
    assert X.is_discrete() is Tri.TRUE and X.is_compact() is Tri.TRUE


def test_lazy_flags():
    lazy = LazyFilteredObject(1, lambda i, j: FinAbGroup([2] * max(0, j - i)), lo=0)
    assert lazy.is_discrete() is Tri.TRUE
    assert lazy.is_compact() is Tri.UNKNOWN
    with pytest.raises(ValueError):
        bool(lazy.is_compact())


def test_structure_sequence_examples():
    m, X = build_graded_model({(-1,): [2], (0,): [2]})
    seq = standard_splitting(m, (0,))
    assert seq.D.order == 2 and seq.D.intersect(X.step(-1)).order == 1
    assert seq.K_object.order == 2 and seq.K_object.step(-1) == seq.K_object.top
    assert seq.check()
    assert standard_splitting(m, (5,)).D.order == 1
    assert standard_splitting(m, (-5,)).D.order == 4


def test_all_cuts_give_structure_sequences():
    m, _ = build_graded_model(SQUARE)
    for cut in all_cuts(m):
        assert standard_splitting(m, cut).check()


def test_discrete_compact_intersection():
    m, X = build_graded_model({(-1,): [2], (0,): [2]})
    D = m.coordinate_subgroup([(0,)])
    K = m.coordinate_subgroup([(-1,)])
    assert discrete_compact_intersection(X, D, K) == 1
    T = Subgroup.trivial(m.ambient)
    assert discrete_compact_intersection(X, T, T) == 1


def test_conditions_ab():
    assert conditions_ab_check([(-1, 1, -1, 1)])
    assert not conditions_ab_check([(None, None, None, None)])
    assert conditions_ab_check([])
    assert conditions_ab_check([{"r_lo": 0, "r_hi": None, "s_lo": 0, "s_hi": 0}])
    assert not conditions_ab_check([{"r_lo": 0, "r_hi": None, "s_lo": None, "s_hi": 0}])
    with pytest.raises(UnsupportedDescription):
        RegionModel(lambda r, s: True)


def test_pairing_n_examples():
    m, X = build_graded_model({(-1,): [2], (0,): [2]})
    Y = dual_object(X)
    a = element_from_ambient(X, (1, 0))
    chi = element_from_ambient(Y, (1, 0), (Y.lo, Y.hi))
    from fractions import Fraction

    assert pairing_n(X, a, chi) == Fraction(1, 2)
    # a character killing everything pairs to 0
    zero = element_from_ambient(Y, (0, 0), (Y.lo, Y.hi))
    assert pairing_n(X, a, zero) == 0


def test_pairing_window_independence():
    m, X = build_graded_model({(-1,): [2], (0,): [4], (1,): [3]})
    Y = dual_object(X)
    for x in m.ambient.elements():
        for c in list(m.ambient.elements())[:6]:
            base = pairing_n(X, element_from_ambient(X, x.residues), element_from_ambient(Y, c.residues, (Y.lo, Y.hi)))
            wide = pairing_n(X, element_from_ambient(X, x.residues, (X.lo - 2, X.hi + 3)),
                             element_from_ambient(Y, c.residues, (Y.lo - 3, Y.hi + 2)))
            assert base == wide == oracles.pair(x.residues, c.residues, m.ambient.orders)


@given(st.integers(0, 10_000))
def test_dual_of_compact_is_discrete(seed):
    _, X = random_graded_model(np.random.default_rng(seed), 1, box=3)
    Y = dual_object(X)
    assert Y.is_discrete() is Tri.TRUE and Y.is_compact() is Tri.TRUE
    assert Y.step(-X.hi) == X.top.perp() and Y.step(-X.lo) == X.bottom.perp()
