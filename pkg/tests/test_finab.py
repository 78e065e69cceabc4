from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, strategies as st

from adelharm import intmat
from adelharm.finab import (
    CompositionError,
    FinAbGroup,
    GroupError,
    GroupHom,
    Subgroup,
    brute_image_order,
    brute_kernel_order,
    cokernel,
    double_dual_iso,
    dual_group,
    dual_hom,
    hom_compose,
    kernel,
    pairing0,
)
from adelharm.generators import all_groups, random_hom
from oracles import elements, pair, perp as brute_perp, span
from strategies import composable, groups, homs


def test_snf_examples():
    assert intmat.smith_normal_form([[4, 6]]).diagonal == (2,)
    assert intmat.smith_normal_form([[2, 0], [0, 3]]).diagonal == (1, 6)
    s = intmat.smith_normal_form([[0, 0], [0, 0]])
    assert s.diagonal == (0, 0) and s.U == [[1, 0], [0, 1]] and s.V == [[1, 0], [0, 1]]


@given(st.lists(st.lists(st.integers(-20, 20), min_size=3, max_size=3), min_size=1, max_size=4))
def test_snf_properties(M):
    s = intmat.smith_normal_form(M)
    assert intmat.matmul(intmat.matmul(s.U, M), s.V) == s.D
    assert abs(intmat.determinant(s.U)) == 1 and abs(intmat.determinant(s.V)) == 1
    d = [v for v in s.diagonal if v]
    assert all(b % a == 0 for a, b in zip(d, d[1:]))


def test_group_basics():
    A = FinAbGroup([2, 1, 3])
    assert A.orders == (2, 3) and A.order == 6 and A.exponent == 6
    assert [tuple(r) for r in A.element_array] == [(0, 0), (0, 1), (0, 2), (1, 0), (1, 1), (1, 2)]
    assert FinAbGroup([]).order == 1


def test_hom_compose_examples():
    Z2, Z4 = FinAbGroup([2]), FinAbGroup([4])
    phi = GroupHom(Z2, Z4, [[2]])
    psi = GroupHom(Z4, Z2, [[1]])
    assert hom_compose(psi, phi).is_zero()
    assert hom_compose(psi, GroupHom.identity(Z4)) == psi
    with pytest.raises(GroupError):
        GroupHom(Z2, Z4, [[1]])
    with pytest.raises(CompositionError):
        hom_compose(phi, phi)


def test_kernel_cokernel_examples():
    Z4 = FinAbGroup([4])
    dbl = GroupHom(Z4, Z4, [[2]])
    K, i = kernel(dbl)
    assert K.order == 2 and i.is_injective() and hom_compose(dbl, i).is_zero()
    C, p = cokernel(dbl)
    assert C.order == 2 and p.is_surjective() and hom_compose(p, dbl).is_zero()
    K, i = kernel(GroupHom.zero(FinAbGroup([6]), FinAbGroup([5])))
    assert K.order == 6
    C, p = cokernel(GroupHom.zero(FinAbGroup([2]), FinAbGroup([3])))
    assert C.order == 3
    assert kernel(GroupHom.identity(Z4))[0].order == 1
    assert cokernel(GroupHom.identity(Z4))[0].order == 1


def test_exact_counts_all_groups_up_to_36():
    rng = np.random.default_rng(7)
    gs = all_groups(36)
    for _ in range(300):
        A, B = gs[int(rng.integers(len(gs)))], gs[int(rng.integers(len(gs)))]
        phi = random_hom(rng, A, B)
        K, _ = kernel(phi)
        C, _ = cokernel(phi)
        im = brute_image_order(phi)
        assert K.order == brute_kernel_order(phi)
        assert A.order == K.order * im and B.order == im * C.order


def test_pairing_examples():
    Z4 = FinAbGroup([4])
    assert pairing0(Z4.element([1]), Z4.element([2])).value == Fraction(1, 2)
    V = FinAbGroup([2, 2])
    for a in V.elements():
        assert all(pairing0(V.zero(), al).value == 0 for al in V.elements())
        if not a.is_zero():
            assert any(pairing0(a, al).value == 0.5 for al in V.elements())


def test_dual_group_examples(rng):
    assert dual_group(FinAbGroup([2, 4])).orders == (2, 4)
    assert dual_group(FinAbGroup([])).order == 1
    for _ in range(50):
        A = all_groups(64)[int(rng.integers(0, 200))]
        assert dual_group(A).order == A.order


def test_dual_hom_example():
    phi = GroupHom(FinAbGroup([2]), FinAbGroup([4]), [[2]])
    assert dual_hom(phi).matrix == ((1,),)
    A = FinAbGroup([2, 6])
    assert dual_hom(GroupHom.identity(A)) == GroupHom.identity(dual_group(A))


@given(homs())
def test_dual_hom_adjunction(phi):
    Bh = dual_group(phi.target)
    ph = dual_hom(phi)
    for a in phi.source.elements():
        for b in Bh.elements():
            assert pairing0(phi(a), b) == pairing0(a, ph(b))


@given(composable())
def test_dual_hom_reverses_composition(pair_):
    phi, psi = pair_
    assert dual_hom(hom_compose(psi, phi)) == hom_compose(dual_hom(phi), dual_hom(psi))


@given(homs())
def test_dual_hom_swaps_kernel_and_cokernel(phi):
    ph = dual_hom(phi)
    assert kernel(ph)[0].order == cokernel(phi)[0].order
    assert cokernel(ph)[0].order == kernel(phi)[0].order


def test_double_dual_examples():
    assert double_dual_iso(FinAbGroup([])).source.order == 1
    assert double_dual_iso(FinAbGroup([4])).matrix == ((1,),)


@given(homs())
def test_double_dual_natural(phi):
    A, B = phi.source, phi.target
    lhs = hom_compose(double_dual_iso(B), phi)
    rhs = hom_compose(dual_hom(dual_hom(phi)), double_dual_iso(A))
    assert lhs == rhs and double_dual_iso(A).is_isomorphism()


@given(groups())
def test_double_dual_pairing(A):
    d = double_dual_iso(A)
    Ah = dual_group(A)
    for a in A.elements():
        for al in Ah.elements():
            assert pairing0(al, d(a)) == pairing0(a, al)


def test_subgroup_examples():
    V = FinAbGroup([2, 2])
    S, T = Subgroup(V, [(1, 0)]), Subgroup(V, [(1, 1)])
    assert S.intersect(T).order == 1
    assert S.perp() == Subgroup(dual_group(V), [(0, 1)]) and S.perp().order == 2
    assert Subgroup.whole(V).perp().order == 1
    assert Subgroup.trivial(V).perp().order == 4


@st.composite
def subgroups(draw, max_order=16):
    A = draw(groups(max_order))
    els = [tuple(int(v) for v in r) for r in A.element_array]
    gens = draw(st.lists(st.sampled_from(els), max_size=3))
    return A, gens


@given(subgroups(), subgroups())
def test_subgroup_ops_match_enumeration(s1, s2):
    A, g1 = s1
    _, g2 = s2
    g2 = [tuple(x % m for x, m in zip(g, A.orders)) if len(g) == A.rank else tuple(0 for _ in A.orders) for g in g2]
    S, T = Subgroup(A, g1), Subgroup(A, g2)
    bS, bT = span(g1, A.orders), span(g2, A.orders)
    assert S.order == len(bS)
    assert {tuple(int(v) for v in r) for r in S.elements_array()} == bS
    assert S.intersect(T).order == len(bS & bT)
    assert (S + T).order == len(span(list(bS | bT), A.orders))
    assert {tuple(int(v) for v in r) for r in S.perp().elements_array()} == brute_perp(bS, A.orders)
    assert S.perp().order * S.order == A.order
    assert all(S.contains(x) == (x in bS) for x in elements(A.orders))


@given(subgroups())
def test_perp_is_an_involution(s):
    A, g = s
    S = Subgroup(A, g)
    pp = S.perp().perp()
    d = double_dual_iso(A)
    assert pp == S.image(d)


@given(subgroups(), subgroups())
def test_perp_reverses_inclusion(s1, s2):
    A, g1 = s1
    S = Subgroup(A, g1)
    T = S + Subgroup(A, [tuple(x % m for x, m in zip(g, A.orders)) for g in s2[1] if len(g) == A.rank])
    assert S <= T and T.perp() <= S.perp()


@given(homs())
def test_image_and_preimage(phi):
    S = Subgroup.whole(phi.source)
    img = S.image(phi)
    assert img.order == brute_image_order(phi)
    pre = Subgroup.trivial(phi.target).preimage(phi)
    assert pre.order == brute_kernel_order(phi)
