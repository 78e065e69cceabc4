import numpy as np
import pytest
from hypothesis import given, strategies as st

from adelharm.category import (
    Chain,
    Equivalence,
    corrupted_provider,
    filtration_equivalence_check,
    is_cokernel,
    pullback_cokernel_check,
    quasi_strong_check,
    strong_object_check,
)
from adelharm.filtered import (
    FilterError,
    GradedSection,
    SectionMorphism,
    WindowProvider,
    build_graded_model,
    dual_object,
    dual_provider,
    identity_morphism,
)
from adelharm.finab import FinAbGroup, GroupHom, Subgroup
from adelharm.generators import (
    exhaustive_models,
    random_cokernel_instance,
    random_graded_model,
    random_morphism,
)

Z4_MODEL = {(0,): [4], (1,): [4]}


def test_graded_models_are_strong():
    for m, X in exhaustive_models(level=2, orders=(2, 3), box=2)[::5]:
        assert strong_object_check(X)
    _, X = build_graded_model({(-1,): [2], (0,): [3], (1,): [4]})
    assert strong_object_check(X)


def test_zero_object_is_strong():
    _, X = build_graded_model({}, level=1)
    assert strong_object_check(X)


def test_dual_objects_are_strong():
    _, X = build_graded_model({(-1,): [2], (0,): [4], (2,): [3]})
    assert strong_object_check(dual_object(X))
    assert strong_object_check(dual_provider(WindowProvider.of(X)))
    _, X2 = build_graded_model({(0, 0): [2], (0, 1): [3], (1, 0): [4]})
    assert strong_object_check(dual_object(X2))


def test_corrupted_provider_fails_with_triple():
    _, X = build_graded_model({(-1,): [2], (0,): [2], (1,): [4]})
    r = strong_object_check(corrupted_provider(X))
    assert not r
    i, j, k = r.detail["triple"]
    assert i <= j <= k and "alpha" in r.detail["reason"]


def test_quasi_strong_doubling():
    m, X = build_graded_model(Z4_MODEL)
    phi = SectionMorphism(GroupHom(m.ambient, m.ambient, [[2, 0], [0, 2]]), X, X)
    r = quasi_strong_check(phi)
    assert r and r.detail["kernel_order"] == 4 and r.detail["image_order"] == 4
    assert "factorization" in r.detail


def test_quasi_strong_identity_between_filtrations():
    A = FinAbGroup([2, 2])
    F = _chain_section(A, Subgroup(A, [[1, 0]]))
    G = _chain_section(A, Subgroup(A, [[0, 1]]))
    r = quasi_strong_check(SectionMorphism(GroupHom.identity(A), F, G))
    assert r and r.detail["shift"] > 0
    assert filtration_equivalence_check(F, G) is Equivalence.EQUIVALENT


def _chain_section(A, S):
    """Level-1 section with 0 < S < A at indices 0 and 1."""
    from adelharm.filtered import SectionFiltration

    class Three(SectionFiltration):
        level = 1

        def __init__(self):
            super().__init__()
            self.ambient = A
            self.top, self.bottom = Subgroup.whole(A), Subgroup.trivial(A)
            self.lo, self.hi = -1, 1

        @property
        def key(self):
            return ("three", A.orders, tuple(map(tuple, S.generators)))

        def _step(self, i):
            return S

    return Three()


@pytest.mark.parametrize("seed", range(6))
def test_composition_of_quasi_strong(seed):
    rng = np.random.default_rng(seed)
    ms = [random_graded_model(rng, 1, max_order=64) for _ in range(3)]
    phi = random_morphism(rng, 1, ms[0], ms[1])
    psi = random_morphism(rng, 1, ms[1], ms[2])
    if quasi_strong_check(phi) and quasi_strong_check(psi):
        assert quasi_strong_check(psi.compose(phi))


def test_pullback_mod2():
    A4, A2 = FinAbGroup([4]), FinAbGroup([2])
    _, X = build_graded_model({(0,): [4]})
    _, Z = build_graded_model({(0,): [2]})
    phi = SectionMorphism(GroupHom(A4, A2, [[1]]), X, Z)
    r = pullback_cokernel_check(phi, identity_morphism(Z))
    assert r and r.detail["pullback_order"] == 4


def test_pullback_zero_map():
    _, X = build_graded_model({(0,): [4]})
    _, Z = build_graded_model({(0,): [2]})
    _, Y = build_graded_model({(0,): [3], (1,): [2]})
    phi = SectionMorphism(GroupHom(X.ambient, Z.ambient, [[1]]), X, Z)
    psi = SectionMorphism(GroupHom.zero(Y.ambient, Z.ambient), Y, Z)
    r = pullback_cokernel_check(phi, psi)
    assert r and r.detail["pullback_order"] == 2 * 6
    assert r.detail["isomorphic_to"] == "ker(phi) x Y"


def test_pullback_of_iso():
    _, X = build_graded_model({(0,): [3]})
    r = pullback_cokernel_check(identity_morphism(X), identity_morphism(X))
    assert r and r.detail["pullback_order"] == 3


def test_pullback_rejects_non_cokernel():
    m, X = build_graded_model({(0,): [2]})
    _, Y = build_graded_model({(0,): [2], (1,): [2]})
    phi = SectionMorphism(GroupHom.zero(X.ambient, Y.ambient), X, Y)
    assert not is_cokernel(phi)
    with pytest.raises(FilterError):
        pullback_cokernel_check(phi, identity_morphism(Y))


@given(st.integers(0, 10_000), st.sampled_from([1, 2]))
def test_pullback_random(seed, level):
    phi, psi = random_cokernel_instance(np.random.default_rng(seed), level, max_order=64)
    assert pullback_cokernel_check(phi, psi)


def test_equivalence_examples():
    m, X = build_graded_model({(-1,): [2], (0,): [3], (2,): [2]})
    assert filtration_equivalence_check(X, X) is Equivalence.EQUIVALENT
    G = Chain(m.ambient, lambda i: X.step(i + 5), X.lo - 5, X.hi - 5)
    assert filtration_equivalence_check(Chain.of(X), G) is Equivalence.EQUIVALENT


def test_equivalence_unbounded_is_unknown():
    A = FinAbGroup([2])
    whole, zero = Subgroup.whole(A), Subgroup.trivial(A)
    F = Chain(A, lambda i: whole if i >= 0 else zero, lo=None, hi=None)
    assert filtration_equivalence_check(F, F, window=(-3, 3)) is Equivalence.UNKNOWN
    with pytest.raises(FilterError):
        filtration_equivalence_check(F, F)
    with pytest.raises(FilterError):
        filtration_equivalence_check(F, Chain(FinAbGroup([3]), lambda i: Subgroup.whole(FinAbGroup([3])), 0, 0))


def test_equivalence_not_in_window():
    A = FinAbGroup([2])
    whole, zero = Subgroup.whole(A), Subgroup.trivial(A)
    F = Chain(A, lambda i: whole if i >= 0 else zero)
    G = Chain(A, lambda i: zero)
    assert filtration_equivalence_check(F, G, window=(0, 2)) is Equivalence.NOT_EQUIVALENT_IN_WINDOW
