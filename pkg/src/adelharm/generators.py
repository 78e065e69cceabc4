"""Seeded random instances: groups, homomorphisms, graded models and morphisms."""

from __future__ import annotations

import itertools
from math import gcd, prod

import numpy as np

from .finab import FinAbGroup, GroupHom, Subgroup
from .filtered import GradedModel, QuotSection, SectionFiltration, SectionMorphism, build_graded_model


def factorizations(n: int, smallest: int = 2) -> list[tuple[int, ...]]:
    """Nondecreasing tuples of factors >= 2 with product n (n = 1 gives the empty tuple)."""
    if n == 1:
        return [()]
    out = []
    for d in range(smallest, n + 1):
        if n % d == 0:
            out.extend((d,) + rest for rest in factorizations(n // d, d))
    return out


def all_groups(max_order: int) -> list[FinAbGroup]:
    """Every decomposition into cyclic factors of every order up to max_order."""
    return [FinAbGroup(f) for n in range(1, max_order + 1) for f in factorizations(n)]


def random_group(rng, max_order: int = 36, min_order: int = 1) -> FinAbGroup:
    n = int(rng.integers(min_order, max_order + 1))
    fs = factorizations(n)
    f = list(fs[int(rng.integers(len(fs)))])
    rng.shuffle(f)
    return FinAbGroup(f)


def random_hom(rng, A: FinAbGroup, B: FinAbGroup) -> GroupHom:
    """Random well-defined matrix: entry (i, j) is a multiple of n_i / gcd(n_i, m_j)."""
    rows = []
    for n in B.orders:
        row = []
        for m in A.orders:
            step = n // gcd(n, m)
            row.append(step * int(rng.integers(0, n // step)))
        rows.append(row)
    return GroupHom(A, B, rows)


def _random_automorphism(rng, A: FinAbGroup) -> GroupHom:
    for _ in range(50):
        h = random_hom(rng, A, A)
        if h.is_isomorphism():
            return h
    return GroupHom.identity(A)


def random_hom_of_kind(rng, kind: str, max_order: int = 24) -> GroupHom:
    """kind in {"injective", "surjective", "neither", "any"}."""
    if kind == "any":
        A, B = random_group(rng, max_order), random_group(rng, max_order)
        return random_hom(rng, A, B)
    for _ in range(200):
        A, B = random_group(rng, max_order), random_group(rng, max_order)
        h = random_hom(rng, A, B)
        inj, surj = h.is_injective(), h.is_surjective()
        if kind == "injective" and inj or kind == "surjective" and surj or kind == "neither" and not inj and not surj:
            return h
    # constructed fallbacks: inclusion into / projection from a product
    A = random_group(rng, max(2, max_order // 4), 2)
    C = random_group(rng, 4, 2)
    AC = FinAbGroup(A.orders + C.orders)
    if kind == "injective":
        incl = GroupHom(A, AC, [[int(i == j) for j in range(A.rank)] for i in range(AC.rank)])
        return _random_automorphism(rng, AC) @ incl
    if kind == "surjective":
        return GroupHom(AC, A, [[int(i == j) for j in range(AC.rank)] for i in range(A.rank)]) @ _random_automorphism(rng, AC)
    return GroupHom(AC, AC, [[int(i == j and i >= A.rank) for j in range(AC.rank)] for i in range(AC.rank)]) if A.rank else GroupHom.zero(C, C)


def random_composable(rng, max_order: int = 24) -> tuple[GroupHom, GroupHom]:
    """(phi: A -> B, psi: B -> C)."""
    A, B, C = (random_group(rng, max_order) for _ in range(3))
    return random_hom(rng, A, B), random_hom(rng, B, C)


# --------------------------------------------------------------------------
# graded models


def random_components(rng, level: int, orders=(2, 3, 4), box: int = 3, max_factors: int = 1, min_keys: int = 1) -> dict:
    ranges = [range(int(rng.integers(-1, 1)), int(rng.integers(-1, 1)) + box) for _ in range(level)]
    cells = list(itertools.product(*ranges))
    rng.shuffle(cells)
    k = int(rng.integers(min_keys, min(len(cells), box ** level) + 1))
    comps = {}
    for key in sorted(cells[:k]):
        nf = int(rng.integers(1, max_factors + 1))
        comps[tuple(int(v) for v in key)] = [int(orders[int(rng.integers(len(orders)))]) for _ in range(nf)]
    return comps


def random_graded_model(rng, level: int, orders=(2, 3, 4), box: int = 3, max_order: int = 512, max_factors: int = 1):
    """Random model with support inside a box of side ``box``; ambient order capped."""
    for _ in range(100):
        comps = random_components(rng, level, orders, box, max_factors)
        if prod(m for v in comps.values() for m in v) <= max_order:
            return build_graded_model(comps, level)
    return build_graded_model({(0,) * level: [orders[0]]}, level)


def exhaustive_models(level: int = 2, orders=(2, 3), box: int = 2) -> list[tuple[GradedModel, SectionFiltration]]:
    """Every model with support in {0..box-1}^level and one cyclic factor per key."""
    cells = list(itertools.product(range(box), repeat=level))
    out = []
    for choice in itertools.product((None,) + tuple(orders), repeat=len(cells)):
        comps = {c: [m] for c, m in zip(cells, choice) if m is not None}
        if comps:
            out.append(build_graded_model(comps, level))
    return out


def lex_triangular_hom(rng, src: GradedModel, tgt: GradedModel, density: float = 0.7) -> GroupHom:
    """Ambient hom sending A_r into the target components with index <= r (lex)."""
    rows = [[0] * src.ambient.rank for _ in range(tgt.ambient.rank)]
    for ks, (a, b) in src.slices.items():
        for kt, (c, d) in tgt.slices.items():
            if kt > ks or rng.random() > density:
                continue
            for j in range(a, b):
                m = src.ambient.orders[j]
                for i in range(c, d):
                    n = tgt.ambient.orders[i]
                    step = n // gcd(n, m)
                    rows[i][j] = step * int(rng.integers(0, n // step))
    return GroupHom(src.ambient, tgt.ambient, rows)


def random_morphism(rng, level: int, src=None, tgt=None, **kw) -> SectionMorphism:
    if src is None:
        src = random_graded_model(rng, level, **kw)
    if tgt is None:
        tgt = random_graded_model(rng, level, **kw)
    (ms, X), (mt, Y) = src, tgt
    return SectionMorphism(lex_triangular_hom(rng, ms, mt), X, Y)


def random_cokernel_instance(rng, level: int, **kw) -> tuple[SectionMorphism, SectionMorphism]:
    """phi: X -> X/S (a cokernel) and psi: Y -> X/S."""
    mx, X = random_graded_model(rng, level, **kw)
    elems = X.top.elements_array()
    gens = [tuple(int(v) for v in elems[int(rng.integers(len(elems)))]) for _ in range(int(rng.integers(0, 3)))]
    S = Subgroup(mx.ambient, gens) if gens else Subgroup.trivial(mx.ambient)
    Z = QuotSection(X, S)
    phi = SectionMorphism(GroupHom.identity(mx.ambient), X, Z)
    my, Y = random_graded_model(rng, level, **kw)
    if rng.random() < 0.2:
        h = GroupHom.zero(my.ambient, mx.ambient)
    else:
        h = lex_triangular_hom(rng, my, mx)
    return phi, SectionMorphism(h, Y, Z)


def model_seed(seed: int, *labels) -> np.random.Generator:
    """Independent stream per (seed, labels) so cases can run in any order."""
    key = [int(seed)] + [sum(ord(c) * 31 ** k for k, c in enumerate(str(l))) % (2**31) for l in labels]
    return np.random.default_rng(key)
