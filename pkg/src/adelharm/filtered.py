"""Filtered objects of finite level, built from subquotients of one finite group.

A bounded level-n object is described by a *section filtration*: an ambient
finite group, two subgroups ``bottom <= top`` and an increasing chain
``step(i)`` running from ``bottom`` (for ``i <= lo``) to ``top`` (``i >= hi``).
The quotient ``step(j)/step(i)`` carries a level n-1 section filtration of
its own, returned by ``inner(i, j)``.  Every window quotient is therefore a
subquotient of the same ambient group, and transition maps are induced by
the identity.

Graded models, Pontryagin duals (annihilators in the dual group), kernels
(intersection), cokernels (sum with an image) and products all fit this
shape.  Objects whose support is unbounded are handled by
:class:`LazyFilteredObject` and :class:`RegionModel`, which only answer
questions that the declared data can decide.
"""

from __future__ import annotations

import enum
import itertools
from dataclasses import dataclass
from functools import cached_property
from math import prod
from typing import Callable, Iterable, Mapping, Sequence

from .finab import (
    FinAbGroup,
    GroupElement,
    GroupError,
    GroupHom,
    Section,
    Subgroup,
    _residues,
    dual_group,
    dual_hom,
    kernel_subgroup,
    pairing0,
)
from .scalars import QmodZ


class FilterError(ValueError):
    pass


class NeedsWindow(FilterError):
    """The object is unbounded and no window was supplied."""


class InvalidMorphism(FilterError):
    pass


class Tri(enum.Enum):
    """Three-valued answer for questions about lazily described objects."""

    TRUE = "true"
    FALSE = "false"
    UNKNOWN = "unknown"

    def __bool__(self):
        if self is Tri.UNKNOWN:
            raise ValueError("undecided three-valued result used as a boolean")
        return self is Tri.TRUE

    @classmethod
    def of(cls, b: bool) -> "Tri":
        return cls.TRUE if b else cls.FALSE


# --------------------------------------------------------------------------
# graded models


def _key(k) -> tuple[int, ...]:
    if isinstance(k, str):
        k = k.strip().strip("()[]")
        return tuple(int(p) for p in k.split(",") if p.strip())
    if isinstance(k, int):
        return (k,)
    return tuple(int(v) for v in k)


class GradedModel:
    """``A = sum of A_r`` over a finite support in Z^n with the standard filtration."""

    def __init__(self, level: int, components: Mapping):
        if level < 1:
            raise FilterError("graded models have level at least 1")
        comps = {}
        for k, orders in components.items():
            key = _key(k)
            if len(key) != level:
                raise FilterError(f"index {key} should have {level} coordinates")
            orders = tuple(int(m) for m in orders)
            if any(m < 2 for m in orders):
                raise FilterError(f"component {key} has a trivial factor in {list(orders)}")
            if orders:
                comps[key] = orders
        self.level = level
        self.components = dict(sorted(comps.items()))
        self.keys = tuple(self.components)
        slices = {}
        pos = 0
        orders: list[int] = []
        for k, o in self.components.items():
            slices[k] = (pos, pos + len(o))
            pos += len(o)
            orders.extend(o)
        self.slices = slices
        self.ambient = FinAbGroup(orders)

    def coordinate_subgroup(self, keys: Iterable) -> Subgroup:
        gens = []
        n = self.ambient.rank
        for k in keys:
            a, b = self.slices[k]
            for t in range(a, b):
                gens.append([int(t == u) for u in range(n)])
        return Subgroup(self.ambient, gens)

    def component_of(self, x) -> dict:
        res = _residues(x)
        return {k: res[a:b] for k, (a, b) in self.slices.items()}

    @cached_property
    def filtration(self) -> "GradedSection":
        return GradedSection(self, frozenset(self.keys), frozenset(), 0)

    def to_dict(self) -> dict:
        return {
            "level": self.level,
            "components": {"(" + ",".join(map(str, k)) + ")": list(v) for k, v in self.components.items()},
        }

    def __eq__(self, other):
        return isinstance(other, GradedModel) and self.level == other.level and self.components == other.components

    def __hash__(self):
        return hash((self.level, tuple(self.components.items())))

    def __repr__(self):
        return f"GradedModel(level={self.level}, components={ {k: list(v) for k, v in self.components.items()} })"


def build_graded_model(components: Mapping, level: int | None = None) -> tuple[GradedModel, "GradedSection"]:
    if level is None:
        keys = [_key(k) for k in components]
        if not keys:
            raise FilterError("level must be given for an empty support")
        level = len(keys[0])
    model = GradedModel(level, components)
    return model, model.filtration


# --------------------------------------------------------------------------
# section filtrations


class SectionFiltration:
    """Base class; subclasses define ``top``, ``bottom``, ``_step``, ``lo``, ``hi``, ``_inner``."""

    level: int
    ambient: FinAbGroup
    lo: int
    hi: int

    def __init__(self):
        self._steps: dict[int, Subgroup] = {}
        self._inners: dict[tuple[int, int], SectionFiltration] = {}
        self._sections: dict[tuple[int, int], Section] = {}

    # to be provided --------------------------------------------------------
    @property
    def key(self) -> tuple:
        raise NotImplementedError

    def _step(self, i: int) -> Subgroup:
        raise NotImplementedError

    def _inner(self, i: int, j: int) -> "SectionFiltration":
        raise NotImplementedError

    # derived ---------------------------------------------------------------
    def __eq__(self, other):
        return isinstance(other, SectionFiltration) and self.key == other.key

    def __hash__(self):
        return hash(self.key)

    def step(self, i: int) -> Subgroup:
        if i <= self.lo:
            return self.bottom
        if i >= self.hi:
            return self.top
        s = self._steps.get(i)
        if s is None:
            s = self._steps[i] = self._step(i)
        return s

    def clamp(self, i: int) -> int:
        return min(max(i, self.lo), self.hi)

    def inner(self, i: int, j: int) -> "SectionFiltration":
        if self.level < 2:
            raise FilterError("a level-1 object has plain groups as quotients")
        if i > j:
            raise FilterError(f"window ({i}, {j}) is reversed")
        i, j = self.clamp(i), self.clamp(j)
        if i > j:
            i = j
        got = self._inners.get((i, j))
        if got is None:
            got = self._inners[(i, j)] = self._inner(i, j)
        return got

    def section(self, i: int, j: int) -> Section:
        if i > j:
            raise FilterError(f"window ({i}, {j}) is reversed")
        i, j = self.clamp(i), self.clamp(j)
        if i > j:
            i = j
        got = self._sections.get((i, j))
        if got is None:
            got = self._sections[(i, j)] = Section(self.step(j), self.step(i))
        return got

    def quotient(self, i: int, j: int):
        """Q(i, j): a FinAbGroup at level 1, else the level n-1 inner object."""
        if self.level == 1:
            return self.section(i, j).group
        return self.inner(i, j)

    @cached_property
    def underlying(self) -> Section:
        return Section(self.top, self.bottom)

    @property
    def order(self) -> int:
        return self.underlying.order

    def is_zero(self) -> bool:
        return self.top.order == self.bottom.order

    def window(self) -> range:
        """Indices where the chain can change, padded by one on each side."""
        return range(self.lo - 1, self.hi + 2)

    def total_window(self) -> tuple[int, int]:
        return (self.lo, self.hi)

    def step_subgroup(self, i: int) -> Subgroup:
        """step(i) as a subgroup of the underlying group top/bottom."""
        U = self.underlying
        return Subgroup(U.group, [U.project(g) for g in self.step(i).generators])

    def alpha(self, i: int, j: int, k: int):
        """Q(i, j) -> Q(i, k)."""
        self._check_triple(i, j, k)
        if self.level == 1:
            return self.section(i, j).induced_hom(GroupHom.identity(self.ambient), self.section(i, k))
        return SectionMorphism(GroupHom.identity(self.ambient), self.inner(i, j), self.inner(i, k))

    def pi(self, i: int, j: int, k: int):
        """Q(i, k) -> Q(j, k)."""
        self._check_triple(i, j, k)
        if self.level == 1:
            return self.section(i, k).induced_hom(GroupHom.identity(self.ambient), self.section(j, k))
        return SectionMorphism(GroupHom.identity(self.ambient), self.inner(i, k), self.inner(j, k))

    @staticmethod
    def _check_triple(i, j, k):
        if not i <= j <= k:
            raise FilterError(f"indices must satisfy i <= j <= k, got ({i}, {j}, {k})")

    def is_discrete(self) -> Tri:
        return Tri.TRUE

    def is_compact(self) -> Tri:
        return Tri.TRUE

    def describe(self) -> str:
        return f"{type(self).__name__}(level={self.level}, |top/bottom|={self.order}, window=[{self.lo}, {self.hi}])"

    __repr__ = describe


def _bounds(indices: Iterable[int]) -> tuple[int, int]:
    idx = list(indices)
    if not idx:
        return (0, 0)
    return (min(idx) - 1, max(idx))


class GradedSection(SectionFiltration):
    """The standard filtration of a graded model on the keys ``top \\ bottom``.

    ``depth`` is the coordinate of the index tuple that this level filters by.
    """

    def __init__(self, model: GradedModel, top_keys: frozenset, bottom_keys: frozenset, depth: int):
        super().__init__()
        self.model = model
        self.ambient = model.ambient
        self.top_keys = frozenset(top_keys)
        self.bottom_keys = frozenset(bottom_keys)
        self.depth = depth
        self.level = model.level - depth
        self.free_keys = sorted(self.top_keys - self.bottom_keys)
        self.lo, self.hi = _bounds(k[depth] for k in self.free_keys)
        self.top = model.coordinate_subgroup(sorted(self.top_keys))
        self.bottom = model.coordinate_subgroup(sorted(self.bottom_keys))

    @property
    def key(self):
        return ("graded", self.model, tuple(sorted(self.top_keys)), tuple(sorted(self.bottom_keys)), self.depth)

    def step_keys(self, i: int) -> frozenset:
        return self.bottom_keys | {k for k in self.free_keys if k[self.depth] <= i}

    def _step(self, i):
        return self.model.coordinate_subgroup(sorted(self.step_keys(i)))

    def _inner(self, i, j):
        return GradedSection(self.model, self.step_keys(j), self.step_keys(i), self.depth + 1)


def annihilator(S: Subgroup) -> Subgroup:
    """Characters vanishing on S, as the kernel of the restriction map to S^."""
    if not S.generators:
        return Subgroup.whole(dual_group(S.ambient))
    grp, incl = S.materialize()
    return kernel_subgroup(dual_hom(incl))


class DualSection(SectionFiltration):
    """The Pontryagin dual: step(i) = annihilator of base.step(-i) in the dual group.

    Q^(i, j) is dual to base Q(-j, -i), so inner(i, j) is the dual of
    base.inner(-j, -i).
    """

    def __init__(self, base: SectionFiltration):
        super().__init__()
        self.base = base
        self.level = base.level
        self.ambient = dual_group(base.ambient)
        self.lo, self.hi = -base.hi, -base.lo
        self.top = annihilator(base.bottom)
        self.bottom = annihilator(base.top)

    @property
    def key(self):
        return ("dual", self.base.key)

    def _step(self, i):
        return annihilator(self.base.step(-i))

    def _inner(self, i, j):
        return dual_object(self.base.inner(-j, -i))


def dual_object(X: SectionFiltration) -> SectionFiltration:
    d = X.__dict__.get("_dual")
    if d is None:
        d = X.__dict__["_dual"] = DualSection(X)
    return d


class SubSection(SectionFiltration):
    """The subobject S/bottom with the induced filtration step(i) ∩ S."""

    def __init__(self, base: SectionFiltration, S: Subgroup):
        super().__init__()
        if not (base.bottom <= S and S <= base.top):
            raise FilterError("subobject must lie between bottom and top")
        self.base = base
        self.S = S
        self.level = base.level
        self.ambient = base.ambient
        self.lo, self.hi = base.lo, base.hi
        self.top = S
        self.bottom = base.bottom

    @property
    def key(self):
        return ("sub", self.base.key, self.S.generators)

    def _step(self, i):
        return self.base.step(i).intersect(self.S)

    def _inner(self, i, j):
        # step(j)/step(i) is identified with (S ∩ F(j) + F(i)) / F(i)
        return SubSection(self.base.inner(i, j), self.S.intersect(self.base.step(j)) + self.base.step(i))


class QuotSection(SectionFiltration):
    """The quotient top/(bottom + I) with the image filtration step(i) + I."""

    def __init__(self, base: SectionFiltration, I: Subgroup):
        super().__init__()
        if not I <= base.top:
            raise FilterError("quotient subgroup must lie in the top")
        self.base = base
        self.I = I + base.bottom
        self.level = base.level
        self.ambient = base.ambient
        self.lo, self.hi = base.lo, base.hi
        self.top = base.top
        self.bottom = self.I

    @property
    def key(self):
        return ("quot", self.base.key, self.I.generators)

    def _step(self, i):
        return self.base.step(i) + self.I

    def _inner(self, i, j):
        # (F(j) + I)/(F(i) + I) is identified with F(j)/(F(i) + I ∩ F(j))
        return QuotSection(self.base.inner(i, j), self.I.intersect(self.base.step(j)))


def _embed(S: Subgroup, P: FinAbGroup, offset: int) -> list[list[int]]:
    n = P.rank
    out = []
    for g in S.generators:
        v = [0] * n
        v[offset : offset + len(g)] = g
        out.append(v)
    return out


class ProductSection(SectionFiltration):
    """X x Y in the product ambient with step(i) = X.step(i) x Y.step(i)."""

    def __init__(self, X: SectionFiltration, Y: SectionFiltration):
        super().__init__()
        if X.level != Y.level:
            raise FilterError("product of objects of different level")
        self.X, self.Y = X, Y
        self.level = X.level
        self.ambient = FinAbGroup(X.ambient.orders + Y.ambient.orders)
        self.lo, self.hi = min(X.lo, Y.lo), max(X.hi, Y.hi)
        self.top = self.pair(X.top, Y.top)
        self.bottom = self.pair(X.bottom, Y.bottom)

    def pair(self, S: Subgroup, T: Subgroup) -> Subgroup:
        return Subgroup(self.ambient, _embed(S, self.ambient, 0) + _embed(T, self.ambient, self.X.ambient.rank))

    def projections(self) -> tuple[GroupHom, GroupHom]:
        a, b = self.X.ambient.rank, self.Y.ambient.rank
        p1 = GroupHom(self.ambient, self.X.ambient, [[int(r == c) for c in range(a + b)] for r in range(a)])
        p2 = GroupHom(self.ambient, self.Y.ambient, [[int(r + a == c) for c in range(a + b)] for r in range(b)])
        return p1, p2

    @property
    def key(self):
        return ("prod", self.X.key, self.Y.key)

    def _step(self, i):
        return self.pair(self.X.step(i), self.Y.step(i))

    def _inner(self, i, j):
        return ProductSection(self.X.inner(i, j), self.Y.inner(i, j))


class CoarseSection(SectionFiltration):
    """The same subquotient with the chain collapsed: step(i) = top for every i."""

    def __init__(self, base: SectionFiltration):
        super().__init__()
        self.base = base
        self.level = base.level
        self.ambient = base.ambient
        self.lo = self.hi = base.lo
        self.top, self.bottom = base.top, base.bottom

    @property
    def key(self):
        return ("coarse", self.base.key)

    def _step(self, i):
        return self.top

    def _inner(self, i, j):
        return CoarseSection(self.base.inner(self.base.hi, self.base.hi))


class ShiftedSection(SectionFiltration):
    """Reindexed chain: step(i) = base.step(i + shift)."""

    def __init__(self, base: SectionFiltration, shift: int):
        super().__init__()
        self.base, self.shift = base, shift
        self.level = base.level
        self.ambient = base.ambient
        self.lo, self.hi = base.lo - shift, base.hi - shift
        self.top, self.bottom = base.top, base.bottom

    @property
    def key(self):
        return ("shift", self.base.key, self.shift)

    def _step(self, i):
        return self.base.step(i + self.shift)

    def _inner(self, i, j):
        return self.base.inner(i + self.shift, j + self.shift)


class ChainSection(SectionFiltration):
    """A level-1 object from an explicit list of subgroups F(lo+1), ..., F(hi-1)."""

    def __init__(self, ambient: FinAbGroup, chain: Sequence[Subgroup], start: int = 0, top=None, bottom=None):
        super().__init__()
        self.ambient = ambient
        self.level = 1
        self.top = top if top is not None else Subgroup.whole(ambient)
        self.bottom = bottom if bottom is not None else Subgroup.trivial(ambient)
        self.chain = list(chain)
        self.lo = start - 1
        self.hi = start + len(self.chain)
        self.start = start
        prev = self.bottom
        for s in self.chain + [self.top]:
            if not prev <= s:
                raise FilterError("chain is not increasing")
            prev = s

    @property
    def key(self):
        return ("chain", self.ambient, self.start, tuple(s.generators for s in self.chain), self.top.generators, self.bottom.generators)

    def _step(self, i):
        return self.chain[i - self.start]


# --------------------------------------------------------------------------
# morphisms


class SectionMorphism:
    """A morphism of section filtrations induced by an ambient hom.

    Only requires hom(top) <= target.top and hom(bottom) <= target.bottom;
    compatibility with the chains is a separate question (``is_aligned`` /
    :func:`is_morphism`).
    """

    def __init__(self, hom: GroupHom, source: SectionFiltration, target: SectionFiltration):
        if hom.source != source.ambient or hom.target != target.ambient:
            raise InvalidMorphism("hom does not act between the ambient groups")
        if source.level != target.level:
            raise InvalidMorphism("source and target have different levels")
        if not source.top.image(hom) <= target.top:
            raise InvalidMorphism("hom does not map the source into the target")
        if not source.bottom.image(hom) <= target.bottom:
            raise InvalidMorphism("hom does not map the source bottom into the target bottom")
        self.ambient_hom = hom
        self.source = source
        self.target = target

    @property
    def level(self) -> int:
        return self.source.level

    @cached_property
    def hom(self) -> GroupHom:
        """Map of underlying groups top/bottom."""
        return self.source.underlying.induced_hom(self.ambient_hom, self.target.underlying)

    def component(self, i: int, j: int):
        """Induced map Q_source(i, j) -> Q_target(i, j)."""
        if self.level == 1:
            return self.source.section(i, j).induced_hom(self.ambient_hom, self.target.section(i, j))
        return SectionMorphism(self.ambient_hom, self.source.inner(i, j), self.target.inner(i, j))

    def maps_step(self, i: int, j: int) -> bool:
        return self.source.step(i).image(self.ambient_hom) <= self.target.step(j)

    def is_aligned(self) -> bool:
        """hom(step(i)) <= step(i) on every index and recursively on quotients."""
        X, Y = self.source, self.target
        idx = range(min(X.lo, Y.lo) - 1, max(X.hi, Y.hi) + 2)
        if not all(self.maps_step(i, i) for i in idx):
            return False
        if self.level == 1:
            return True
        return all(self.component(i, j).is_aligned() for i in idx for j in idx if i <= j)

    def compose(self, first: "SectionMorphism") -> "SectionMorphism":
        """self o first."""
        if first.target != self.source:
            raise InvalidMorphism("morphisms are not composable")
        return SectionMorphism(self.ambient_hom @ first.ambient_hom, first.source, self.target)

    def __repr__(self):
        return f"SectionMorphism({self.ambient_hom}, {self.source.describe()} -> {self.target.describe()})"


def is_morphism(m: SectionMorphism, radius: int | None = None) -> bool:
    """The general morphism condition, searched within a window.

    For all i, j there must be i0 <= i and j0 >= j with hom(F(i')) <= G(j)
    and hom(F(i)) <= G(j') for i' <= i0, j' >= j0, and the induced map
    F(i)/F(i') -> G(j')/G(j) must again be a morphism one level down.  Past
    lo/hi the chains are constant, so the search only needs the window.
    """
    X, Y = m.source, m.target
    r = radius if radius is not None else max(X.hi - X.lo, Y.hi - Y.lo) + 2
    idx_i = range(X.lo - 1, X.hi + 2)
    idx_j = range(Y.lo - 1, Y.hi + 2)
    for i in idx_i:
        for j in idx_j:
            found = False
            for i0 in range(i, i - r - 1, -1):
                for j0 in range(j, j + r + 1):
                    ip, jp = min(i0, X.lo), max(j0, Y.hi)
                    # beyond lo/hi the chains are constant, so checking (ip, jp) and (i0, j0) suffices
                    if not (m.maps_step(i0, j) and m.maps_step(ip, j) and m.maps_step(i, j0) and m.maps_step(i, jp)):
                        continue
                    if m.level > 1:
                        sub = _window_morphism(m, i, i0, j, j0)
                        if sub is None or not is_morphism(sub, radius):
                            continue
                    found = True
                    break
                if found:
                    break
            if not found:
                return False
    return True


def _window_morphism(m: SectionMorphism, i, i0, j, j0):
    """Induced F(i)/F(i0) -> G(j0)/G(j) as a level n-1 morphism (None if ill-defined)."""
    X, Y = m.source, m.target
    lo_i = min(i0, i)
    src = X.inner(lo_i, i)
    tgt_full = Y.inner(min(j, j0), max(j, j0))
    try:
        return SectionMorphism(m.ambient_hom, src, tgt_full)
    except InvalidMorphism:
        return None


def identity_morphism(X: SectionFiltration) -> SectionMorphism:
    return SectionMorphism(GroupHom.identity(X.ambient), X, X)


# --------------------------------------------------------------------------
# kernels, cokernels, duals


def kernel_object(m: SectionMorphism) -> tuple[SectionFiltration, SectionMorphism]:
    """Kernel with the induced filtration H(i) = F(i) ∩ K, and its inclusion."""
    X = m.source
    Kpre = m.target.bottom.preimage(m.ambient_hom).intersect(X.top)
    K = SubSection(X, Kpre)
    return K, SectionMorphism(GroupHom.identity(X.ambient), K, X)


def cokernel_object(m: SectionMorphism) -> tuple[SectionFiltration, SectionMorphism]:
    """Cokernel with the image filtration H(i) = G(i) + im, and its projection."""
    Y = m.target
    image = m.source.top.image(m.ambient_hom)
    C = QuotSection(Y, image)
    return C, SectionMorphism(GroupHom.identity(Y.ambient), Y, C)


def dual_morphism(m: SectionMorphism) -> SectionMorphism:
    """m^ : Y^ -> X^ induced by the dual of the ambient hom."""
    return SectionMorphism(dual_hom(m.ambient_hom), dual_object(m.target), dual_object(m.source))


# --------------------------------------------------------------------------
# total filtrations


def total_filtration(X: SectionFiltration, z: Sequence[int]) -> Subgroup:
    """F_tot(z): F(z1) <= F_tot(z) <= F(z1 + 1), recursing into F(z1 + 1)/F(z1)."""
    z = tuple(int(v) for v in z)
    if len(z) != X.level:
        raise FilterError(f"index {z} should have {X.level} coordinates")
    if X.level == 1:
        return X.step(z[0])
    return total_filtration(X.inner(z[0], z[0] + 1), z[1:])


def dual_total_filtration(Y: SectionFiltration, z: Sequence[int]) -> Subgroup:
    """Total filtration of a dual object, indexed so that it decreases in z.

    The dual of F has G(i) = F(-i)^perp; the decreasing chain is
    F^(z1) = G(-z1) and the quotient F^(z1)/F^(z1 + 1) is G(-z1)/G(-z1 - 1).
    """
    z = tuple(int(v) for v in z)
    if len(z) != Y.level:
        raise FilterError(f"index {z} should have {Y.level} coordinates")
    if Y.level == 1:
        return Y.step(-z[0])
    return dual_total_filtration(Y.inner(-z[0] - 1, -z[0]), z[1:])


def dual_filtration(X: SectionFiltration, z: Sequence[int]) -> Subgroup:
    """F^_tot(z) computed on the dual object (compare with perp of F_tot(z))."""
    return dual_total_filtration(dual_object(X), z)


def lex_window(X: SectionFiltration, pad: int = 1) -> list[tuple[int, ...]]:
    """All index tuples in the box where the total filtration can change."""
    ranges = _level_ranges(X, pad)
    return [tuple(z) for z in itertools.product(*ranges)]


def _level_ranges(X: SectionFiltration, pad: int) -> list[range]:
    out = []
    cur = [X]
    for _ in range(X.level):
        lo = min(Y.lo for Y in cur)
        hi = max(Y.hi for Y in cur)
        out.append(range(lo - pad, hi + pad + 1))
        if cur[0].level > 1:
            cur = [Y.inner(i, i + 1) for Y in cur for i in range(Y.lo, Y.hi + 1)]
    return out


# --------------------------------------------------------------------------
# discreteness, compactness and structure sequences


def is_discrete(X) -> Tri:
    return X.is_discrete()


def is_compact(X) -> Tri:
    return X.is_compact()


def discreteness_witness(X: SectionFiltration, S: Subgroup) -> int:
    """Largest index i in the window with S ∩ F(i) = 0 relative to the bottom."""
    best = X.lo
    for i in range(X.lo, X.hi + 1):
        if (S.intersect(X.step(i))).order == (S.intersect(X.bottom)).order:
            best = i
    return best


def discrete_compact_intersection(X: SectionFiltration, D: Subgroup, K: Subgroup) -> int:
    """|D ∩ K| counted inside F(j)/F(i) with K <= F(j) and D ∩ F(i) = 0."""
    if X.is_discrete() is not Tri.TRUE or X.is_compact() is not Tri.TRUE:
        raise FilterError("ambient object must be bounded")
    i = next((t for t in range(X.hi, X.lo - 2, -1) if D.intersect(X.step(t)).order == 1), None)
    j = next((t for t in range(X.lo, X.hi + 2) if K <= X.step(t)), None)
    if i is None or j is None:
        raise FilterError("D is not discrete or K is not compact in the window")
    inter = D.intersect(K)
    return inter.intersect(X.step(j)).order // inter.intersect(X.step(i)).order


@dataclass
class StructureSequence:
    """0 -> D -> A -> K -> 0 with D discrete and K compact, in one ambient."""

    X: SectionFiltration
    D: Subgroup
    cut: tuple
    D_object: SectionFiltration
    K_object: SectionFiltration
    discrete_at: int
    compact_at: int

    @cached_property
    def Khat(self) -> Subgroup:
        """K^ = D^perp inside A^."""
        return self.D.perp()

    @cached_property
    def dual(self) -> SectionFiltration:
        return dual_object(self.X)

    def check(self) -> bool:
        X = self.X
        ok = self.D <= X.top and self.D_object.step(self.discrete_at).order == 1
        ok = ok and self.K_object.step(self.compact_at) == self.K_object.top
        return ok


def standard_splitting(model: GradedModel, cut: Sequence[int]) -> StructureSequence:
    """D = components with index >= cut (lex), K = A/D with the induced filtration."""
    cut = tuple(int(c) for c in cut)
    if len(cut) != model.level:
        raise FilterError(f"cut {cut} should have {model.level} coordinates")
    X = model.filtration
    Dkeys = [k for k in model.keys if k >= cut]
    D = model.coordinate_subgroup(Dkeys)
    D_obj = SubSection(X, D)
    K_obj = QuotSection(X, D)
    disc = max((i for i in range(X.lo, X.hi + 1) if D_obj.step(i).order == 1), default=X.lo)
    comp = min((j for j in range(X.lo, X.hi + 1) if K_obj.step(j) == K_obj.top), default=X.hi)
    return StructureSequence(X, D, cut, D_obj, K_obj, disc, comp)


def all_cuts(model: GradedModel) -> list[tuple[int, ...]]:
    """Every support index plus one point above the whole support."""
    cuts = list(model.keys)
    if model.keys:
        top = max(model.keys)
        cuts.append(top[:-1] + (top[-1] + 1,))
    else:
        cuts.append((0,) * model.level)
    return cuts


# --------------------------------------------------------------------------
# lazily described objects


class LazyFilteredObject:
    """A filtered object known only through a quotient provider and declared bounds.

    ``lo`` (F(i) = 0 for i <= lo) and ``hi`` (F(j) = A for j >= hi) may be
    None when unknown.  ``quotient(i, j)`` returns a FinAbGroup (level 1) or
    another lazy object.
    """

    def __init__(self, level: int, quotient: Callable, lo: int | None = None, hi: int | None = None):
        self.level = level
        self._quotient = quotient
        self.lo = lo
        self.hi = hi

    def quotient(self, i, j):
        if i > j:
            raise FilterError("reversed window")
        return self._quotient(i, j)

    def is_discrete(self, probe: int = 3) -> Tri:
        if self.lo is None:
            return Tri.UNKNOWN
        if self.level == 1:
            return Tri.TRUE
        results = [self.quotient(i, i + 1).is_discrete() for i in range(self.lo, self.lo + probe)]
        if any(r is Tri.FALSE for r in results):
            return Tri.FALSE
        return Tri.TRUE if all(r is Tri.TRUE for r in results) and self.hi is not None else Tri.UNKNOWN

    def is_compact(self, probe: int = 3) -> Tri:
        if self.hi is None:
            return Tri.UNKNOWN
        if self.level == 1:
            return Tri.TRUE
        results = [self.quotient(i, i + 1).is_compact() for i in range(self.hi - probe, self.hi)]
        if any(r is Tri.FALSE for r in results):
            return Tri.FALSE
        return Tri.TRUE if all(r is Tri.TRUE for r in results) and self.lo is not None else Tri.UNKNOWN


INF = None


@dataclass(frozen=True)
class Region:
    """Rectangle of nonzero components [r_lo, r_hi] x [s_lo, s_hi]; None = infinite side."""

    r_lo: int | None
    r_hi: int | None
    s_lo: int | None
    s_hi: int | None
    orders: tuple = (2,)

    def __post_init__(self):
        if self.r_lo is not None and self.r_hi is not None and self.r_lo > self.r_hi:
            raise FilterError("empty region")
        if self.s_lo is not None and self.s_hi is not None and self.s_lo > self.s_hi:
            raise FilterError("empty region")

    def contains(self, r, s) -> bool:
        return (
            (self.r_lo is None or r >= self.r_lo)
            and (self.r_hi is None or r <= self.r_hi)
            and (self.s_lo is None or s >= self.s_lo)
            and (self.s_hi is None or s <= self.s_hi)
        )

    def has_row(self, r) -> bool:
        return (self.r_lo is None or r >= self.r_lo) and (self.r_hi is None or r <= self.r_hi)

    @classmethod
    def parse(cls, obj) -> "Region":
        def side(v):
            if v is None or (isinstance(v, str) and v.strip().lower() in ("inf", "-inf", "+inf")):
                return None
            return int(v)

        if isinstance(obj, Region):
            return obj
        if isinstance(obj, Mapping):
            return cls(side(obj.get("r_lo")), side(obj.get("r_hi")), side(obj.get("s_lo")), side(obj.get("s_hi")), tuple(obj.get("orders", (2,))))
        if isinstance(obj, (list, tuple)) and len(obj) in (4, 5):
            return cls(*(side(v) for v in obj[:4]), *( (tuple(obj[4]),) if len(obj) == 5 else ()))
        raise UnsupportedDescription(f"cannot read {obj!r} as a rectangle")


class UnsupportedDescription(FilterError):
    pass


class RegionModel:
    """A level-2 graded model whose (possibly infinite) support is a union of rectangles."""

    def __init__(self, regions: Iterable):
        if callable(regions):
            raise UnsupportedDescription("only rectangular region descriptions are supported")
        self.regions = tuple(Region.parse(r) for r in regions)

    def _breaks(self, attr_lo: str, attr_hi: str) -> list[int]:
        pts = set()
        for g in self.regions:
            for v in (getattr(g, attr_lo), getattr(g, attr_hi)):
                if v is not None:
                    pts.update((v - 1, v, v + 1))
        return sorted(pts) or [0]

    def _row_bounded(self, r: int, below: bool) -> bool:
        for g in self.regions:
            if g.has_row(r) and (g.s_lo if below else g.s_hi) is None:
                return False
        return True

    def _rows_beyond(self, j: int, upward: bool) -> list[int]:
        """Representative rows r > j (or r < j): every piece between breakpoints."""
        pts = self._breaks("r_lo", "r_hi")
        far = (max(pts) + abs(j) + 5) if upward else (min(pts) - abs(j) - 5)
        reps = [p for p in pts if (p > j if upward else p < j)] + [far]
        return reps

    def condition_a(self) -> bool:
        """exists j, for all r > j, row r is bounded below in s."""
        pts = self._breaks("r_lo", "r_hi")
        for j in pts + [max(pts) + 1]:
            if all(self._row_bounded(r, True) for r in self._rows_beyond(j, True)):
                return True
        return False

    def condition_b(self) -> bool:
        """exists i, for all r < i, row r is bounded above in s."""
        pts = self._breaks("r_lo", "r_hi")
        for i in [min(pts) - 1] + pts:
            if all(self._row_bounded(r, False) for r in self._rows_beyond(i, False)):
                return True
        return False

    def bounds(self) -> tuple[int | None, int | None]:
        rl = [g.r_lo for g in self.regions]
        rh = [g.r_hi for g in self.regions]
        lo = None if any(v is None for v in rl) else (min(rl) - 1 if rl else 0)
        hi = None if any(v is None for v in rh) else (max(rh) if rh else 0)
        return lo, hi

    def is_discrete(self) -> Tri:
        lo, _ = self.bounds()
        if lo is None:
            return Tri.FALSE
        return Tri.of(all(g.s_lo is not None for g in self.regions))

    def is_compact(self) -> Tri:
        _, hi = self.bounds()
        if hi is None:
            return Tri.FALSE
        return Tri.of(all(g.s_hi is not None for g in self.regions))


def conditions_ab_check(regions) -> bool:
    """Whether the graded model with this support admits a structure sequence."""
    model = regions if isinstance(regions, RegionModel) else RegionModel(regions)
    return model.condition_a() and model.condition_b()


# --------------------------------------------------------------------------
# elements in windows and the level-n pairing


@dataclass(frozen=True)
class WindowElement:
    """An element a of F(j), known modulo F(i), given by coordinates in Q(i, j).

    At level 1 ``rep`` is a residue tuple of Q(i, j); deeper, ``rep`` is a
    WindowElement of the inner object ``inner(i, j)``.
    """

    i: int
    j: int
    rep: object

    def to_json(self):
        rep = self.rep.to_json() if isinstance(self.rep, WindowElement) else list(self.rep)
        return {"window": [self.i, self.j], "rep": rep}


def element_from_ambient(X: SectionFiltration, a, window: tuple[int, int] | None = None) -> WindowElement:
    i, j = window if window is not None else X.total_window()
    res = _residues(a)
    if not X.step(j).contains(res):
        raise FilterError(f"{list(res)} does not lie in F({j})")
    if X.level == 1:
        return WindowElement(i, j, X.section(i, j).project(res))
    return WindowElement(i, j, element_from_ambient(X.inner(i, j), res))


def lift_element(X: SectionFiltration, e: WindowElement) -> tuple[int, ...]:
    if X.level == 1:
        return X.section(e.i, e.j).lift(e.rep)
    return lift_element(X.inner(e.i, e.j), e.rep)


def move_element(X: SectionFiltration, e: WindowElement, I: int, J: int) -> WindowElement:
    """Push an element to the window (I, J), I >= i, J >= j, via alpha then pi."""
    if I < e.i or J < e.j or I > J:
        raise FilterError(f"cannot move an element from window ({e.i}, {e.j}) to ({I}, {J})")
    x = lift_element(X, e)
    return element_from_ambient(X, x, (I, J)) if X.step(J).contains(x) else _fail_move(e, I, J)


def _fail_move(e, I, J):
    raise FilterError(f"element of window ({e.i}, {e.j}) does not lie in F({J})")


def pairing_n(X: SectionFiltration, a: WindowElement, chi: WindowElement, dual: SectionFiltration | None = None) -> QmodZ:
    """(a, chi) for a in F(j) mod F(i) and chi a window element of the dual object.

    chi lives in window (k, l) of the dual, i.e. in F(-l)^perp modulo
    F(-k)^perp.  The value is defined when F(i) <= F(-l) and F(j) <= F(-k);
    it is computed on representatives and does not depend on them.
    """
    Y = dual if dual is not None else dual_object(X)
    if not (X.clamp(a.i) <= X.clamp(-chi.j) and X.clamp(a.j) <= X.clamp(-chi.i)):
        raise FilterError(
            f"incompatible windows: element ({a.i}, {a.j}) and character ({chi.i}, {chi.j})"
        )
    x = X.ambient.element(lift_element(X, a))
    c = Y.ambient.element(lift_element(Y, chi))
    return pairing0(x, c)


# --------------------------------------------------------------------------
# generic window providers


class WindowProvider:
    """Level-1 object given only by Q(i, j), alpha and pi on a finite window."""

    level = 1

    def __init__(self, lo: int, hi: int, quotient, alpha, pi):
        self.lo, self.hi = lo, hi
        self._q, self._a, self._p = quotient, alpha, pi

    def quotient(self, i, j) -> FinAbGroup:
        return self._q(i, j)

    def alpha(self, i, j, k) -> GroupHom:
        return self._a(i, j, k)

    def pi(self, i, j, k) -> GroupHom:
        return self._p(i, j, k)

    def window(self):
        return range(self.lo - 1, self.hi + 2)

    @classmethod
    def of(cls, X: SectionFiltration) -> "WindowProvider":
        if X.level != 1:
            raise FilterError("window providers are level-1 objects")
        return cls(X.lo, X.hi, X.quotient, X.alpha, X.pi)


def dual_provider(P) -> WindowProvider:
    """Q^(i, j) = Q(-j, -i)^, alpha^ = (pi at reversed indices)^, pi^ = (alpha reversed)^."""
    return WindowProvider(
        -P.hi,
        -P.lo,
        lambda i, j: dual_group(P.quotient(-j, -i)),
        lambda i, j, k: dual_hom(P.pi(-k, -j, -i)),
        lambda i, j, k: dual_hom(P.alpha(-k, -j, -i)),
    )
