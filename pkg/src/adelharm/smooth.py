"""Smooth functions and distributions on bounded filtered objects, as window germs.

A germ is one window (i, j) of a filtered object together with a function on
the finite quotient Q(i, j) = F(j)/F(i).  The four flavors differ in how a
germ is carried to a larger window:

    E, E_tilde              i -> i' (finer):  pull back along pi
                            j -> j' (larger): extend by zero (push along alpha)
    E_prime, E_tilde_prime  i -> i':          pull back along pi, divided by |ker pi|
                            j -> j':          push forward along alpha

so that restriction back to the original window is the identity and all
pairings, transforms and evaluations are independent of the window used.
Quotients of bounded objects are finite, so the data of a level-n germ is
stored on Q(i, j) directly; the filtration of Q(i, j) is kept through the
parent object and :meth:`SmoothGerm.data_germ` exposes the level n-1 view.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Sequence

import numpy as np

from .category import quasi_strong_check
from .cyclovec import CycloVector
from .finab import FinAbGroup, GroupElement, GroupError, GroupHom, Section, _residues, double_dual_iso, dual_group
from .filtered import (
    FilterError,
    SectionFiltration,
    SectionMorphism,
    WindowElement,
    dual_object,
    element_from_ambient,
    lift_element,
)
from .fourier import fourier
from .funcspace import FnOnGroup, pair_fn, pullback, pushforward, translate
from .scalars import CycloScalar, _power_table, lcm

FLAVORS = ("E", "E_tilde", "E_prime", "E_tilde_prime")
FUNCTION_FLAVORS = ("E", "E_tilde")
DISTRIBUTION_FLAVORS = ("E_prime", "E_tilde_prime")
PAIRS = {"E_prime": "E", "E_tilde_prime": "E_tilde"}
TRANSFORM_FLAVOR = {
    "F": ("E", "E_tilde_prime"),
    "F_prime": ("E_prime", "E_tilde"),
    "F_tilde": ("E_tilde", "E_prime"),
    "F_tilde_prime": ("E_tilde_prime", "E"),
}
INVERSE = {"F": "F_tilde_prime", "F_prime": "F_tilde", "F_tilde": "F_prime", "F_tilde_prime": "F"}


class GermError(FilterError):
    pass


def _alpha(X: SectionFiltration, i, j, k) -> GroupHom:
    return X.section(i, j).induced_hom(GroupHom.identity(X.ambient), X.section(i, k))


def _pi(X: SectionFiltration, i, j, k) -> GroupHom:
    return X.section(i, k).induced_hom(GroupHom.identity(X.ambient), X.section(j, k))


def _kernel_order(h: GroupHom) -> int:
    return h.source.order // h.image().order


class SmoothGerm:
    __slots__ = ("flavor", "parent", "window", "data")

    def __init__(self, flavor: str, parent: SectionFiltration, window: Sequence[int], data: FnOnGroup):
        if flavor not in FLAVORS:
            raise GermError(f"unknown flavor {flavor!r}")
        i, j = (parent.clamp(int(v)) for v in window)
        if i > j:
            raise GermError(f"window ({window[0]}, {window[1]}) is reversed")
        grp = parent.section(i, j).group
        if data.parent != grp:
            raise GermError(f"data lives on {data.parent}, window ({i}, {j}) has quotient {grp}")
        self.flavor = flavor
        self.parent = parent
        self.window = (i, j)
        self.data = data

    # construction ---------------------------------------------------------
    @classmethod
    def from_ambient_function(cls, flavor: str, X: SectionFiltration, values) -> "SmoothGerm":
        """Germ on the total window from a function on the underlying group."""
        i, j = X.total_window()
        f = values if isinstance(values, FnOnGroup) else FnOnGroup.from_values(X.section(i, j).group, values)
        return cls(flavor, X, (i, j), f)

    @classmethod
    def zero(cls, flavor: str, X: SectionFiltration, window=None) -> "SmoothGerm":
        i, j = window if window is not None else X.total_window()
        return cls(flavor, X, (i, j), FnOnGroup.zero(X.section(i, j).group))

    @classmethod
    def random(cls, flavor: str, X: SectionFiltration, rng, window=None, conductor=None) -> "SmoothGerm":
        if window is None:
            a, b = sorted(int(v) for v in rng.integers(X.lo, X.hi + 1, size=2))
            window = (a, b)
        grp = X.section(*window).group
        return cls(flavor, X, window, FnOnGroup.random(grp, rng, conductor=conductor))

    @property
    def is_function(self) -> bool:
        return self.flavor in FUNCTION_FLAVORS

    @property
    def section(self) -> Section:
        return self.parent.section(*self.window)

    # windows --------------------------------------------------------------
    def extend(self, I: int, J: int) -> "SmoothGerm":
        """Carry the germ to a window (I, J) with I <= i and J >= j."""
        X = self.parent
        i, j = self.window
        I, J = X.clamp(I), X.clamp(J)
        if I > i or J < j:
            raise GermError(f"window ({I}, {J}) does not contain ({i}, {j})")
        f = self.data
        if I < i:
            p = _pi(X, I, i, j)
            f = pullback(p, f)
            if not self.is_function:
                f = f.scale(Fraction(1, _kernel_order(p)))
        if J > j:
            f = pushforward(_alpha(X, I, j, J), f)
        return SmoothGerm(self.flavor, X, (I, J), f)

    def restrict(self, i2: int, j2: int) -> "SmoothGerm":
        """Left inverse of :meth:`extend` (drops information outside the window)."""
        X = self.parent
        i, j = self.window
        i2, j2 = X.clamp(i2), X.clamp(j2)
        if i2 < i or j2 > j or i2 > j2:
            raise GermError(f"window ({i2}, {j2}) is not inside ({i}, {j})")
        f = self.data
        if j2 < j:
            f = pullback(_alpha(X, i, j2, j), f)
        if i2 > i:
            p = _pi(X, i, i2, j2)
            f = pushforward(p, f)
            if self.is_function:
                f = f.scale(Fraction(1, _kernel_order(p)))
        return SmoothGerm(self.flavor, X, (i2, j2), f)

    def total(self) -> "SmoothGerm":
        return self.extend(*self.parent.total_window())

    def common(self, other: "SmoothGerm") -> tuple["SmoothGerm", "SmoothGerm"]:
        if self.parent != other.parent:
            raise GermError("germs live on different objects")
        I = min(self.window[0], other.window[0])
        J = max(self.window[1], other.window[1])
        return self.extend(I, J), other.extend(I, J)

    def data_germ(self) -> "SmoothGerm":
        """The data as a level n-1 germ on the quotient object Q(i, j) (total window)."""
        if self.parent.level < 2:
            raise GermError("level-1 germs carry plain functions")
        Q = self.parent.inner(*self.window)
        iso = Q.underlying.induced_hom(GroupHom.identity(Q.ambient), self.section)
        return SmoothGerm(self.flavor, Q, Q.total_window(), pullback(iso, self.data))

    # linear structure -----------------------------------------------------
    def _same_kind(self, other: "SmoothGerm"):
        if self.flavor != other.flavor:
            raise GermError(f"flavors differ: {self.flavor} and {other.flavor}")

    def __add__(self, other: "SmoothGerm") -> "SmoothGerm":
        self._same_kind(other)
        a, b = self.common(other)
        return SmoothGerm(self.flavor, self.parent, a.window, a.data + b.data)

    def __sub__(self, other):
        self._same_kind(other)
        a, b = self.common(other)
        return SmoothGerm(self.flavor, self.parent, a.window, a.data - b.data)

    def scale(self, c) -> "SmoothGerm":
        return SmoothGerm(self.flavor, self.parent, self.window, self.data.scale(c))

    def __eq__(self, other):
        if not isinstance(other, SmoothGerm) or self.flavor != other.flavor or self.parent != other.parent:
            return False
        a, b = self.common(other)
        return a.data == b.data

    __hash__ = None

    def is_zero(self) -> bool:
        return self.data.is_zero()

    def to_json(self) -> dict:
        return {"flavor": self.flavor, "window": list(self.window), "data": self.data.to_literal()}

    def __repr__(self):
        return f"SmoothGerm({self.flavor}, window={self.window}, {self.data.to_literal()})"


def germ_from_literal(X: SectionFiltration, obj: dict) -> SmoothGerm:
    """``{"flavor": ..., "window": [i, j], "data": function literal on Q(i, j)}``."""
    i, j = obj["window"]
    grp = X.section(i, j).group
    return SmoothGerm(obj["flavor"], X, (i, j), FnOnGroup.from_literal(grp, obj.get("data", [])))


# --------------------------------------------------------------------------
# evaluation, invariants, translations, characters


def _ambient_point(X: SectionFiltration, a) -> tuple[int, ...]:
    if isinstance(a, WindowElement):
        return lift_element(X, a)
    return _residues(a)


def tau(g: SmoothGerm, a) -> CycloScalar:
    """Value of a function germ at a point of A (ambient element or window element)."""
    if not g.is_function:
        raise GermError(f"tau is defined on function flavors, not {g.flavor}")
    X = g.parent
    x = _ambient_point(X, a)
    if not X.top.contains(x):
        raise GermError(f"{list(x)} is not an element of the object")
    j = g.window[1]
    if not X.step(j).contains(x):
        return CycloScalar.zero()
    i = g.window[0]
    if isinstance(a, WindowElement) and X.clamp(a.i) > i:
        raise GermError(f"no common window for the element ({a.i}, {a.j}) and the germ ({i}, {j})")
    return g.data(X.section(i, j).project(x))


def density(g: SmoothGerm) -> FnOnGroup:
    """The germ on the total window, as a function on the underlying group."""
    return g.total().data


def one_A(X: SectionFiltration, window=None) -> SmoothGerm:
    """The translation-invariant germ of value 1."""
    if X.is_zero():
        raise GermError("the unit function needs a nonzero object")
    i, j = window if window is not None else X.total_window()
    if X.clamp(j) != X.hi:
        raise GermError("the unit function is only window-representable with j at the top")
    return SmoothGerm("E", X, (i, j), FnOnGroup.constant(X.section(i, j).group))


def translate_n(a, g: SmoothGerm) -> SmoothGerm:
    """(t_a)_* g (x) = g(x - a), for every flavor."""
    X = g.parent
    x = _ambient_point(X, a)
    i, j = g.window
    if not X.step(j).contains(x):
        J = next((t for t in range(j, X.hi + 1) if X.step(t).contains(x)), None)
        if J is None:
            raise GermError(f"{list(x)} is not an element of the object")
        g = g.extend(i, J)
        i, j = g.window
    sec = X.section(i, j)
    return SmoothGerm(g.flavor, X, (i, j), translate(sec.group.element(sec.project(x)), g.data))


def _character_phases(X: SectionFiltration, sec: Section, chi: Sequence[int]) -> FnOnGroup:
    """x -> exp(2 pi i chi(x)) on the section group; chi must vanish on sec.bottom."""
    A = X.ambient
    e = A.exponent
    lifts = sec.lift_array(sec.group.element_array)
    w = np.array([e // m for m in A.orders], dtype=np.int64)
    k = np.mod((lifts * w) @ np.array(chi, dtype=np.int64), e) if A.rank else np.zeros(len(lifts), dtype=np.int64)
    table = _power_table(e, e)
    num = np.array([table[int(t)] for t in k], dtype=object).reshape(len(k), -1)
    return FnOnGroup(sec.group, CycloVector(e, num, 1))


def _dual_point(Y: SectionFiltration, chi) -> tuple[int, ...]:
    return lift_element(Y, chi) if isinstance(chi, WindowElement) else _residues(chi)


def mul_character(g: SmoothGerm, chi) -> SmoothGerm:
    """The germ f e^{2 pi i chi}: tau(f e^{2 pi i chi})(x) = tau(f)(x) e^{2 pi i chi(x)}."""
    X = g.parent
    Y = dual_object(X)
    c = _dual_point(Y, chi)
    if not Y.top.contains(c):
        raise GermError("character does not belong to the dual object")
    i, j = g.window
    # chi must vanish on F(i); move to a finer window if needed
    I = next((t for t in range(i, X.lo - 1, -1) if _kills(X, c, X.step(t))), None)
    if I is None:
        raise GermError("character does not vanish on any F(i) below the germ's window")
    g = g.extend(I, j)
    sec = X.section(I, j)
    return SmoothGerm(g.flavor, X, (I, j), g.data * _character_phases(X, sec, c))


def _kills(X: SectionFiltration, chi: Sequence[int], S) -> bool:
    A = X.ambient
    from .finab import pairing0

    c = A.element(chi)
    return all(pairing0(A.element(s), c).value == 0 for s in S.generators)


# --------------------------------------------------------------------------
# Fourier transforms and pairings


def window_duality(X: SectionFiltration, i: int, j: int) -> GroupHom:
    """Identification of the dual window Q^(-j, -i) with the dual group of Q(i, j).

    A character class chi in F(i)^perp / F(j)^perp is sent to the character
    of Q(i, j) = F(j)/F(i) it induces; coordinates come from pairing the
    lifted generators in the ambient group.
    """
    Y = dual_object(X)
    Q = X.section(i, j)
    D = Y.section(-j, -i)
    Qhat = dual_group(Q.group)
    A = X.ambient
    e = A.exponent
    w = np.array([e // m for m in A.orders], dtype=np.int64)
    qlifts = np.array([Q.lift([int(s == t) for t in range(Q.group.rank)]) for s in range(Q.group.rank)], dtype=np.int64).reshape(Q.group.rank, A.rank)
    images = []
    for t in range(D.group.rank):
        chi = np.array(D.lift([int(s == t) for s in range(D.group.rank)]), dtype=np.int64)
        vals = np.mod((qlifts * w) @ chi, e) if A.rank else np.zeros(Q.group.rank, dtype=np.int64)
        images.append([int(v) * m // e for v, m in zip(vals, Q.group.orders)])
    if not images:
        return GroupHom.zero(D.group, Qhat)
    return GroupHom.from_images(D.group, Qhat, images)


def fourier_n(g: SmoothGerm, which: str = "F") -> SmoothGerm:
    """Transform a germ; the result lives on the dual object at window (-j, -i)."""
    if which not in TRANSFORM_FLAVOR:
        raise GermError(f"unknown transform {which!r}")
    src, dst = TRANSFORM_FLAVOR[which]
    if g.flavor != src:
        raise GermError(f"{which} applies to {src} germs, not {g.flavor}")
    X = g.parent
    i, j = g.window
    fh = fourier(g.data, which)
    iota = window_duality(X, i, j)
    return SmoothGerm(dst, dual_object(X), (-j, -i), pullback(iota, fh))


def pair_smooth(d: SmoothGerm, f: SmoothGerm) -> CycloScalar:
    """<d, f> for a distribution germ and a function germ of matching flavors."""
    if PAIRS.get(d.flavor) != f.flavor:
        raise GermError(f"cannot pair {d.flavor} with {f.flavor}")
    a, b = d.common(f)
    return pair_fn(a.data, b.data)


def _total_hom(m: SectionMorphism) -> GroupHom:
    """The map of total-window quotients induced by a quasi-strong morphism."""
    r = quasi_strong_check(m)
    if not r:
        raise GermError(f"germ maps need a quasi-strong morphism: {r.detail.get('reason')}")
    X, Y = m.source, m.target
    return X.section(*X.total_window()).induced_hom(m.ambient_hom, Y.section(*Y.total_window()))


def pullback_n(m: SectionMorphism, g: SmoothGerm) -> SmoothGerm:
    """phi^* on function germs: tau(phi^* g) = tau(g) o phi.

    Bounded objects have a total window, so the coker-then-ker factorization
    of a quasi-strong phi composes to the pullback along the map of total
    quotients; the factorization is only used to certify that phi qualifies.
    """
    if not g.is_function:
        raise GermError(f"phi^* acts on function flavors, not {g.flavor}")
    if g.parent != m.target:
        raise GermError("germ does not live on the target of the morphism")
    X = m.source
    return SmoothGerm(g.flavor, X, X.total_window(), pullback(_total_hom(m), g.total().data))


def pushforward_n(m: SectionMorphism, d: SmoothGerm) -> SmoothGerm:
    """phi_* on distribution germs, adjoint to :func:`pullback_n`."""
    if d.is_function:
        raise GermError(f"phi_* acts on distribution flavors, not {d.flavor}")
    if d.parent != m.source:
        raise GermError("germ does not live on the source of the morphism")
    Y = m.target
    return SmoothGerm(d.flavor, Y, Y.total_window(), pushforward(_total_hom(m), d.total().data))


def double_dual_pullback(g: SmoothGerm, X: SectionFiltration) -> FnOnGroup:
    """A germ on the double dual of X, read as a function on X's underlying group."""
    t = g.total()
    delta = double_dual_iso(X.ambient)
    h = X.underlying.induced_hom(delta, t.section)
    return pullback(h, t.data)


def inversion_holds_n(g: SmoothGerm, which: str = "F") -> bool:
    back = fourier_n(fourier_n(g, which), INVERSE[which])
    return double_dual_pullback(back, g.parent) == g.total().data


def plancherel_holds_n(f: SmoothGerm, d: SmoothGerm) -> bool:
    """<d, f> = <F f, F' d> for f in E, d in E'; also the tilde version."""
    if f.flavor == "E":
        return pair_smooth(d, f) == pair_smooth(fourier_n(f, "F"), fourier_n(d, "F_prime"))
    return pair_smooth(d, f) == pair_smooth(fourier_n(f, "F_tilde"), fourier_n(d, "F_tilde_prime"))


def theorem_functions_check(f: SmoothGerm, chi) -> bool:
    """tau(F' f)(chi) = <1_A, f e^{2 pi i chi}> for a distribution germ f."""
    if f.flavor != "E_prime":
        raise GermError("the identity is stated for E' germs")
    X = f.parent
    Y = dual_object(X)
    lhs = tau(fourier_n(f, "F_prime"), chi if isinstance(chi, WindowElement) else Y.ambient.element(_residues(chi)))
    rhs = pair_smooth(mul_character(f, chi), one_A(X))
    return lhs == rhs


# --------------------------------------------------------------------------
# structural checks


def exact_rank(rows: Sequence[Sequence[int]]) -> int:
    """Rank over Q by fraction-free elimination."""
    M = [list(r) for r in rows]
    if not M:
        return 0
    rank = 0
    ncols = len(M[0])
    for c in range(ncols):
        p = next((r for r in range(rank, len(M)) if M[r][c]), None)
        if p is None:
            continue
        M[rank], M[p] = M[p], M[rank]
        for r in range(len(M)):
            if r != rank and M[r][c]:
                f, g = M[r][c], M[rank][c]
                M[r] = [g * x - f * y for x, y in zip(M[r], M[rank])]
        rank += 1
    return rank


def pullback_is_injective(h: GroupHom) -> bool:
    """Rank of the matrix of h^*: C(target) -> C(source) equals |target|."""
    idx = h.image_indices()
    cols = h.target.order
    rows = [[int(idx[x] == y) for y in range(cols)] for x in range(h.source.order)]
    return exact_rank(rows) == cols


def tau_injective_on_windows(X: SectionFiltration) -> bool:
    """pi^* injective for every window pair (i' <= i <= j)."""
    idx = range(X.lo, X.hi + 1)
    for j in idx:
        for i in range(X.lo, j + 1):
            for i2 in range(X.lo, i + 1):
                if not pullback_is_injective(_pi(X, i2, i, j)):
                    return False
    return True


def invariant_dimension(X: SectionFiltration, window=None) -> int:
    """dim of functions on Q(i, j) invariant under translation by F(j).

    Equal to the number of orbits, found by union-find over generator moves.
    """
    i, j = window if window is not None else X.total_window()
    sec = X.section(i, j)
    G = sec.group
    n = G.order
    parent = list(range(n))

    def find(u):
        while parent[u] != u:
            parent[u] = parent[parent[u]]
            u = parent[u]
        return u

    arr = G.element_array
    for gen in X.step(j).generators:
        shift = np.array(sec.project(gen), dtype=np.int64)
        moved = G.indices(arr + shift) if G.rank else np.zeros(n, dtype=np.int64)
        for u, v in enumerate(moved):
            ru, rv = find(u), find(int(v))
            if ru != rv:
                parent[ru] = rv
    return len({find(u) for u in range(n)})


def tau_translation_equivariant(g: SmoothGerm, a) -> bool:
    """tau(t_a g)(x) = tau(g)(x - a) at every point x of the object."""
    X = g.parent
    moved = translate_n(a, g)
    x0 = _ambient_point(X, a)
    sec = X.underlying
    for row in sec.lift_array(sec.group.element_array):
        x = tuple(int(v) for v in row)
        y = tuple((u - v) % m for u, v, m in zip(x, x0, X.ambient.orders))
        if tau(moved, x) != tau(g, y):
            return False
    return True
