"""Checks for the categorical statements about filtered objects.

Each check returns a :class:`CheckResult` carrying a verdict and enough detail
to reproduce a failure (the offending window triple, the factorization found,
and so on).
"""

from __future__ import annotations

import enum
import itertools
from dataclasses import dataclass, field
from typing import Callable

from .finab import FinAbGroup, GroupHom, Subgroup, hom_compose
from .filtered import (
    CoarseSection,
    FilterError,
    InvalidMorphism,
    ProductSection,
    SectionFiltration,
    SectionMorphism,
    SubSection,
    Tri,
    WindowProvider,
    cokernel_object,
    is_morphism,
    kernel_object,
)


@dataclass
class CheckResult:
    ok: bool
    detail: dict = field(default_factory=dict)

    def __bool__(self):
        return self.ok


# --------------------------------------------------------------------------
# strong objects


def _as_hom(m) -> GroupHom:
    return m if isinstance(m, GroupHom) else m.hom


def _triple_problem(a: GroupHom, p: GroupHom, qij: int, qik: int, qjk: int) -> str | None:
    if a.source.order != qij or p.target.order != qjk or a.target.order != qik or p.source.order != qik:
        return "transition maps do not match the window quotients"
    if not a.is_injective():
        return "alpha is not injective"
    if not p.is_surjective():
        return "pi is not surjective"
    if not hom_compose(p, a).is_zero():
        return "pi o alpha is not zero"
    if qik != qij * qjk:
        return "orders do not multiply"
    return None


def _order(q) -> int:
    return q.order if isinstance(q, FinAbGroup) else q.order


def strong_object_check(X, window=None) -> CheckResult:
    """Exactness of every Q(i,j) -> Q(i,k) -> Q(j,k) in the window, recursively.

    At level >= 2 alpha must also carry the filtration of Q(i, j) to the one
    induced from Q(i, k), and pi the filtration of Q(i, k) onto Q(j, k).
    """
    idx = list(window if window is not None else X.window())
    for i, j, k in itertools.combinations_with_replacement(idx, 3):
        a, p = X.alpha(i, j, k), X.pi(i, j, k)
        qij, qik, qjk = X.quotient(i, j), X.quotient(i, k), X.quotient(j, k)
        problem = _triple_problem(_as_hom(a), _as_hom(p), _order(qij), _order(qik), _order(qjk))
        if problem is None and X.level >= 2:
            inner_idx = range(min(qij.lo, qik.lo, qjk.lo) - 1, max(qij.hi, qik.hi, qjk.hi) + 2)
            for l in inner_idx:
                if Subgroup.preimage(qik.step_subgroup(l), a.hom) != qij.step_subgroup(l):
                    problem = f"alpha is not strict at inner index {l}"
                    break
                if qik.step_subgroup(l).image(p.hom) != qjk.step_subgroup(l):
                    problem = f"pi is not strict at inner index {l}"
                    break
        if problem is not None:
            return CheckResult(False, {"triple": [i, j, k], "reason": problem})
    if X.level >= 2:
        for i, j in itertools.combinations_with_replacement(idx, 2):
            sub = strong_object_check(X.quotient(i, j))
            if not sub:
                sub.detail.setdefault("path", []).insert(0, [i, j])
                return sub
    return CheckResult(True, {"triples": len(idx) * (len(idx) + 1) * (len(idx) + 2) // 6})


def corrupted_provider(X: SectionFiltration) -> WindowProvider:
    """A level-1 provider whose alpha maps are perturbed so that pi o alpha != 0.

    Used as a negative control: the perturbation sends each generator of
    Q(i, j) to alpha(g) + x where x is an element of Q(i, k) of compatible
    order with pi(x) != 0, whenever such an x exists.
    """
    if X.level != 1:
        raise FilterError("the corrupted provider is built from a level-1 object")
    base = WindowProvider.of(X)

    def bad_alpha(i, j, k):
        a = base.alpha(i, j, k)
        p = base.pi(i, j, k)
        Q = a.target
        images = []
        changed = False
        for gidx, m in enumerate(a.source.orders):
            img = list(a(a.source.element([int(t == gidx) for t in range(a.source.rank)])).residues)
            for x in Q.elements():
                if (x * m).is_zero() and not p(x).is_zero():
                    img = [(u + v) % n for u, v, n in zip(img, x.residues, Q.orders)]
                    changed = True
                    break
            images.append(img)
        if not changed:
            return a
        return GroupHom.from_images(a.source, Q, images)

    return WindowProvider(X.lo, X.hi, base.quotient, bad_alpha, base.pi)


# --------------------------------------------------------------------------
# quasi-strong morphisms


def _bijective(h: GroupHom) -> bool:
    return h.source.order == h.target.order and h.is_injective()


def _shift_inverse(m: SectionMorphism, radius: int) -> int | None:
    """Smallest s >= 0 with G(i) <= m(F(i + s)) + bottom for all i, recursively."""
    X, Y = m.source, m.target
    idx = range(min(X.lo, Y.lo) - 1, max(X.hi, Y.hi) + 2)
    for s in range(radius + 1):
        if all(Y.step(i) <= X.step(i + s).image(m.ambient_hom) + Y.bottom for i in idx):
            return s
    return None


def quasi_strong_check(m: SectionMorphism, radius: int | None = None) -> CheckResult:
    """Is coim(m) -> im(m) an isomorphism of filtered objects?

    coim = coker(ker m) and im = ker(coker m) carry the induced filtrations;
    the canonical map is induced by m.  It must be bijective on underlying
    groups, a morphism, and have an inverse that is a morphism after a
    reindexing of at most ``radius``.  The witness records the factorization
    and whether no reindexing was needed (``strict``).
    """
    X, Y = m.source, m.target
    if not is_morphism(m, radius):
        raise InvalidMorphism("not a morphism of filtered objects")
    r = radius if radius is not None else (X.hi - X.lo) + (Y.hi - Y.lo) + 2
    K, inc = kernel_object(m)
    coim, q = cokernel_object(inc)
    C, p = cokernel_object(m)
    im, j = kernel_object(p)
    canon = SectionMorphism(m.ambient_hom, coim, im)
    detail = {
        "kernel_order": K.order,
        "coimage_order": coim.order,
        "image_order": im.order,
        "cokernel_order": C.order,
    }
    if not _bijective(canon.hom):
        return CheckResult(False, dict(detail, reason="coim -> im is not bijective"))
    if not is_morphism(canon, radius):
        return CheckResult(False, dict(detail, reason="coim -> im is not a morphism"))
    s = _shift_inverse(canon, r)
    if s is None:
        return CheckResult(False, dict(detail, reason="inverse is not a morphism within the search radius"))
    detail["strict"] = s == 0 and _strict_everywhere(canon)
    detail["shift"] = s
    detail["factorization"] = "cokernel X -> coim, iso coim -> im, kernel im -> Y"
    return CheckResult(True, detail)


def _strict_everywhere(m: SectionMorphism) -> bool:
    X, Y = m.source, m.target
    idx = range(min(X.lo, Y.lo) - 1, max(X.hi, Y.hi) + 2)
    if not all(Y.step(i) <= X.step(i).image(m.ambient_hom) + Y.bottom for i in idx):
        return False
    if m.level == 1:
        return True
    for i, j in itertools.combinations_with_replacement(idx, 2):
        try:
            c = m.component(i, j)
        except InvalidMorphism:
            return False
        if not _strict_everywhere(c):
            return False
    return True


def compose(psi: SectionMorphism, phi: SectionMorphism) -> SectionMorphism:
    return psi.compose(phi)


# --------------------------------------------------------------------------
# pullback of a cokernel


def is_cokernel(m: SectionMorphism) -> CheckResult:
    """Surjective with the target filtration induced: G(i) = m(F(i)) + bottom, recursively."""
    X, Z = m.source, m.target
    if not m.hom.is_surjective():
        return CheckResult(False, {"reason": "not surjective"})
    idx = range(min(X.lo, Z.lo) - 1, max(X.hi, Z.hi) + 2)
    for i in idx:
        if X.step(i).image(m.ambient_hom) + Z.bottom != Z.step(i):
            return CheckResult(False, {"reason": f"target filtration not induced at index {i}"})
    if m.level >= 2:
        for i, j in itertools.combinations_with_replacement(idx, 2):
            sub = is_cokernel(m.component(i, j))
            if not sub:
                return CheckResult(False, {"reason": f"window ({i}, {j}): {sub.detail['reason']}"})
    return CheckResult(True)


def pullback_cokernel_check(phi: SectionMorphism, psi: SectionMorphism) -> CheckResult:
    """Pull back the cokernel phi: X -> Z along psi: Y -> Z.

    P = {(x, y) : phi(x) = psi(y)} in X x Y.  The projection P -> Y must be
    onto, and for every i the image of (X x G(i)) ∩ P must be G(i), i.e. the
    filtration of Y is induced from P.  The universal count
    |P| = |ker phi| |Y| is checked as well.
    """
    if phi.target != psi.target:
        raise FilterError("phi and psi must have the same target")
    pre = is_cokernel(phi)
    if not pre:
        raise FilterError(f"phi is not a cokernel: {pre.detail['reason']}")
    X, Y, Z = phi.source, psi.source, phi.target
    prod = ProductSection(CoarseSection(X), Y)
    p1, p2 = prod.projections()
    h = hom_compose(phi.ambient_hom, p1) - hom_compose(psi.ambient_hom, p2)
    Psub = Z.bottom.preimage(h).intersect(prod.top)
    P = SubSection(prod, Psub)
    proj = SectionMorphism(p2, P, Y)
    K, _ = kernel_object(phi)
    detail = {"pullback_order": P.order, "kernel_order": K.order, "target_order": Y.order}
    if P.order != K.order * Y.order:
        return CheckResult(False, dict(detail, reason="|P| != |ker phi| |Y|"))
    if not proj.hom.is_surjective():
        return CheckResult(False, dict(detail, reason="P -> Y is not surjective"))
    Xtop_factor = prod.pair(X.top, Subgroup.trivial(Y.ambient))
    for i in range(Y.lo - 1, Y.hi + 2):
        H = (Xtop_factor + prod.pair(Subgroup.trivial(X.ambient), Y.step(i))).intersect(Psub)
        if H.image(p2) + Y.bottom != Y.step(i):
            return CheckResult(False, dict(detail, reason=f"filtration on Y not induced at index {i}"))
    if Y.level >= 2 and SectionMorphism(psi.ambient_hom, Y, Z).is_aligned():
        idx = range(min(X.lo, Y.lo, Z.lo), max(X.hi, Y.hi, Z.hi) + 1)
        for i, j in itertools.combinations_with_replacement(idx, 2):
            sub = pullback_cokernel_check(phi.component(i, j), psi.component(i, j))
            if not sub:
                return CheckResult(False, dict(detail, reason=f"window ({i}, {j}): {sub.detail.get('reason')}"))
    detail["isomorphic_to"] = "ker(phi) x Y" if psi.ambient_hom.is_zero() else None
    return CheckResult(True, detail)


# --------------------------------------------------------------------------
# filtration equivalence


class Equivalence(enum.Enum):
    EQUIVALENT = "equivalent"
    NOT_EQUIVALENT_IN_WINDOW = "not-equivalent-in-window"
    UNKNOWN = "unknown"


@dataclass
class Chain:
    """A Z-indexed chain of subgroups of one finite group; lo/hi may be unknown."""

    ambient: FinAbGroup
    step: Callable[[int], Subgroup]
    lo: int | None = None
    hi: int | None = None

    @classmethod
    def of(cls, X: SectionFiltration) -> "Chain":
        if X.bottom.order != 1 or X.top.order != X.ambient.order:
            raise FilterError("a chain on the ambient group needs bottom 0 and top A")
        return cls(X.ambient, X.step, X.lo, X.hi)


def _sandwich(F: Chain, G: Chain, i: int, candidates) -> bool:
    Fi = F.step(i)
    below = any(G.step(j) <= Fi for j in candidates)
    above = any(Fi <= G.step(j) for j in candidates)
    return below and above


def filtration_equivalence_check(F, G, window: tuple[int, int] | None = None, radius: int = 8) -> Equivalence:
    """Each F(i) must be sandwiched between two G(j) and vice versa.

    Bounded chains (both reach 0 and A) are decided exactly.  Otherwise the
    search is limited to ``window`` widened by ``radius``; a missing sandwich
    in the window is reported, but finding all of them cannot prove
    equivalence for the infinitely many remaining indices.
    """
    F = Chain.of(F) if isinstance(F, SectionFiltration) else F
    G = Chain.of(G) if isinstance(G, SectionFiltration) else G
    if F.ambient != G.ambient:
        raise FilterError("filtrations live on different groups")
    bounded = None not in (F.lo, F.hi, G.lo, G.hi)
    if bounded:
        lo, hi = min(F.lo, G.lo) - 1, max(F.hi, G.hi) + 1
        idx = range(lo, hi + 1)
        ok = all(_sandwich(F, G, i, idx) for i in idx) and all(_sandwich(G, F, i, idx) for i in idx)
        return Equivalence.EQUIVALENT if ok else Equivalence.NOT_EQUIVALENT_IN_WINDOW
    if window is None:
        raise FilterError("unbounded chains need a window")
    a, b = window
    cand = range(a - radius, b + radius + 1)
    for i in range(a, b + 1):
        if not _sandwich(F, G, i, cand) or not _sandwich(G, F, i, cand):
            return Equivalence.NOT_EQUIVALENT_IN_WINDOW
    return Equivalence.UNKNOWN
