"""Coset-indicator spans, their canonically normalized transform, and Poisson summation.

A Schwartz function is a formal sum of terms c * 1_{a + F(z)} with F the total
filtration.  Given a structure sequence 0 -> D -> A -> K -> 0 the transform is

    1_{a+F(z)}  ->  chi |-> e^{2 pi i chi(a)} |D ∩ F(z)| / |K^ ∩ F^(z)| 1_{F^(z)}(chi)

with K^ = D^perp.  Poisson summation compares the sum of f over D with the
sum of the transform over K^.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Sequence

import numpy as np

from .cyclovec import CycloVector
from .finab import FinAbGroup, Section, Subgroup, _residues, dual_group
from .filtered import (
    FilterError,
    SectionFiltration,
    StructureSequence,
    Tri,
    dual_filtration,
    total_filtration,
)
from .funcspace import FnOnGroup
from .scalars import CycloScalar, _power_table, from_numerators, parse_scalar


class AdmissibilityError(FilterError):
    pass


def _reduce(A: FinAbGroup, x) -> tuple:
    res = _residues(x)
    if len(res) != A.rank:
        raise FilterError(f"{list(res)} should have {A.rank} coordinates")
    return tuple(int(v) % m for v, m in zip(res, A.orders))


@dataclass(frozen=True)
class SchwartzTerm:
    coeff: CycloScalar
    a: tuple
    z: tuple

    def to_json(self) -> dict:
        return {"coeff": self.coeff.to_text(), "a": list(self.a), "z": list(self.z)}


def _as_scalar(c) -> CycloScalar:
    if isinstance(c, str):
        return parse_scalar(c)
    if isinstance(c, CycloScalar):
        return c
    return CycloScalar.rational(c)


class SchwartzFunction:
    """Formal sum of coset indicators on a bounded filtered object."""

    def __init__(self, X: SectionFiltration, terms: Iterable = ()):
        self.X = X
        out = []
        for t in terms:
            if not isinstance(t, SchwartzTerm):
                c, a, z = t
                t = SchwartzTerm(_as_scalar(c), tuple(a), tuple(z))
            a = _reduce(X.ambient, t.a)
            z = tuple(int(v) for v in t.z)
            if len(z) != X.level:
                raise FilterError(f"level index {list(z)} should have {X.level} coordinates")
            if not X.top.contains(a):
                raise FilterError(f"base point {list(a)} is not an element of the object")
            out.append(SchwartzTerm(_as_scalar(t.coeff), a, z))
        self.terms = tuple(out)

    @classmethod
    def from_literal(cls, X: SectionFiltration, items: Sequence[dict]) -> "SchwartzFunction":
        return cls(X, [(it.get("coeff", "1"), it["a"], it["z"]) for it in items])

    def to_literal(self) -> list:
        return [t.to_json() for t in self.terms]

    def __add__(self, other: "SchwartzFunction") -> "SchwartzFunction":
        return SchwartzFunction(self.X, self.terms + other.terms)

    def values(self) -> FnOnGroup:
        """Pointwise values on the ambient group."""
        A = self.X.ambient
        arr = A.element_array
        total = FnOnGroup.zero(A)
        for t in self.terms:
            F = total_filtration(self.X, t.z)
            mask = F.contains_many(np.mod(arr - np.array(t.a, dtype=np.int64), A.orders) if A.rank else arr)
            total = total + FnOnGroup.indicator(A, mask).scale(t.coeff)
        return total

    def __call__(self, x) -> CycloScalar:
        x = _reduce(self.X.ambient, x)
        acc = CycloScalar.zero()
        for t in self.terms:
            diff = tuple((u - v) % m for u, v, m in zip(x, t.a, self.X.ambient.orders))
            if total_filtration(self.X, t.z).contains(diff):
                acc = acc + t.coeff
        return acc

    def __repr__(self):
        return f"SchwartzFunction({self.to_literal()})"


@dataclass(frozen=True)
class DualTerm:
    """c * e^{2 pi i chi(a)} * 1_{F^(z)}(chi)."""

    coeff: CycloScalar
    a: tuple
    z: tuple
    factor: Fraction

    def to_json(self) -> dict:
        return {"coeff": self.coeff.to_text(), "a": list(self.a), "z": list(self.z), "factor": str(self.factor)}


class DualSchwartzFunction:
    def __init__(self, X: SectionFiltration, terms: Iterable[DualTerm]):
        self.X = X
        self.terms = tuple(terms)

    @cached_property
    def ambient(self) -> FinAbGroup:
        return dual_group(self.X.ambient)

    def _phases(self, chis: np.ndarray, a: Sequence[int]) -> CycloVector:
        A = self.X.ambient
        e = A.exponent
        w = np.array([e // m for m in A.orders], dtype=np.int64)
        k = np.mod(chis @ (w * np.array(a, dtype=np.int64)), e) if A.rank else np.zeros(len(chis), dtype=np.int64)
        table = _power_table(e, e)
        num = np.array([table[int(t)] for t in k], dtype=object).reshape(len(k), -1)
        return CycloVector(e, num, 1)

    def values(self) -> FnOnGroup:
        Ah = self.ambient
        chis = Ah.element_array
        total = FnOnGroup.zero(Ah)
        for t in self.terms:
            mask = dual_filtration(self.X, t.z).contains_many(chis)
            ind = FnOnGroup.indicator(Ah, mask)
            total = total + (FnOnGroup(Ah, self._phases(chis, t.a)) * ind).scale(t.coeff)
        return total

    def __call__(self, chi) -> CycloScalar:
        chi = _reduce(self.ambient, chi)
        return self.values()(chi)

    def to_literal(self) -> list:
        return [t.to_json() for t in self.terms]


# --------------------------------------------------------------------------
# admissibility


@dataclass(frozen=True)
class LazyStructure:
    """Declared finiteness bounds for a structure sequence on an unbounded object.

    ``discrete_below``: D ∩ F(z) is finite whenever z1 <= this bound.
    ``cocompact_above``: K^ ∩ F^(z) is finite whenever z1 >= this bound.
    A missing bound leaves the corresponding condition undecided.
    """

    level: int
    discrete_below: int | None = None
    cocompact_above: int | None = None


def admissibility_check(term, seq) -> Tri:
    """Both finiteness conditions for the level z of a term."""
    z = tuple(term.z if isinstance(term, SchwartzTerm) else term)
    if isinstance(seq, StructureSequence):
        if len(z) != seq.X.level:
            return Tri.FALSE
        # every subgroup of a finite ambient group is finite
        return Tri.TRUE
    if isinstance(seq, LazyStructure):
        if len(z) != seq.level:
            return Tri.FALSE
        d = seq.discrete_below is not None and z[0] <= seq.discrete_below
        k = seq.cocompact_above is not None and z[0] >= seq.cocompact_above
        return Tri.TRUE if d and k else Tri.UNKNOWN
    raise TypeError(f"not a structure sequence: {seq!r}")


# --------------------------------------------------------------------------
# the transform


def normalization(seq: StructureSequence, z: Sequence[int]) -> tuple[int, int]:
    """(|D ∩ F(z)|, |K^ ∩ F^(z)|)."""
    z = tuple(int(v) for v in z)
    cache = seq.__dict__.setdefault("_normalization", {})
    if z not in cache:
        F = total_filtration(seq.X, z)
        Fh = dual_filtration(seq.X, z)
        cache[z] = (seq.D.intersect(F).order, seq.Khat.intersect(Fh).order)
    return cache[z]


def _check_seq(s: SchwartzFunction, seq: StructureSequence):
    if s.X.ambient != seq.X.ambient or s.X.level != seq.X.level:
        raise FilterError("Schwartz function and structure sequence live on different objects")
    for t in s.terms:
        if admissibility_check(t, seq) is not Tri.TRUE:
            raise AdmissibilityError(f"level {list(t.z)} is not admissible")


def indicator_fourier(s: SchwartzFunction, seq: StructureSequence) -> DualSchwartzFunction:
    _check_seq(s, seq)
    out = []
    for t in s.terms:
        nd, nk = normalization(seq, t.z)
        f = Fraction(nd, nk)
        out.append(DualTerm(t.coeff * f, t.a, t.z, f))
    return DualSchwartzFunction(s.X, out)


def refinement_expand(s: SchwartzFunction, z2: Sequence[int], index: int | None = None) -> SchwartzFunction:
    """Replace term(s) at a coarser level z by the coset sum over F(z)/F(z2)."""
    X = s.X
    z2 = tuple(int(v) for v in z2)
    F2 = total_filtration(X, z2)
    out = []
    for n, t in enumerate(s.terms):
        if index is not None and n != index:
            out.append(t)
            continue
        F = total_filtration(X, t.z)
        if not F2 <= F:
            raise FilterError(f"F({list(z2)}) is not contained in F({list(t.z)})")
        if z2 > t.z:
            raise FilterError(f"{list(z2)} is not below {list(t.z)}")
        sec = Section(F, F2)
        reps = sec.lift_array(sec.group.element_array)
        for r in reps:
            a = tuple(int((u + v) % m) for u, v, m in zip(r, t.a, X.ambient.orders))
            out.append(SchwartzTerm(t.coeff, a, z2))
    return SchwartzFunction(X, out)


def cardinality_identity(seq: StructureSequence, z: Sequence[int], z2: Sequence[int]) -> tuple[Fraction, Fraction]:
    """|F(z)/F(z2)| and |D∩F(z)| |K^∩F^(z2)| / (|K^∩F^(z)| |D∩F(z2)|)."""
    idx = Fraction(total_filtration(seq.X, z).order, total_filtration(seq.X, z2).order)
    d1, k1 = normalization(seq, z)
    d2, k2 = normalization(seq, z2)
    return idx, Fraction(d1 * k2, k1 * d2)


# --------------------------------------------------------------------------
# Poisson summation


@dataclass
class PoissonResult:
    lhs: CycloScalar
    rhs: CycloScalar
    factors: list = field(default_factory=list)

    @property
    def equal(self) -> bool:
        return self.lhs == self.rhs

    def __iter__(self):
        return iter((self.lhs, self.rhs, self.equal))

    def to_json(self) -> dict:
        return {
            "lhs": self.lhs.to_text(),
            "rhs": self.rhs.to_text(),
            "equal": self.equal,
            "factors": [{"z": list(z), "D_cap_F": d, "Khat_cap_Fhat": k} for z, d, k in self.factors],
        }


def poisson_eval(s: SchwartzFunction, seq: StructureSequence) -> PoissonResult:
    """Both sides term by term inside the finite windows D ∩ (a + F(z)) and K^ ∩ F^(z)."""
    _check_seq(s, seq)
    X = s.X
    ft = indicator_fourier(s, seq)
    lhs = CycloScalar.zero()
    rhs = CycloScalar.zero()
    factors = []
    for t, dt in zip(s.terms, ft.terms):
        F = total_filtration(X, t.z)
        DF = seq.D.intersect(F)
        # D ∩ (a + F(z)) is a coset of D ∩ F(z) or empty
        if (seq.D + F).contains(t.a):
            lhs = lhs + t.coeff * DF.order
        W = seq.Khat.intersect(dual_filtration(X, t.z))
        chis = W.elements_array()
        rhs = rhs + ft._phases(chis, t.a).total() * dt.coeff
        factors.append((t.z, DF.order, W.order))
    return PoissonResult(lhs, rhs, factors)


def poisson_bruteforce(s: SchwartzFunction, seq: StructureSequence) -> tuple[CycloScalar, CycloScalar]:
    """Sum f over all of D and the transform over all of D^perp, pointwise."""
    f = s.values()
    fh = indicator_fourier(s, seq).values()
    A = s.X.ambient
    lhs = CycloScalar.zero()
    for d in seq.D.elements_array():
        lhs = lhs + f(tuple(int(v) for v in d))
    rhs = CycloScalar.zero()
    for chi in seq.Khat.elements_array():
        rhs = rhs + fh(tuple(int(v) for v in chi))
    return lhs, rhs


def random_schwartz(X: SectionFiltration, rng, n_terms: int = 3, levels: Sequence[tuple] | None = None, conductor: int = 4) -> SchwartzFunction:
    from .filtered import lex_window

    levels = list(levels) if levels is not None else lex_window(X)
    A = X.ambient
    top = X.top.elements_array()
    terms = []
    for _ in range(n_terms):
        z = levels[int(rng.integers(len(levels)))]
        a = tuple(int(v) for v in top[int(rng.integers(len(top)))])
        k = int(rng.integers(conductor))
        c = from_numerators(conductor, _power_table(conductor, conductor)[k], 1) * int(rng.integers(1, 4))
        terms.append(SchwartzTerm(c, a, z))
    return SchwartzFunction(X, terms)
