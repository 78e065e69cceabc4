"""The space C(A) of complex functions on a finite abelian group.

Functions are stored densely in the group's enumeration order.  Pullback is
precomposition, pushforward sums over fibers (an empty fiber gives 0) and the
shriek pushforward rescales by |coker|/|ker|.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np

from .cyclovec import CycloVector
from .finab import FinAbGroup, GroupElement, GroupError, GroupHom, _residues, cokernel, kernel_subgroup
from .scalars import CycloScalar, parse_scalar


class FnOnGroup:
    __slots__ = ("parent", "vec")

    def __init__(self, parent: FinAbGroup, vec: CycloVector):
        if len(vec) != parent.order:
            raise GroupError(f"function has {len(vec)} values but the group has {parent.order} elements")
        self.parent = parent
        self.vec = vec

    # construction ---------------------------------------------------------
    @classmethod
    def from_values(cls, parent: FinAbGroup, values: Sequence) -> "FnOnGroup":
        return cls(parent, CycloVector.from_scalars(list(values), parent.exponent))

    @classmethod
    def zero(cls, parent: FinAbGroup) -> "FnOnGroup":
        return cls(parent, CycloVector.zeros(parent.order, 1))

    @classmethod
    def constant(cls, parent: FinAbGroup, value=1) -> "FnOnGroup":
        return cls(parent, CycloVector.constant(parent.order, value))

    @classmethod
    def delta(cls, parent: FinAbGroup, a, value=1) -> "FnOnGroup":
        idx = parent.index(_residues(a))
        vals: list = [0] * parent.order
        vals[idx] = value
        return cls.from_values(parent, vals)

    @classmethod
    def indicator(cls, parent: FinAbGroup, mask: np.ndarray, value=1) -> "FnOnGroup":
        num = np.asarray(mask, dtype=bool).astype(np.int64).astype(object).reshape(parent.order, 1)
        f = cls(parent, CycloVector(1, num, 1))
        return f if value == 1 else f.scale(value)

    @classmethod
    def from_literal(cls, parent: FinAbGroup, entries: Iterable) -> "FnOnGroup":
        """Entries ``[element_vector, scalar]``; unlisted elements are 0."""
        vals: list = [0] * parent.order
        for elem, scalar in entries:
            res = _residues(elem)
            if len(res) != parent.rank:
                raise GroupError(f"element {list(res)} does not belong to {parent}")
            vals[parent.index(res)] = parse_scalar(scalar) if isinstance(scalar, str) else scalar
        return cls.from_values(parent, vals)

    @classmethod
    def random(cls, parent: FinAbGroup, rng, conductor: int | None = None, density: float = 1.0) -> "FnOnGroup":
        """Random function with small rational coefficients on roots of unity."""
        L = conductor or parent.exponent
        num = rng.integers(-3, 4, size=(parent.order, 1)).astype(object)
        vec = CycloVector.zeros(parent.order, L)
        vec.num[:, :1] = num
        if vec.num.shape[1] > 1:
            vec.num[:, 1:] = rng.integers(-2, 3, size=(parent.order, vec.num.shape[1] - 1)).astype(object)
        if density < 1.0:
            keep = rng.random(parent.order) < density
            vec.num[~keep] = 0
        vec.den = int(rng.integers(1, 4))
        return cls(parent, vec.normalized())

    # access ---------------------------------------------------------------
    def __call__(self, a) -> CycloScalar:
        return self.vec[self.parent.index(_residues(a))]

    @property
    def values(self) -> list[CycloScalar]:
        return self.vec.scalars()

    def support(self) -> list[GroupElement]:
        nz = [i for i in range(self.parent.order) if any(self.vec.num[i])]
        arr = self.parent.element_array
        return [GroupElement(self.parent, tuple(int(v) for v in arr[i])) for i in nz]

    def to_literal(self) -> list:
        arr = self.parent.element_array
        out = []
        for i in range(self.parent.order):
            if any(self.vec.num[i]):
                out.append([[int(v) for v in arr[i]], self.vec[i].to_text()])
        return out

    # linear structure -----------------------------------------------------
    def _check(self, other: "FnOnGroup"):
        if not isinstance(other, FnOnGroup) or other.parent != self.parent:
            raise GroupError("functions live on different groups")

    def __add__(self, other):
        self._check(other)
        return FnOnGroup(self.parent, self.vec + other.vec)

    def __sub__(self, other):
        self._check(other)
        return FnOnGroup(self.parent, self.vec - other.vec)

    def __neg__(self):
        return FnOnGroup(self.parent, -self.vec)

    def scale(self, c) -> "FnOnGroup":
        return FnOnGroup(self.parent, self.vec.scale(c))

    def __mul__(self, other):
        if isinstance(other, FnOnGroup):
            self._check(other)
            return FnOnGroup(self.parent, self.vec.mul(other.vec))
        return self.scale(other)

    __rmul__ = scale

    def __eq__(self, other):
        if not isinstance(other, FnOnGroup):
            return NotImplemented
        return self.parent == other.parent and self.vec == other.vec

    __hash__ = None

    def is_zero(self) -> bool:
        return self.vec.is_zero()

    def total(self) -> CycloScalar:
        return self.vec.total()

    def __repr__(self):
        return f"FnOnGroup({list(self.parent.orders)}, {self.to_literal()})"


def _check_parent(f: FnOnGroup, G: FinAbGroup, what: str):
    if f.parent != G:
        raise GroupError(f"function lives on {f.parent}, expected the {what} {G}")


def pullback(phi: GroupHom, f: FnOnGroup) -> FnOnGroup:
    """``(phi^* f)(a) = f(phi(a))``."""
    _check_parent(f, phi.target, "target")
    return FnOnGroup(phi.source, f.vec.take(phi.image_indices()))


def pushforward(phi: GroupHom, f: FnOnGroup) -> FnOnGroup:
    """``(phi_* f)(x) = sum of f over the fiber of x``."""
    _check_parent(f, phi.source, "source")
    return FnOnGroup(phi.target, f.vec.scatter(phi.image_indices(), phi.target.order).normalized())


def shriek_factor(phi: GroupHom) -> Fraction:
    C, _ = cokernel(phi)
    return Fraction(C.order, kernel_subgroup(phi).order)


def shriek(phi: GroupHom, f: FnOnGroup) -> FnOnGroup:
    """``phi_! f = (|coker phi| / |ker phi|) phi_* f``."""
    return pushforward(phi, f).scale(shriek_factor(phi))


def pair_fn(f: FnOnGroup, g: FnOnGroup) -> CycloScalar:
    """``<f, g> = sum_a f(a) g(a)``, bilinear and without conjugation."""
    f._check(g)
    return f.vec.dot(g.vec)


def translation_indices(A: FinAbGroup, a) -> np.ndarray:
    """Index of x - a for every x."""
    res = np.array(_residues(a), dtype=np.int64)
    if len(res) != A.rank:
        raise GroupError("translation by an element of another group")
    return A.indices(A.element_array - res)


def translate(a, f: FnOnGroup) -> FnOnGroup:
    """``((t_a)_* f)(x) = f(x - a)``."""
    if isinstance(a, GroupElement) and a.parent != f.parent:
        raise GroupError("translation by an element of another group")
    return FnOnGroup(f.parent, f.vec.take(translation_indices(f.parent, a)))


def delta_basis(A: FinAbGroup) -> list[FnOnGroup]:
    return [FnOnGroup.delta(A, e) for e in A.elements()]
