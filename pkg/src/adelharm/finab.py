"""Finite abelian groups, homomorphisms, Pontryagin duals and subgroups.

A group is a tuple of cyclic orders ``(m_1, ..., m_k)``; elements are residue
vectors enumerated in mixed radix with the last coordinate running fastest.
Kernels, cokernels, quotients and subgroup operations all go through the
Smith normal form of a relation matrix.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property, lru_cache, reduce as _fold
from math import gcd, prod
from typing import Iterable, Iterator, Sequence

import numpy as np

from . import intmat
from .scalars import QmodZ, lcm


class GroupError(ValueError):
    """Invalid group, element or homomorphism data."""


class CompositionError(GroupError):
    pass


@dataclass(frozen=True)
class FinAbGroup:
    orders: tuple[int, ...]

    def __init__(self, orders: Iterable[int] = ()):
        orders = tuple(int(m) for m in orders)
        for m in orders:
            if m < 1:
                raise GroupError(f"cyclic order must be positive, got {m}")
        object.__setattr__(self, "orders", tuple(m for m in orders if m != 1))

    @property
    def rank(self) -> int:
        return len(self.orders)

    @property
    def order(self) -> int:
        return prod(self.orders)

    @property
    def exponent(self) -> int:
        return _fold(lcm, self.orders, 1)

    def __len__(self) -> int:
        return self.order

    def is_trivial(self) -> bool:
        return not self.orders

    @cached_property
    def _radix(self) -> np.ndarray:
        weights = []
        w = 1
        for m in reversed(self.orders):
            weights.append(w)
            w *= m
        return np.array(list(reversed(weights)), dtype=np.int64)

    @cached_property
    def element_array(self) -> np.ndarray:
        """All elements as an (order x rank) int64 array in enumeration order."""
        if not self.orders:
            return np.zeros((1, 0), dtype=np.int64)
        grids = np.indices(self.orders).reshape(self.rank, -1).T
        return np.ascontiguousarray(grids.astype(np.int64))

    def index(self, residues: Sequence[int]) -> int:
        idx = 0
        for r, m in zip(residues, self.orders):
            idx = idx * m + (int(r) % m)
        return idx

    def indices(self, arr: np.ndarray) -> np.ndarray:
        if not self.orders:
            return np.zeros(len(arr), dtype=np.int64)
        arr = np.mod(arr, np.array(self.orders, dtype=np.int64))
        return arr @ self._radix

    def element(self, residues: Sequence[int]) -> "GroupElement":
        if len(residues) != self.rank:
            raise GroupError(f"element {list(residues)} has wrong length for group {list(self.orders)}")
        return GroupElement(self, tuple(int(r) % m for r, m in zip(residues, self.orders)))

    def zero(self) -> "GroupElement":
        return GroupElement(self, (0,) * self.rank)

    def elements(self) -> Iterator["GroupElement"]:
        for row in self.element_array:
            yield GroupElement(self, tuple(int(v) for v in row))

    def __iter__(self):
        return self.elements()

    def generators(self) -> list[tuple[int, ...]]:
        return [tuple(int(i == j) for j in range(self.rank)) for i in range(self.rank)]

    def random_element(self, rng) -> "GroupElement":
        return GroupElement(self, tuple(int(rng.integers(m)) for m in self.orders))

    def normalize(self) -> tuple["FinAbGroup", "GroupHom"]:
        """Invariant-factor form and an isomorphism from this group onto it."""
        return cokernel(GroupHom.zero(FinAbGroup(), self))

    def __repr__(self):
        return f"FinAbGroup({list(self.orders)})"


@dataclass(frozen=True)
class GroupElement:
    parent: FinAbGroup
    residues: tuple[int, ...]

    def _check(self, other: "GroupElement"):
        if not isinstance(other, GroupElement) or other.parent != self.parent:
            raise GroupError("elements of different groups")

    def __add__(self, other):
        self._check(other)
        return GroupElement(self.parent, tuple((a + b) % m for a, b, m in zip(self.residues, other.residues, self.parent.orders)))

    def __sub__(self, other):
        self._check(other)
        return GroupElement(self.parent, tuple((a - b) % m for a, b, m in zip(self.residues, other.residues, self.parent.orders)))

    def __neg__(self):
        return GroupElement(self.parent, tuple((-a) % m for a, m in zip(self.residues, self.parent.orders)))

    def __mul__(self, k: int):
        return GroupElement(self.parent, tuple((k * a) % m for a, m in zip(self.residues, self.parent.orders)))

    __rmul__ = __mul__

    def is_zero(self) -> bool:
        return not any(self.residues)

    @property
    def index(self) -> int:
        return self.parent.index(self.residues)

    def order(self) -> int:
        return _fold(lcm, (m // gcd(a, m) for a, m in zip(self.residues, self.parent.orders)), 1)

    def __iter__(self):
        return iter(self.residues)

    def __repr__(self):
        return f"{list(self.residues)}"


def _residues(x) -> tuple[int, ...]:
    return x.residues if isinstance(x, GroupElement) else tuple(int(v) for v in x)


class GroupHom:
    """Homomorphism given by an integer matrix (rows: target, columns: source)."""

    __slots__ = ("source", "target", "matrix", "_np")

    def __init__(self, source: FinAbGroup, target: FinAbGroup, matrix: Sequence[Sequence[int]] | None):
        self.source = source
        self.target = target
        rows = [] if matrix is None else [list(map(int, row)) for row in matrix]
        if target.rank and len(rows) != target.rank:
            raise GroupError(f"matrix needs {target.rank} rows, got {len(rows)}")
        if not target.rank:
            rows = []
        for row in rows:
            if len(row) != source.rank:
                raise GroupError(f"matrix rows need {source.rank} entries, got {len(row)}")
        reduced = []
        for i, n in enumerate(target.orders):
            out = []
            for j, m in enumerate(source.orders):
                v = rows[i][j] % n
                if (m * v) % n:
                    raise GroupError(
                        f"not well defined: generator {j} has order {m} but maps to {v} of order "
                        f"{n // gcd(v, n)} in Z/{n}"
                    )
                out.append(v)
            reduced.append(tuple(out))
        self.matrix = tuple(reduced)
        self._np = None

    @classmethod
    def identity(cls, A: FinAbGroup) -> "GroupHom":
        return cls(A, A, intmat.identity(A.rank))

    @classmethod
    def zero(cls, A: FinAbGroup, B: FinAbGroup) -> "GroupHom":
        return cls(A, B, intmat.zeros(B.rank, A.rank))

    @classmethod
    def from_images(cls, A: FinAbGroup, B: FinAbGroup, images: Sequence[Sequence[int]]) -> "GroupHom":
        """Hom sending the j-th standard generator of A to ``images[j]``."""
        return cls(A, B, intmat.transpose([list(_residues(v)) for v in images], B.rank) if images else intmat.zeros(B.rank, 0))

    @property
    def np_matrix(self) -> np.ndarray:
        if self._np is None:
            self._np = np.array(self.matrix, dtype=np.int64).reshape(self.target.rank, self.source.rank)
        return self._np

    def __call__(self, a) -> GroupElement:
        res = _residues(a)
        if len(res) != self.source.rank:
            raise GroupError("element does not belong to the source group")
        return self.target.element(intmat.matvec(self.matrix, res))

    def apply_array(self, arr: np.ndarray) -> np.ndarray:
        if not self.target.rank:
            return np.zeros((len(arr), 0), dtype=np.int64)
        out = arr @ self.np_matrix.T
        return np.mod(out, np.array(self.target.orders, dtype=np.int64))

    def image_indices(self) -> np.ndarray:
        """Index in the target of the image of every source element."""
        return self.target.indices(self.apply_array(self.source.element_array))

    def __eq__(self, other):
        return (
            isinstance(other, GroupHom)
            and self.source == other.source
            and self.target == other.target
            and self.matrix == other.matrix
        )

    def __hash__(self):
        return hash((self.source, self.target, self.matrix))

    def __matmul__(self, other: "GroupHom") -> "GroupHom":
        return hom_compose(self, other)

    def __add__(self, other: "GroupHom") -> "GroupHom":
        if self.source != other.source or self.target != other.target:
            raise GroupError("can only add homs with equal source and target")
        return GroupHom(self.source, self.target, [[a + b for a, b in zip(r, s)] for r, s in zip(self.matrix, other.matrix)])

    def __neg__(self):
        return GroupHom(self.source, self.target, [[-a for a in r] for r in self.matrix])

    def __sub__(self, other):
        return self + (-other)

    def is_zero(self) -> bool:
        return not any(any(r) for r in self.matrix)

    def image(self) -> "Subgroup":
        return Subgroup(self.target, [self(g) for g in self.source.generators()])

    def is_injective(self) -> bool:
        return self.image().order == self.source.order

    def is_surjective(self) -> bool:
        return self.image().order == self.target.order

    def is_isomorphism(self) -> bool:
        return self.source.order == self.target.order and self.is_injective()

    def __repr__(self):
        return f"GroupHom({list(self.source.orders)} -> {list(self.target.orders)}, {[list(r) for r in self.matrix]})"


def hom_compose(psi: GroupHom, phi: GroupHom) -> GroupHom:
    """The composite ``psi o phi``."""
    if phi.target != psi.source:
        raise CompositionError(f"cannot compose: {phi.target} is not {psi.source}")
    if not psi.target.rank or not phi.source.rank:
        return GroupHom.zero(phi.source, psi.target)
    return GroupHom(phi.source, psi.target, intmat.matmul(psi.matrix, phi.matrix) if phi.target.rank else intmat.zeros(psi.target.rank, phi.source.rank))


# --------------------------------------------------------------------------
# relation-matrix machinery


@lru_cache(maxsize=16384)
def _quotient_data(orders: tuple[int, ...], gens: tuple[tuple[int, ...], ...]):
    """Quotient map A -> A/<gens> as (U rows kept, moduli)."""
    k = len(orders)
    rel = [[g[i] for g in gens] + [orders[i] if j == i else 0 for j in range(k)] for i in range(k)]
    snf = intmat.smith_normal_form(rel, len(gens) + k)
    keep = [i for i, d in enumerate(snf.diagonal) if d != 1]
    U = [snf.U[i] for i in keep]
    moduli = tuple(snf.diagonal[i] for i in keep)
    lifts = [[snf.Uinv[r][i] for r in range(k)] for i in keep]
    return U, moduli, lifts


@lru_cache(maxsize=16384)
def _section_data(orders: tuple[int, ...], top: tuple[tuple[int, ...], ...], bottom: tuple[tuple[int, ...], ...]):
    """Materialize top/bottom as a group: orders, lift vectors, projection matrix."""
    k = len(orders)
    s, b = len(top), len(bottom)
    big = [[t[i] for t in top] + [v[i] for v in bottom] + [orders[i] if j == i else 0 for j in range(k)] for i in range(k)]
    ncols = s + b + k
    kern = intmat.integer_kernel(big, ncols)
    spanning = [vec[:s] for vec in kern]
    if s == 0:
        return (), [], None
    G = intmat.transpose(spanning, s) if spanning else intmat.zeros(s, 0)
    snf = intmat.smith_normal_form(G, len(spanning))
    diag = list(snf.diagonal) + [0] * (s - len(snf.diagonal))
    if any(d == 0 for d in diag[:s]):
        raise GroupError("internal error: relation lattice is not of full rank")
    keep = [i for i in range(s) if diag[i] != 1]
    new_orders = tuple(diag[i] for i in keep)
    lifts = []
    for i in keep:
        c = [snf.Uinv[r][i] for r in range(s)]
        lifts.append([sum(top[j][r] * c[j] for j in range(s)) % orders[r] for r in range(k)])
    # projection: ambient x in top  ->  coordinates; via a particular solution of big*(c,e,f) = x
    bsnf = intmat.smith_normal_form(big, ncols)
    rank = bsnf.rank
    den = 1
    for d in bsnf.diagonal[:rank]:
        den = lcm(den, d)
    # c = V[:s,:rank] diag(1/d) Ubig[:rank]  ;  coords = U_keep c
    W = [[Fraction(0)] * k for _ in range(s)]
    for i in range(rank):
        d = bsnf.diagonal[i]
        urow = bsnf.U[i]
        for r in range(s):
            v = bsnf.V[r][i]
            if v:
                for col in range(k):
                    if urow[col]:
                        W[r][col] += Fraction(v * urow[col], d)
    P = [[sum(Fraction(snf.U[i][r]) * W[r][col] for r in range(s)) for col in range(k)] for i in keep]
    pden = 1
    for row in P:
        for v in row:
            pden = lcm(pden, v.denominator)
    Pint = [[int(v * pden) for v in row] for row in P]
    return new_orders, lifts, (Pint, pden)


class Subgroup:
    """Subgroup of a finite abelian group given by generators."""

    __slots__ = ("ambient", "generators", "__dict__")

    def __init__(self, ambient: FinAbGroup, generators: Iterable = ()):
        self.ambient = ambient
        gens = []
        for g in generators:
            res = _residues(g)
            if len(res) != ambient.rank:
                raise GroupError("generator does not belong to the ambient group")
            r = tuple(int(v) % m for v, m in zip(res, ambient.orders))
            if any(r) and r not in gens:
                gens.append(r)
        self.generators = tuple(sorted(gens))

    @classmethod
    def whole(cls, A: FinAbGroup) -> "Subgroup":
        return cls(A, A.generators())

    @classmethod
    def trivial(cls, A: FinAbGroup) -> "Subgroup":
        return cls(A, [])

    @cached_property
    def _quotient(self):
        return _quotient_data(self.ambient.orders, self.generators)

    @property
    def index(self) -> int:
        return prod(self._quotient[1])

    @property
    def order(self) -> int:
        return self.ambient.order // self.index

    def __len__(self):
        return self.order

    def quotient_group(self) -> tuple[FinAbGroup, GroupHom]:
        """A/S together with the projection."""
        U, moduli, _ = self._quotient
        Q = FinAbGroup(moduli)
        return Q, GroupHom(self.ambient, Q, U if U else intmat.zeros(0, self.ambient.rank))

    def contains(self, x) -> bool:
        U, moduli, _ = self._quotient
        res = _residues(x)
        return all(sum(u * v for u, v in zip(row, res)) % d == 0 for row, d in zip(U, moduli))

    __contains__ = contains

    def contains_many(self, arr: np.ndarray) -> np.ndarray:
        U, moduli, _ = self._quotient
        if not moduli:
            return np.ones(len(arr), dtype=bool)
        Um = np.array(U, dtype=object if _too_big(U) else np.int64)
        vals = arr.astype(Um.dtype) @ Um.T
        return np.all(np.mod(vals, np.array(moduli, dtype=Um.dtype)) == 0, axis=1)

    def issubset(self, other: "Subgroup") -> bool:
        self._same_ambient(other)
        return all(other.contains(g) for g in self.generators)

    def __le__(self, other):
        return self.issubset(other)

    def __eq__(self, other):
        if not isinstance(other, Subgroup):
            return NotImplemented
        return self.ambient == other.ambient and self.issubset(other) and other.issubset(self)

    def __hash__(self):
        return hash((self.ambient, self.order))

    def _same_ambient(self, other: "Subgroup"):
        if self.ambient != other.ambient:
            raise GroupError("subgroups of different ambient groups")

    def __add__(self, other: "Subgroup") -> "Subgroup":
        self._same_ambient(other)
        return Subgroup(self.ambient, self.generators + other.generators)

    def intersect(self, other: "Subgroup") -> "Subgroup":
        """S ∩ T from the integer kernel of [S | -T | diag(m)]."""
        self._same_ambient(other)
        if not self.generators or not other.generators:
            return Subgroup.trivial(self.ambient)
        A = self.ambient
        k, s, t = A.rank, len(self.generators), len(other.generators)
        big = [
            [g[i] for g in self.generators] + [-h[i] for h in other.generators] + [A.orders[i] if j == i else 0 for j in range(k)]
            for i in range(k)
        ]
        kern = intmat.integer_kernel(big, s + t + k)
        gens = []
        for vec in kern:
            c = vec[:s]
            gens.append([sum(c[j] * self.generators[j][i] for j in range(s)) for i in range(k)])
        return Subgroup(A, gens)

    __and__ = intersect

    def perp(self) -> "Subgroup":
        """Characters of the ambient group killing every generator, inside the dual group."""
        A = self.ambient
        Ahat = dual_group(A)
        if not self.generators:
            return Subgroup.whole(Ahat)
        e = A.exponent
        k = A.rank
        W = [[g[i] * (e // A.orders[i]) for i in range(k)] for g in self.generators]
        rows = len(W)
        big = [W[r] + [e if j == r else 0 for j in range(rows)] for r in range(rows)]
        kern = intmat.integer_kernel(big, k + rows)
        return Subgroup(Ahat, [vec[:k] for vec in kern] + [[A.orders[i] if j == i else 0 for j in range(k)] for i in range(k)])

    def image(self, phi: GroupHom) -> "Subgroup":
        if phi.source != self.ambient:
            raise GroupError("hom source is not the ambient group")
        return Subgroup(phi.target, [phi(g) for g in self.generators])

    def preimage(self, phi: GroupHom) -> "Subgroup":
        """``phi^{-1}(self)`` as a subgroup of phi's source."""
        if phi.target != self.ambient:
            raise GroupError("hom target is not the ambient group")
        Q, q = self.quotient_group()
        return kernel_subgroup(q @ phi)

    def elements_array(self) -> np.ndarray:
        grp, lift = self.materialize()
        return lift.apply_array(grp.element_array)

    def elements(self) -> list[GroupElement]:
        return [GroupElement(self.ambient, tuple(int(v) for v in row)) for row in self.elements_array()]

    def materialize(self) -> tuple[FinAbGroup, GroupHom]:
        """This subgroup as a group in its own right, with its inclusion."""
        sec = Section(self, Subgroup.trivial(self.ambient))
        return sec.group, sec.lift_hom()

    def __repr__(self):
        return f"Subgroup({list(self.ambient.orders)}, gens={[list(g) for g in self.generators]}, order={self.order})"


def _too_big(rows) -> bool:
    return any(abs(v) > 2**20 for row in rows for v in row)


class Section:
    """The subquotient top/bottom of an ambient group, materialized as a group.

    ``project`` sends ambient elements of ``top`` to coordinates of ``group``;
    ``lift`` goes back to chosen representatives in ``top``.
    """

    def __init__(self, top: Subgroup, bottom: Subgroup):
        if top.ambient != bottom.ambient:
            raise GroupError("section bounds live in different groups")
        self.ambient = top.ambient
        self.top = top
        self.bottom = bottom
        orders, lifts, proj = _section_data(self.ambient.orders, top.generators, bottom.generators)
        self.group = FinAbGroup(orders)
        self._lifts = lifts
        self._proj = proj

    @property
    def order(self) -> int:
        return self.group.order

    def lift(self, x) -> tuple[int, ...]:
        res = _residues(x)
        k = self.ambient.rank
        out = [0] * k
        for c, vec in zip(res, self._lifts):
            for r in range(k):
                out[r] += c * vec[r]
        return tuple(v % m for v, m in zip(out, self.ambient.orders))

    def lift_hom(self) -> GroupHom:
        return GroupHom.from_images(self.group, self.ambient, self._lifts) if self._lifts else GroupHom.zero(self.group, self.ambient)

    def lift_array(self, arr: np.ndarray) -> np.ndarray:
        if not self._lifts:
            return np.zeros((len(arr), self.ambient.rank), dtype=np.int64)
        L = np.array(self._lifts, dtype=np.int64)
        return np.mod(arr @ L, np.array(self.ambient.orders, dtype=np.int64)) if self.ambient.rank else arr[:, :0]

    def project(self, x) -> tuple[int, ...]:
        res = _residues(x)
        if not self.top.contains(res):
            raise GroupError(f"{list(res)} does not lie in the section's top subgroup")
        if self._proj is None:
            return ()
        P, den = self._proj
        out = []
        for row, d in zip(P, self.group.orders):
            v = sum(p * r for p, r in zip(row, res))
            if v % den:
                raise GroupError("internal error: projection is not integral")
            out.append((v // den) % d)
        return tuple(out)

    def project_array(self, arr: np.ndarray) -> np.ndarray:
        if self._proj is None or not self.group.rank:
            return np.zeros((len(arr), 0), dtype=np.int64)
        P, den = self._proj
        dtype = object if _too_big(P) else np.int64
        vals = arr.astype(dtype) @ np.array(P, dtype=dtype).T
        return np.mod(vals // den, np.array(self.group.orders, dtype=dtype)).astype(np.int64)

    def induced_hom(self, phi: GroupHom, other: "Section") -> GroupHom:
        """The map self.group -> other.group induced by an ambient hom."""
        images = []
        for lift in self._lifts:
            y = phi(lift).residues
            if not other.top.contains(y):
                raise GroupError("hom does not map the section into the target section")
            images.append(other.project(y))
        if not images:
            return GroupHom.zero(self.group, other.group)
        return GroupHom.from_images(self.group, other.group, images)


# --------------------------------------------------------------------------
# structure theory


def smith_normal_form(M: Sequence[Sequence[int]]):
    """(U, D, V) with U unimodular, V unimodular and ``U M V = D`` diagonal."""
    ncols = len(M[0]) if M else 0
    snf = intmat.smith_normal_form(M, ncols)
    return snf.U, snf.D, snf.V


def kernel_subgroup(phi: GroupHom) -> Subgroup:
    A, B = phi.source, phi.target
    k, l = A.rank, B.rank
    if not k:
        return Subgroup.trivial(A)
    if not l:
        return Subgroup.whole(A)
    big = [list(phi.matrix[i]) + [B.orders[i] if j == i else 0 for j in range(l)] for i in range(l)]
    kern = intmat.integer_kernel(big, k + l)
    return Subgroup(A, [vec[:k] for vec in kern])


def kernel(phi: GroupHom) -> tuple[FinAbGroup, GroupHom]:
    """Kernel group K with its (injective) inclusion into the source."""
    return kernel_subgroup(phi).materialize()


def cokernel(phi: GroupHom) -> tuple[FinAbGroup, GroupHom]:
    """Cokernel group C with the (surjective) projection from the target."""
    return phi.image().quotient_group()


def image_order(phi: GroupHom) -> int:
    return phi.image().order


def dual_group(A: FinAbGroup) -> FinAbGroup:
    """Hom(A, Q/Z) in the coordinates dual to the cyclic decomposition of A."""
    return FinAbGroup(A.orders)


def pairing0(a, alpha) -> QmodZ:
    """``alpha(a) = sum_i a_i alpha_i / m_i  mod 1``."""
    if isinstance(a, GroupElement) and isinstance(alpha, GroupElement):
        if a.parent.orders != alpha.parent.orders:
            raise GroupError("element and character belong to groups that are not dual to each other")
        orders = a.parent.orders
    else:
        raise GroupError("pairing needs two group elements")
    return QmodZ(sum(Fraction(x * y, m) for x, y, m in zip(a.residues, alpha.residues, orders)))


def pairing_matrix(A: FinAbGroup, scale: int | None = None) -> np.ndarray:
    """``scale * (a, alpha) mod scale`` for all a (rows) and alpha (columns)."""
    e = A.exponent if scale is None else scale
    if e % A.exponent:
        raise GroupError("scale must be a multiple of the exponent")
    E = A.element_array
    w = np.array([e // m for m in A.orders], dtype=np.int64)
    return np.mod((E * w) @ E.T, e) if A.rank else np.zeros((1, 1), dtype=np.int64)


def dual_hom(phi: GroupHom) -> GroupHom:
    """``phi^: B^ -> A^`` with ``(phi(a), beta) = (a, phi^(beta))``."""
    A, B = phi.source, phi.target
    m, n = A.orders, B.orders
    M = [[(m[j] * phi.matrix[i][j] // n[i]) % m[j] for i in range(len(n))] for j in range(len(m))]
    return GroupHom(dual_group(B), dual_group(A), M if m else [])


def double_dual_iso(A: FinAbGroup) -> GroupHom:
    """``delta: A -> A^^`` with ``delta(a)(alpha) = alpha(a)``.

    Coordinates of delta(a) are found by evaluating on the basis characters.
    """
    Ahat = dual_group(A)
    AA = dual_group(Ahat)
    images = []
    for g in A.generators():
        a = A.element(g)
        coords = []
        for i, mi in enumerate(Ahat.orders):
            chi = Ahat.element([int(i == j) for j in range(Ahat.rank)])
            coords.append(int(pairing0(a, chi).value * mi) % mi)
        images.append(coords)
    return GroupHom.from_images(A, AA, images) if images else GroupHom.zero(A, AA)


def brute_kernel_order(phi: GroupHom) -> int:
    """Enumeration oracle."""
    imgs = phi.apply_array(phi.source.element_array)
    return int(np.sum(np.all(imgs == 0, axis=1)))


def brute_image_order(phi: GroupHom) -> int:
    return len(np.unique(phi.image_indices()))
